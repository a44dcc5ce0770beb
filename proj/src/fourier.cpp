#include "alphaflow/fourier.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace alphaflow {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

AngularTransform::AngularTransform(int n_radial, int n_angular)
    : n_radial_(n_radial), n_angular_(n_angular) {
    if (n_angular % 2 != 0) throw std::invalid_argument("AngularTransform: n_angular must be even");
    const int nm = n_modes();
    std::vector<double> rbuf(static_cast<std::size_t>(n_radial) * n_angular);
    std::vector<fftw_complex> cbuf(static_cast<std::size_t>(n_radial) * nm);

    std::lock_guard<std::mutex> lock(planner_mutex());
    const int n[1] = {n_angular};
    plan_fwd_ = fftw_plan_many_dft_r2c(1, n, n_radial, rbuf.data(), nullptr, 1, n_angular,
                                       cbuf.data(), nullptr, 1, nm,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_inv_ = fftw_plan_many_dft_c2r(1, n, n_radial, cbuf.data(), nullptr, 1, nm, rbuf.data(),
                                       nullptr, 1, n_angular, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan_fwd_ == nullptr || plan_inv_ == nullptr)
        throw std::runtime_error("AngularTransform: fftw plan creation failed");
}

AngularTransform::~AngularTransform() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_fwd_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_inv_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

void AngularTransform::forward(const double* real_in, std::complex<double>* modes_out) const {
    // r2c preserves its input; the const_cast is an FFTW API artifact
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_), const_cast<double*>(real_in),
                         reinterpret_cast<fftw_complex*>(modes_out));
    const double norm = 1.0 / n_angular_;
    const std::size_t total = static_cast<std::size_t>(n_radial_) * n_modes();
    for (std::size_t i = 0; i < total; ++i) modes_out[i] *= norm;
}

void AngularTransform::inverse(const std::complex<double>* modes_in, double* real_out) const {
    // c2r destroys its input, so run it on a scratch copy
    const std::size_t total = static_cast<std::size_t>(n_radial_) * n_modes();
    std::vector<std::complex<double>> scratch(modes_in, modes_in + total);
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inv_),
                         reinterpret_cast<fftw_complex*>(scratch.data()), real_out);
}

}  // namespace alphaflow
