#pragma once

#include <complex>
#include <vector>

namespace alphaflow {

// Batched real<->complex Fourier transform along the (contiguous) angular
// direction of a radial-major field. Forward output holds true Fourier
// coefficients: f(r_i, theta_j) = sum_{k=-n/2}^{n/2} c_k(r_i) e^{i k theta_j}
// with c_{-k} = conj(c_k); only k = 0..n/2 are stored.
//
// Plans are created with FFTW_ESTIMATE so planning is deterministic; plan
// creation is serialized internally, execution on distinct buffers is
// thread-safe.
class AngularTransform {
  public:
    AngularTransform(int n_radial, int n_angular);
    ~AngularTransform();
    AngularTransform(const AngularTransform&) = delete;
    AngularTransform& operator=(const AngularTransform&) = delete;

    int n_radial() const { return n_radial_; }
    int n_angular() const { return n_angular_; }
    int n_modes() const { return n_angular_ / 2 + 1; }

    // real (n_radial x n_angular) -> coefficients (n_radial x n_modes)
    void forward(const double* real_in, std::complex<double>* modes_out) const;
    // coefficients -> real samples (input unchanged)
    void inverse(const std::complex<double>* modes_in, double* real_out) const;

  private:
    int n_radial_, n_angular_;
    void* plan_fwd_ = nullptr;  // fftw_plan
    void* plan_inv_ = nullptr;
};

// Workspace-sized modal buffer: radial-major, modes[i*n_modes + k].
using ModalBuffer = std::vector<std::complex<double>>;

}  // namespace alphaflow
