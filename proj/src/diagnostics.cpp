#include "alphaflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "alphaflow/elliptic.hpp"
#include "alphaflow/simd/kernels.hpp"

namespace alphaflow {

double lp_norm(const ScalarField& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    const auto& w = f.grid->quadrature_weights();
    if (p == 2.0) {
        return std::sqrt(
            simd::active().weighted_dot(w.data(), f.values.data(), f.values.data(), w.size()));
    }
    const double s = simd::weighted_abs_pow_sum(w.data(), f.values.data(), p, w.size());
    return std::pow(s, 1.0 / p);
}

double l2_norm(const VectorField& u) {
    const auto& w = u.grid->quadrature_weights();
    const double s =
        simd::active().weighted_dot(w.data(), u.radial.data(), u.radial.data(), w.size()) +
        simd::active().weighted_dot(w.data(), u.angular.data(), u.angular.data(), w.size());
    return std::sqrt(s);
}

double grad_sq_norm(const ModalEllipticWorkspace& ws, const VectorField& u) {
    // orthonormal-frame gradient entries:
    //   d_r u_r, d_r u_t, (d_t u_r - u_t)/r, (d_t u_t + u_r)/r
    const PolarGrid& g = ws.grid();
    const int nr = g.n_radial();
    const int nm = ws.transform().n_modes();
    const int nyquist = g.n_angular() / 2;
    const ModalBuffer ur = ws.to_modes(u.radial);
    const ModalBuffer ut = ws.to_modes(u.angular);

    ModalBuffer dr_ur(ur.size()), dr_ut(ur.size()), ang_r(ur.size()), ang_t(ur.size());
    for (int k = 0; k < nm; ++k) {
        Eigen::VectorXcd vr(nr), vt(nr);
        for (int i = 0; i < nr; ++i) {
            vr[i] = ur[static_cast<std::size_t>(i) * nm + k];
            vt[i] = ut[static_cast<std::size_t>(i) * nm + k];
        }
        const Eigen::MatrixXd& d = ws.d1(k, true);
        Eigen::VectorXcd a(nr), b(nr), c(nr), e(nr);
        a.real() = d * vr.real();
        a.imag() = d * vr.imag();
        b.real() = d * vt.real();
        b.imag() = d * vt.imag();
        const std::complex<double> ik =
            (k == nyquist) ? std::complex<double>(0.0, 0.0) : std::complex<double>(0.0, k);
        for (int i = 0; i < nr; ++i) {
            const double invr = ws.inv_r()[i];
            c[i] = (ik * vr[i] - vt[i]) * invr;
            e[i] = (ik * vt[i] + vr[i]) * invr;
        }
        for (int i = 0; i < nr; ++i) {
            const std::size_t idx = static_cast<std::size_t>(i) * nm + k;
            dr_ur[idx] = a[i];
            dr_ut[idx] = b[i];
            ang_r[idx] = c[i];
            ang_t[idx] = e[i];
        }
    }

    std::vector<double> tmp;
    const auto& w = g.quadrature_weights();
    double total = 0.0;
    for (const ModalBuffer* comp : {&dr_ur, &dr_ut, &ang_r, &ang_t}) {
        ws.to_values(*comp, tmp);
        total += simd::active().weighted_dot(w.data(), tmp.data(), tmp.data(), w.size());
    }
    return total;
}

double energy_h1_alpha(const ModalEllipticWorkspace& ws, const VectorField& u, double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("energy_h1_alpha: alpha must be >= 0");
    const double l2 = l2_norm(u);
    if (alpha == 0.0) return l2;
    return std::sqrt(l2 * l2 + alpha * grad_sq_norm(ws, u));
}

double h1_norm(const ModalEllipticWorkspace& ws, const VectorField& u) {
    const double l2 = l2_norm(u);
    return std::sqrt(l2 * l2 + grad_sq_norm(ws, u));
}

double l2_velocity_error(const VectorField& a, const VectorField& b) {
    if (a.grid.get() != b.grid.get())
        throw std::invalid_argument("l2_velocity_error: fields live on different grids");
    const auto& w = a.grid->quadrature_weights();
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double dr = a.radial[i] - b.radial[i];
        const double dt = a.angular[i] - b.angular[i];
        s += w[i] * (dr * dr + dt * dt);
    }
    return std::sqrt(s);
}

std::vector<ConvergenceRow> convergence_table(
    const std::vector<std::pair<double, VectorField>>& runs, const VectorField& reference) {
    if (runs.size() < 2)
        throw std::invalid_argument("convergence_table: need at least two runs");
    std::vector<ConvergenceRow> rows;
    rows.reserve(runs.size());
    for (const auto& [alpha, field] : runs)
        rows.push_back({alpha, l2_velocity_error(field, reference),
                        std::numeric_limits<double>::quiet_NaN()});
    std::sort(rows.begin(), rows.end(),
              [](const ConvergenceRow& a, const ConvergenceRow& b) { return a.alpha > b.alpha; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double num = std::log(rows[i - 1].error_l2 / rows[i].error_l2);
        const double den = std::log(rows[i - 1].alpha / rows[i].alpha);
        rows[i].observed_order = num / den;
    }
    return rows;
}

}  // namespace alphaflow
