#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <vector>

#include "alphaflow/fourier.hpp"
#include "alphaflow/geometry.hpp"

namespace alphaflow {

// All elliptic solves share one workspace per grid: Fourier analysis in
// theta, dense Chebyshev collocation in r, one banded-in-mode factorization
// per Fourier mode. Velocity fields are represented through stream
// functions, so every field the solver touches is divergence free and the
// Leray projection is the identity on it.
//
// The filtered inversion (1 + alpha A)^{-1} is solved per mode in
// stream-function form as the coupled second-order system
//     lap_k phi - zeta = 0,   zeta - alpha lap_k zeta = g_k,
// with phi and phi' fixed on both circles. The additive constant of phi on
// the inner circle (mode 0 on the annulus) is resolved by the influence
// matrix: one solve with homogeneous constant, one with unit constant,
// combined so that the circulation of w - alpha*lap(w) matches the input's.
//
// On the disk the radial grid is the positive half of a Lobatto grid on
// [-R, R]; per-mode parity of the extension replaces the inner boundary
// condition and no node sits at the origin.
//
// Workspaces are immutable after construction apart from an internal
// mutex-guarded cache of per-alpha factorizations; per-mode solves are
// independent and all operations are pure functions of their inputs.
class ModalEllipticWorkspace {
  public:
    explicit ModalEllipticWorkspace(GridPtr grid);
    ~ModalEllipticWorkspace();

    const PolarGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const AngularTransform& transform() const { return *transform_; }

    // scalar-parity first/second radial derivative matrices for mode k
    // (annulus: mode independent)
    const Eigen::MatrixXd& d1(int k, bool vector_component = false) const;
    const Eigen::MatrixXd& d2(int k, bool vector_component = false) const;
    const Eigen::VectorXd& inv_r() const { return inv_r_; }

    // apply the mode-k scalar Laplacian d2 + (1/r) d1 - k^2/r^2
    Eigen::VectorXcd apply_mode_laplacian(int k, const Eigen::VectorXcd& v,
                                          bool vector_component = false) const;

    ModalBuffer to_modes(const std::vector<double>& values) const;
    void to_values(const ModalBuffer& modes, std::vector<double>& values) const;

  private:
    friend ScalarField curl(const ModalEllipticWorkspace&, const VectorField&);
    friend VectorField vector_laplacian(const ModalEllipticWorkspace&, const VectorField&);
    friend VectorField biot_savart(const ModalEllipticWorkspace&, const ScalarField&);
    friend VectorField helmholtz_stokes_inverse(const ModalEllipticWorkspace&, const VectorField&,
                                                double);
    friend VectorField velocity_from_state(const ModalEllipticWorkspace&, const ScalarField&,
                                           const std::vector<double>&, double);
    friend class ModalHelmholtzSolver;
    friend struct EllipticDetail;

    struct Impl;
    std::unique_ptr<Impl> impl_;
    GridPtr grid_;
    std::unique_ptr<AngularTransform> transform_;
    Eigen::VectorXd inv_r_;
};

// scalar curl (1/r)[d_r(r u_theta) - d_theta u_r]
ScalarField curl(const ModalEllipticWorkspace& ws, const VectorField& u);

// componentwise polar vector Laplacian of a velocity field
VectorField vector_laplacian(const ModalEllipticWorkspace& ws, const VectorField& u);

// S(q): the divergence-free field tangent to the boundary with curl q and
// vanishing circulation on the inner boundary
VectorField biot_savart(const ModalEllipticWorkspace& ws, const ScalarField& q);

// Y_i: unit-circulation harmonic field; annulus only, i = 1
VectorField harmonic_field(const ModalEllipticWorkspace& ws, int i);

// w = (1 + alpha A)^{-1} f for f divergence free and tangent to the
// boundary; w vanishes on the whole boundary. alpha must be positive.
VectorField helmholtz_stokes_inverse(const ModalEllipticWorkspace& ws, const VectorField& f,
                                     double alpha);

// u = T(q) + sum_i gamma_i Xtilde_i for alpha > 0 (Dirichlet velocity);
// u = S(q) + sum_i gamma_i Y_i for alpha = 0 (tangent velocity only)
VectorField velocity_from_state(const ModalEllipticWorkspace& ws, const ScalarField& q,
                                const std::vector<double>& gamma, double alpha);

// (I - coef * Laplacian)^{-1} with homogeneous Dirichlet data, per mode;
// backs the artificial-viscosity step
class ModalHelmholtzSolver {
  public:
    ModalHelmholtzSolver(const ModalEllipticWorkspace& ws, double coef);
    ~ModalHelmholtzSolver();
    ScalarField solve(const ScalarField& rhs) const;

  private:
    const ModalEllipticWorkspace& ws_;
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Band-limited random scalar field: angular modes |k| <= n_angular/4,
// Chebyshev radial degrees below n_radial/2, coefficients uniform in [-1,1].
ScalarField random_band_limited(const ModalEllipticWorkspace& ws, std::mt19937_64& rng);

struct OperatorBoundReport {
    std::vector<double> ratios;  // ||T(q)||_H1 / ||q||_Lp per trial
    double sup_ratio = 0.0;
};

OperatorBoundReport probe_operator_bound(const ModalEllipticWorkspace& ws, double alpha, double p,
                                         int trials, unsigned long seed);

// least-squares slope of log(y) against log(x)
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace alphaflow
