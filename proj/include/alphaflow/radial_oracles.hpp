#pragma once

#include <vector>

namespace alphaflow {

// Independent one-dimensional reference solvers for angularly-symmetric
// cases. They use uniform-node finite differences (a different
// discretization family than the spectral solver) so agreement between the
// two is evidence, not tautology.

struct RadialProfile {
    std::vector<double> nodes;  // strictly increasing, spans [r0, r1]
    std::vector<double> values;
};

RadialProfile make_uniform_profile(double r0, double r1, int n);

// evaluate a profile at r by cubic interpolation
double profile_at(const RadialProfile& p, double r);

// f_theta(r) = (1/r) * integral_{r0}^{r} s q(s) ds, cumulative 4th-order
// quadrature; the inner circulation vanishes by construction
RadialProfile oracle_biot_savart_radial(const RadialProfile& q);

// dense second-order solve of w - alpha (w'' + w'/r - w/r^2) = f with
// w(r0) = w(r1) = 0 (tridiagonal)
RadialProfile oracle_filtered_inverse_radial(const RadialProfile& f, double alpha);

// one theta-weighted step of dq/dt = eps (q'' + q'/r) with homogeneous
// Dirichlet data; theta = 1 is the backward step, theta = 1/2 the
// trapezoidal one
RadialProfile oracle_heat_radial(const RadialProfile& q, double eps, double dt, int substeps = 1,
                                 double theta = 1.0);

struct SecondGradeRadialResult {
    RadialProfile q;
    double gamma = 0.0;
};

// method-of-lines integration of dq/dt = (nu/alpha)(omega - q) where
// omega = curl u and u is the mode-0 Dirichlet velocity carrying the decayed
// circulation gamma(t) = gamma0 exp(-nu t / alpha); RK4 in time
SecondGradeRadialResult oracle_second_grade_radial(const RadialProfile& q0, double gamma0,
                                                   double alpha, double nu, double t_end,
                                                   int n_steps);

}  // namespace alphaflow
