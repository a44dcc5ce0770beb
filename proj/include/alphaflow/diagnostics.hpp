#pragma once

#include <vector>

#include "alphaflow/geometry.hpp"

namespace alphaflow {

class ModalEllipticWorkspace;

// One diagnostics row per cadence tick.
struct DiagnosticRecord {
    double time = 0.0;
    std::vector<double> gamma;             // stored circulations of v
    std::vector<double> gamma_recomputed;  // circulations recomputed from the fields
    double energy_h1_alpha = 0.0;          // (||u||^2 + alpha ||grad u||^2)^(1/2)
    double lp_norm_q = 0.0;
    double integral_q = 0.0;
    double l2_norm_u = 0.0;
    double h1_norm_u = 0.0;
};

// (sum_j w_j |f_j|^p)^(1/p); requires p >= 1
double lp_norm(const ScalarField& f, double p);

double l2_norm(const VectorField& u);

// squared L2 norm of the full polar velocity gradient, metric terms included
double grad_sq_norm(const ModalEllipticWorkspace& ws, const VectorField& u);

// (||u||^2_{L2} + alpha ||grad u||^2_{L2})^(1/2)
double energy_h1_alpha(const ModalEllipticWorkspace& ws, const VectorField& u, double alpha);

// (||u||^2 + ||grad u||^2)^(1/2)
double h1_norm(const ModalEllipticWorkspace& ws, const VectorField& u);

// ||a - b||_{L2}; the fields must live on one grid
double l2_velocity_error(const VectorField& a, const VectorField& b);

struct ConvergenceRow {
    double alpha = 0.0;
    double error_l2 = 0.0;
    double observed_order = 0.0;  // NaN on the first (largest-alpha) row
};

// Rows sorted by decreasing alpha; observed_order compares consecutive
// errors on the log scale. Requires at least two runs on one grid.
std::vector<ConvergenceRow> convergence_table(
    const std::vector<std::pair<double, VectorField>>& runs, const VectorField& reference);

}  // namespace alphaflow
