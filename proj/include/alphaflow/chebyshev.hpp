#pragma once

#include <Eigen/Dense>
#include <vector>

namespace alphaflow {

// Radial collocation helpers: node families, barycentric differentiation
// matrices and interpolatory quadrature weights on arbitrary distinct nodes.

// n Chebyshev-Gauss-Lobatto nodes mapped to [a, b], strictly increasing,
// endpoints included.
std::vector<double> chebyshev_lobatto_nodes(double a, double b, int n);

// n uniformly spaced nodes on [a, b], endpoints included.
std::vector<double> uniform_nodes(double a, double b, int n);

// Barycentric weights for polynomial interpolation on the given nodes
// (common scale factored out for overflow safety).
std::vector<double> barycentric_weights(const std::vector<double>& nodes);

// Spectral differentiation matrix: (D f)(x_i) = p'(x_i) where p interpolates
// the nodal values of f.
Eigen::MatrixXd differentiation_matrix(const std::vector<double>& nodes);

// Quadrature weights w_i with sum_i w_i f_i = integral over [a, b] of the
// polynomial interpolant of f times x^moment (moment = 0 gives plain dx
// weights, moment = 1 gives x dx weights, the polar area element). The
// interval defaults to the node span; the folded disk grid integrates from
// the origin instead. Exact for the interpolant; computed with a
// Gauss-Legendre reference rule.
std::vector<double> interpolatory_weights(const std::vector<double>& nodes, int moment,
                                          double a, double b);
std::vector<double> interpolatory_weights(const std::vector<double>& nodes, int moment);

// Gauss-Legendre rule with n points on [a, b].
void gauss_legendre(double a, double b, int n, std::vector<double>& x, std::vector<double>& w);

// Evaluate the interpolating polynomial through (nodes, values) at x
// (barycentric formula; exact nodal hit returns the nodal value).
double barycentric_eval(const std::vector<double>& nodes, const std::vector<double>& bary_w,
                        const std::vector<double>& values, double x);

}  // namespace alphaflow
