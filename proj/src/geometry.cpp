#include "alphaflow/geometry.hpp"

#include <cmath>

#include "alphaflow/chebyshev.hpp"
#include "alphaflow/simd/kernels.hpp"

namespace alphaflow {

namespace {

void check_angular(int n_angular) {
    if (n_angular < 8 || n_angular % 2 != 0)
        throw GridError("n_angular must be even and >= 8, got " + std::to_string(n_angular));
}

// piecewise-cubic quadrature weights on a uniform grid (4th order); the
// global interpolant of 64 equispaced nodes is useless for integration
std::vector<double> uniform_quadrature_weights(const std::vector<double>& nodes, int moment) {
    const int n = static_cast<int>(nodes.size());
    std::vector<double> w(n, 0.0);
    std::vector<double> gx, gw;
    for (int cell = 0; cell + 1 < n; ++cell) {
        int s0 = cell - 1;
        if (s0 < 0) s0 = 0;
        if (s0 + 3 >= n) s0 = n - 4;
        const std::vector<double> sten(nodes.begin() + s0, nodes.begin() + s0 + 4);
        const std::vector<double> bw = barycentric_weights(sten);
        gauss_legendre(nodes[cell], nodes[cell + 1], 4, gx, gw);
        for (int q = 0; q < 4; ++q) {
            double xm = 1.0;
            for (int k = 0; k < moment; ++k) xm *= gx[q];
            double denom = 0.0;
            double basis[4];
            for (int i = 0; i < 4; ++i) {
                basis[i] = bw[i] / (gx[q] - sten[i]);
                denom += basis[i];
            }
            for (int i = 0; i < 4; ++i) w[s0 + i] += gw[q] * xm * basis[i] / denom;
        }
    }
    return w;
}

void fill_area_weights(PolarGrid& g, std::vector<double>& radial_w) {
    const int nr = static_cast<int>(radial_w.size());
    std::vector<double> area(static_cast<std::size_t>(nr) * g.n_angular());
    const double dtheta = 2.0 * M_PI / g.n_angular();
    for (int i = 0; i < nr; ++i) {
        const double wi = radial_w[i] * dtheta;
        for (int j = 0; j < g.n_angular(); ++j)
            area[static_cast<std::size_t>(i) * g.n_angular() + j] = wi;
    }
    area.swap(radial_w);
}

}  // namespace

GridPtr build_annulus(double r_inner, double r_outer, int n_radial, int n_angular,
                      RadialSpacing spacing) {
    if (!(r_inner > 0.0))
        throw GridError("r_inner must be positive, got " + std::to_string(r_inner));
    if (!(r_inner < r_outer))
        throw GridError("r_inner must be smaller than r_outer, got r_inner=" +
                        std::to_string(r_inner) + " r_outer=" + std::to_string(r_outer));
    if (n_radial < 8) throw GridError("n_radial must be >= 8, got " + std::to_string(n_radial));
    check_angular(n_angular);

    auto g = std::shared_ptr<PolarGrid>(new PolarGrid());
    g->r_inner_ = r_inner;
    g->r_outer_ = r_outer;
    g->n_radial_ = n_radial;
    g->n_angular_ = n_angular;
    g->dtheta_ = 2.0 * M_PI / n_angular;
    g->spacing_ = spacing;
    g->radial_nodes_ = spacing == RadialSpacing::chebyshev
                           ? chebyshev_lobatto_nodes(r_inner, r_outer, n_radial)
                           : uniform_nodes(r_inner, r_outer, n_radial);

    std::vector<double> rw = spacing == RadialSpacing::chebyshev
                                 ? interpolatory_weights(g->radial_nodes_, 1)
                                 : uniform_quadrature_weights(g->radial_nodes_, 1);
    fill_area_weights(*g, rw);
    g->quadrature_weights_ = std::move(rw);
    return g;
}

GridPtr build_disk(double r_outer, int n_radial, int n_angular) {
    if (!(r_outer > 0.0))
        throw GridError("r_outer must be positive, got " + std::to_string(r_outer));
    if (n_radial < 8) throw GridError("n_radial must be >= 8, got " + std::to_string(n_radial));
    check_angular(n_angular);

    auto g = std::shared_ptr<PolarGrid>(new PolarGrid());
    g->r_inner_ = 0.0;
    g->r_outer_ = r_outer;
    g->n_radial_ = n_radial;
    g->n_angular_ = n_angular;
    g->dtheta_ = 2.0 * M_PI / n_angular;
    g->spacing_ = RadialSpacing::chebyshev;

    // positive half of a 2*n_radial Lobatto grid on [-r_outer, r_outer]
    const int m = n_radial;
    const std::vector<double> full = chebyshev_lobatto_nodes(-r_outer, r_outer, 2 * m);
    g->radial_nodes_.assign(full.begin() + m, full.end());

    // Quadrature through the full symmetric grid (interpolation on the half
    // grid alone is unstable near the origin): integrate the full-grid basis
    // against |s| ds and fold the mirrored contributions, which is exact for
    // the parity extension the solver works with.
    const std::vector<double> wpos = interpolatory_weights(full, 1, 0.0, r_outer);
    const std::vector<double> wneg = interpolatory_weights(full, 1, -r_outer, 0.0);
    std::vector<double> rw(m);
    for (int i = 0; i < m; ++i) {
        const double v_here = wpos[m + i] - wneg[m + i];
        const double v_mirror = wpos[m - 1 - i] - wneg[m - 1 - i];
        rw[i] = 0.5 * (v_here + v_mirror);
    }
    fill_area_weights(*g, rw);
    g->quadrature_weights_ = std::move(rw);
    return g;
}

double integrate(const ScalarField& f) {
    const auto& w = f.grid->quadrature_weights();
    return simd::active().dot(w.data(), f.values.data(), w.size());
}

double circulation(const VectorField& w, int component_index) {
    const PolarGrid& g = *w.grid;
    int row = -1;
    double radius = 0.0;
    if (component_index == -1) {
        row = g.n_radial() - 1;
        radius = g.r_outer();
    } else if (component_index == 0 && g.n_boundary_components() == 1) {
        row = 0;
        radius = g.r_inner();
    } else {
        const std::string avail = g.n_boundary_components() == 1
                                      ? "0 (inner boundary) and -1 (outer boundary)"
                                      : "-1 (outer boundary)";
        throw std::out_of_range("circulation: no boundary component " +
                                std::to_string(component_index) + "; available: " + avail);
    }
    // trapezoid rule on the periodic circle: R * dtheta * sum_j w_theta
    const double* line = w.angular.data() + g.index(row, 0);
    const double s = simd::active().sum(line, g.n_angular());
    return radius * g.dtheta() * s;
}

}  // namespace alphaflow
