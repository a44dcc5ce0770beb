#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace alphaflow {

enum class RadialSpacing { chebyshev, uniform };

class GridError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Discrete annulus {r_inner < r < r_outer} (one inner boundary component) or
// disk (r_inner = 0, no inner boundary; no node sits at the origin).
// Immutable after construction; fields reference grids through shared_ptr.
class PolarGrid {
  public:
    double r_inner() const { return r_inner_; }
    double r_outer() const { return r_outer_; }
    int n_radial() const { return n_radial_; }
    int n_angular() const { return n_angular_; }
    int n_boundary_components() const { return r_inner_ > 0.0 ? 1 : 0; }
    bool is_disk() const { return r_inner_ == 0.0; }
    RadialSpacing spacing() const { return spacing_; }

    // strictly increasing; annulus: nodes span [r_inner, r_outer];
    // disk: first node > 0, last node = r_outer
    const std::vector<double>& radial_nodes() const { return radial_nodes_; }
    double theta(int j) const { return dtheta_ * j; }
    double dtheta() const { return dtheta_; }

    // per-node area weights (radial-major, length n_radial*n_angular);
    // sum equals the domain area
    const std::vector<double>& quadrature_weights() const { return quadrature_weights_; }

    std::size_t size() const { return static_cast<std::size_t>(n_radial_) * n_angular_; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_angular_ + j; }

    friend std::shared_ptr<const PolarGrid> build_annulus(double, double, int, int, RadialSpacing);
    friend std::shared_ptr<const PolarGrid> build_disk(double, int, int);

  private:
    PolarGrid() = default;
    double r_inner_ = 0.0, r_outer_ = 0.0, dtheta_ = 0.0;
    int n_radial_ = 0, n_angular_ = 0;
    RadialSpacing spacing_ = RadialSpacing::chebyshev;
    std::vector<double> radial_nodes_;
    std::vector<double> quadrature_weights_;
};

using GridPtr = std::shared_ptr<const PolarGrid>;

GridPtr build_annulus(double r_inner, double r_outer, int n_radial, int n_angular,
                      RadialSpacing spacing = RadialSpacing::chebyshev);

// Chebyshev-family nodes folded about the origin: the positive half of a
// Lobatto grid on [-r_outer, r_outer], so the coordinate singularity carries
// no node. Fourier-mode parity supplies the missing boundary data.
GridPtr build_disk(double r_outer, int n_radial, int n_angular);

struct ScalarField {
    GridPtr grid;
    std::vector<double> values;  // radial-major: values[i*n_angular + j]

    ScalarField() = default;
    explicit ScalarField(GridPtr g) : grid(std::move(g)), values(grid->size(), 0.0) {}

    double& operator()(int i, int j) { return values[grid->index(i, j)]; }
    double operator()(int i, int j) const { return values[grid->index(i, j)]; }
};

struct VectorField {
    GridPtr grid;
    std::vector<double> radial;   // e_r component
    std::vector<double> angular;  // e_theta component

    VectorField() = default;
    explicit VectorField(GridPtr g)
        : grid(std::move(g)), radial(grid->size(), 0.0), angular(grid->size(), 0.0) {}
};

// quadrature approximation of the area integral of f
double integrate(const ScalarField& f);

// Line integral of the tangential component along a boundary circle,
// counterclockwise: component_index 0 addresses the inner boundary of the
// annulus, -1 the outer boundary.
double circulation(const VectorField& w, int component_index);

// Fill helpers used throughout the tests and the initial-condition library.
template <typename F>
ScalarField make_scalar(const GridPtr& g, F&& f) {
    ScalarField out(g);
    for (int i = 0; i < g->n_radial(); ++i)
        for (int j = 0; j < g->n_angular(); ++j)
            out(i, j) = f(g->radial_nodes()[i], g->theta(j));
    return out;
}

template <typename Fr, typename Ft>
VectorField make_vector(const GridPtr& g, Fr&& fr, Ft&& ft) {
    VectorField out(g);
    for (int i = 0; i < g->n_radial(); ++i)
        for (int j = 0; j < g->n_angular(); ++j) {
            const std::size_t idx = g->index(i, j);
            out.radial[idx] = fr(g->radial_nodes()[i], g->theta(j));
            out.angular[idx] = ft(g->radial_nodes()[i], g->theta(j));
        }
    return out;
}

}  // namespace alphaflow
