#pragma once

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "alphaflow/diagnostics.hpp"
#include "alphaflow/elliptic.hpp"
#include "alphaflow/geometry.hpp"

namespace alphaflow {

enum class ModelKind { alpha_euler, alpha_euler_regularized, second_grade, euler_reference };

class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Semi-Lagrangian foot point left the domain by more than one cell.
class CflError : public std::runtime_error {
  public:
    CflError(const std::string& what, double max_displacement, double time)
        : std::runtime_error(what), max_displacement(max_displacement), time(time) {}
    double max_displacement;
    double time;  // attached by step/run
};

struct InitialCondition {
    enum class Profile { gaussian_ring, perturbed_ring };
    Profile profile = Profile::gaussian_ring;
    double r_center = 1.5;
    double sigma = 0.15;
    double amplitude = 0.1;  // perturbed ring: q0 * (1 + amplitude*cos(mode*theta))
    int mode = 3;
    double gamma1 = 0.0;  // circulation of v on the inner boundary
    double scale = 1.0;   // overall vorticity amplitude
};

struct ModelConfig {
    ModelKind model = ModelKind::alpha_euler;
    double alpha = 0.05;
    double nu = 0.0;       // second_grade only
    double epsilon = 0.0;  // alpha_euler_regularized only
    double p = 2.0;        // Lebesgue exponent for diagnostics
    double cfl = 0.8;
    double t_end = 1.0;
    InitialCondition initial;
    // optional check of the nu <= alpha^(1+margin) smallness hypothesis
    bool enforce_nu_bound = false;
    double nu_bound_margin = 0.5;

    double effective_alpha() const {
        return model == ModelKind::euler_reference ? 0.0 : alpha;
    }
    void validate() const;  // throws ConfigError naming the offending field
};

struct SimState {
    double time = 0.0;
    ScalarField q;              // curl of v for alpha > 0, curl of u for the Euler reference
    std::vector<double> gamma;  // circulations of v on the inner boundaries
    VectorField u_cache;        // reconstructed velocity at `time`
};

// One transport substep: trace each node back along u over dt (midpoint rule
// in polar coordinates) and interpolate q at the foot, cubic in both
// directions.
ScalarField advect(const ScalarField& q, const VectorField& u, double dt);

// Backward step of the heat operator with homogeneous Dirichlet data.
ScalarField diffuse(const ModalEllipticWorkspace& ws, const ScalarField& q, double epsilon,
                    double dt);

// Exact integrating-factor update of the relaxation toward omega = curl u:
// q <- omega + (q - omega) exp(-nu dt / alpha).
ScalarField second_grade_relaxation(const ScalarField& q, const ScalarField& omega, double nu,
                                    double alpha, double dt);

ScalarField initial_vorticity(const GridPtr& grid, const InitialCondition& ic);
SimState make_initial_state(const ModalEllipticWorkspace& ws, const ModelConfig& config);

SimState step(const ModalEllipticWorkspace& ws, const SimState& state, const ModelConfig& config,
              double dt);

double max_speed(const VectorField& u);
double min_grid_spacing(const PolarGrid& grid);

// Largest dt with every foot displacement within one local cell:
// min over nodes of (local spacing) / |u|. Infinity for a still field.
double cfl_allowance(const PolarGrid& grid, const VectorField& u);

DiagnosticRecord make_record(const ModalEllipticWorkspace& ws, const SimState& state,
                             const ModelConfig& config);

struct Recorder {
    virtual void on_record(const DiagnosticRecord& record) = 0;
    virtual ~Recorder() = default;
};

struct RunOptions {
    double diagnostic_cadence = 0.05;  // <= 0: records at t = 0 and t_end only
    double snapshot_cadence = 0.0;     // <= 0: no snapshots
    std::function<void(const SimState&)> on_snapshot;
};

// Integrate from t = 0 to t_end with the adaptive CFL timestep
// dt = cfl * (min grid spacing) / max|u|, landing exactly on cadence ticks.
// Deterministic given the config.
SimState run(const ModalEllipticWorkspace& ws, const ModelConfig& config, Recorder& recorder,
             const RunOptions& opts = {});

}  // namespace alphaflow
