#include "alphaflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alphaflow/simd/kernels.hpp"

namespace alphaflow {

namespace {

struct Stencil4 {
    int idx[4];
    double w[4];
};

// periodic cubic Lagrange stencil on the uniform angular grid
void angular_stencil(double theta, int na, double dtheta, Stencil4& s) {
    const double t = theta / dtheta;
    double fl = std::floor(t);
    double frac = t - fl;
    int j1 = static_cast<int>(fl);
    // snap round-off-level offsets so a foot sitting on a node reproduces the
    // nodal value bit for bit
    if (frac < 1e-12) {
        frac = 0.0;
    } else if (frac > 1.0 - 1e-12) {
        frac = 0.0;
        ++j1;
    }
    // weights for nodes at offsets {-1, 0, 1, 2} from j1, x = frac in [0,1)
    const double x = frac;
    s.w[0] = -x * (x - 1.0) * (x - 2.0) / 6.0;
    s.w[1] = (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0;
    s.w[2] = -(x + 1.0) * x * (x - 2.0) / 2.0;
    s.w[3] = (x + 1.0) * x * (x - 1.0) / 6.0;
    for (int o = 0; o < 4; ++o) {
        int j = j1 - 1 + o;
        j %= na;
        if (j < 0) j += na;
        s.idx[o] = j;
    }
}

// cubic Lagrange stencil on the (nonuniform) radial nodes, clamped at the ends
void radial_stencil(const std::vector<double>& nodes, double r, Stencil4& s) {
    const int n = static_cast<int>(nodes.size());
    int hi = static_cast<int>(std::upper_bound(nodes.begin(), nodes.end(), r) - nodes.begin());
    int s0 = hi - 2;  // interval [hi-1, hi] -> stencil {hi-2 .. hi+1}
    if (s0 < 0) s0 = 0;
    if (s0 > n - 4) s0 = n - 4;
    for (int o = 0; o < 4; ++o) {
        s.idx[o] = s0 + o;
        s.w[o] = 1.0;
    }
    for (int o = 0; o < 4; ++o) {
        const double xi = nodes[s0 + o];
        for (int m = 0; m < 4; ++m) {
            if (m == o) continue;
            s.w[o] *= (r - nodes[s0 + m]) / (xi - nodes[s0 + m]);
        }
    }
}

double interp(const std::vector<double>& values, int na, const Stencil4& sr, const Stencil4& st) {
    double v[16];
    for (int i = 0; i < 4; ++i) {
        const double* row = values.data() + static_cast<std::size_t>(sr.idx[i]) * na;
        for (int j = 0; j < 4; ++j) v[4 * i + j] = row[st.idx[j]];
    }
    return simd::active().tensor4x4(v, sr.w, st.w);
}

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_angle(double theta) {
    theta = std::fmod(theta, kTwoPi);
    if (theta < 0.0) theta += kTwoPi;
    return theta;
}

}  // namespace

ScalarField advect(const ScalarField& q, const VectorField& u, double dt) {
    if (q.grid.get() != u.grid.get())
        throw std::invalid_argument("advect: q and u live on different grids");
    if (!(dt > 0.0)) throw std::invalid_argument("advect: dt must be positive");
    const PolarGrid& g = *q.grid;
    const auto& nodes = g.radial_nodes();
    const int nr = g.n_radial();
    const int na = g.n_angular();
    const double r_lo = nodes.front();
    const double r_hi = nodes.back();
    const double cell_lo = nodes[1] - nodes[0];
    const double cell_hi = nodes[nr - 1] - nodes[nr - 2];
    // on the disk the first node is not a physical boundary; feet may cross
    // the origin and reappear half a turn away
    const bool disk = g.is_disk();

    ScalarField out(q.grid);
    Stencil4 sr, st;
    double worst_overshoot = 0.0;

    for (int i = 0; i < nr; ++i) {
        const double r0 = nodes[i];
        for (int j = 0; j < na; ++j) {
            const std::size_t idx = g.index(i, j);
            const double th0 = g.theta(j);

            // midpoint back-trajectory in (r, theta)
            double rm = r0 - 0.5 * dt * u.radial[idx];
            double thm = th0 - 0.5 * dt * u.angular[idx] / r0;
            if (disk && rm < 0.0) {
                rm = -rm;
                thm += M_PI;
            }
            const double rm_c = std::clamp(rm, r_lo, r_hi);
            radial_stencil(nodes, rm_c, sr);
            angular_stencil(wrap_angle(thm), na, g.dtheta(), st);
            const double ur_m = interp(u.radial, na, sr, st);
            const double ut_m = interp(u.angular, na, sr, st);

            double rf = r0 - dt * ur_m;
            double thf = th0 - dt * ut_m / rm_c;
            if (disk && rf < 0.0) {
                rf = -rf;
                thf += M_PI;
            }
            if (rf > r_hi + cell_hi || (!disk && rf < r_lo - cell_lo)) {
                const double over = rf > r_hi ? rf - r_hi : r_lo - rf;
                throw CflError("advect: foot point left the domain by " + std::to_string(over) +
                                   " (more than one cell); reduce dt",
                               over, 0.0);
            }
            if (rf > r_hi) {
                worst_overshoot = std::max(worst_overshoot, rf - r_hi);
                rf = r_hi;
            } else if (!disk && rf < r_lo) {
                worst_overshoot = std::max(worst_overshoot, r_lo - rf);
                rf = r_lo;
            } else if (disk && rf < r_lo) {
                rf = r_lo;  // clamped cubic toward the origin
            }

            radial_stencil(nodes, rf, sr);
            angular_stencil(wrap_angle(thf), na, g.dtheta(), st);
            out.values[idx] = interp(q.values, na, sr, st);
        }
    }
    (void)worst_overshoot;
    return out;
}

ScalarField diffuse(const ModalEllipticWorkspace& ws, const ScalarField& q, double epsilon,
                    double dt) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("diffuse: epsilon must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("diffuse: dt must be positive");
    const ModalHelmholtzSolver solver(ws, epsilon * dt);
    return solver.solve(q);
}

ScalarField second_grade_relaxation(const ScalarField& q, const ScalarField& omega, double nu,
                                    double alpha, double dt) {
    if (nu < 0.0) throw std::invalid_argument("second_grade_relaxation: nu must be >= 0");
    if (!(alpha > 0.0)) throw std::invalid_argument("second_grade_relaxation: alpha must be > 0");
    if (q.grid.get() != omega.grid.get())
        throw std::invalid_argument("second_grade_relaxation: grids differ");
    if (nu == 0.0) return q;
    const double factor = std::exp(-nu * dt / alpha);
    ScalarField out = q;
    simd::active().blend_toward(omega.values.data(), factor, out.values.data(), out.values.size());
    return out;
}

ScalarField initial_vorticity(const GridPtr& grid, const InitialCondition& ic) {
    switch (ic.profile) {
        case InitialCondition::Profile::gaussian_ring:
            return make_scalar(grid, [&](double r, double) {
                const double x = (r - ic.r_center) / ic.sigma;
                return ic.scale * std::exp(-x * x);
            });
        case InitialCondition::Profile::perturbed_ring:
            return make_scalar(grid, [&](double r, double theta) {
                const double x = (r - ic.r_center) / ic.sigma;
                return ic.scale * std::exp(-x * x) *
                       (1.0 + ic.amplitude * std::cos(ic.mode * theta));
            });
    }
    throw ConfigError("initial_condition.profile: unknown profile");
}

void ModelConfig::validate() const {
    if (model != ModelKind::euler_reference && !(alpha > 0.0))
        throw ConfigError("model.alpha: must be > 0 for this model, got " + std::to_string(alpha));
    if (alpha < 0.0) throw ConfigError("model.alpha: must be >= 0");
    if (nu != 0.0 && model != ModelKind::second_grade)
        throw ConfigError("model.nu: only the second_grade model takes a viscosity");
    if (nu < 0.0) throw ConfigError("model.nu: must be >= 0, got " + std::to_string(nu));
    if (model == ModelKind::alpha_euler_regularized && !(epsilon > 0.0))
        throw ConfigError("model.epsilon: must be > 0 for the regularized model");
    if (epsilon != 0.0 && model != ModelKind::alpha_euler_regularized)
        throw ConfigError("model.epsilon: only the regularized model takes artificial viscosity");
    if (!(p > 1.0) || !std::isfinite(p))
        throw ConfigError("model.p: need 1 < p < inf, got " + std::to_string(p));
    if (!(cfl > 0.0) || cfl > 1.0)
        throw ConfigError("time.cfl: need 0 < cfl <= 1, got " + std::to_string(cfl));
    if (t_end < 0.0) throw ConfigError("time.t_end: must be >= 0");
    if (!(initial.sigma > 0.0)) throw ConfigError("initial.sigma: must be > 0");
    if (!std::isfinite(initial.scale)) throw ConfigError("initial.scale: must be finite");
    if (initial.mode < 0) throw ConfigError("initial.mode: must be >= 0");
    if (enforce_nu_bound && model == ModelKind::second_grade) {
        const double bound = std::pow(alpha, 1.0 + nu_bound_margin);
        if (nu > bound)
            throw ConfigError("model.nu: decay-hypothesis check failed, nu = " +
                              std::to_string(nu) + " > alpha^(1+margin) = " +
                              std::to_string(bound));
    }
}

SimState make_initial_state(const ModalEllipticWorkspace& ws, const ModelConfig& config) {
    SimState state;
    state.time = 0.0;
    state.q = initial_vorticity(ws.grid_ptr(), config.initial);
    if (ws.grid().n_boundary_components() > 0) state.gamma = {config.initial.gamma1};
    state.u_cache = velocity_from_state(ws, state.q, state.gamma, config.effective_alpha());
    return state;
}

SimState step(const ModalEllipticWorkspace& ws, const SimState& state, const ModelConfig& config,
              double dt) {
    SimState next;
    try {
        next.q = advect(state.q, state.u_cache, dt);
    } catch (const CflError& e) {
        throw CflError(e.what() + std::string(" (at t = ") + std::to_string(state.time) + ")",
                       e.max_displacement, state.time);
    }
    next.gamma = state.gamma;
    switch (config.model) {
        case ModelKind::alpha_euler:
        case ModelKind::euler_reference:
            break;
        case ModelKind::alpha_euler_regularized:
            next.q = diffuse(ws, next.q, config.epsilon, dt);
            break;
        case ModelKind::second_grade: {
            // omega frozen at step start
            const ScalarField omega = curl(ws, state.u_cache);
            next.q = second_grade_relaxation(next.q, omega, config.nu, config.alpha, dt);
            const double decay = std::exp(-config.nu * dt / config.alpha);
            for (double& g : next.gamma) g *= decay;
            break;
        }
    }
    next.time = state.time + dt;
    next.u_cache = velocity_from_state(ws, next.q, next.gamma, config.effective_alpha());
    return next;
}

double max_speed(const VectorField& u) {
    double m = 0.0;
    for (std::size_t i = 0; i < u.radial.size(); ++i) {
        const double s = u.radial[i] * u.radial[i] + u.angular[i] * u.angular[i];
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

double min_grid_spacing(const PolarGrid& grid) {
    const auto& nodes = grid.radial_nodes();
    double h = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < nodes.size(); ++i) h = std::min(h, nodes[i] - nodes[i - 1]);
    h = std::min(h, nodes.front() * grid.dtheta());
    return h;
}

double cfl_allowance(const PolarGrid& grid, const VectorField& u) {
    // On the boundary-clustered grid the velocity vanishes where the cells
    // shrink, so the binding node is the one maximizing |u|/h locally.
    const auto& nodes = grid.radial_nodes();
    const int nr = grid.n_radial();
    const int na = grid.n_angular();
    double allowance = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nr; ++i) {
        const double dr_lo = i > 0 ? nodes[i] - nodes[i - 1] : nodes[1] - nodes[0];
        const double dr_hi = i + 1 < nr ? nodes[i + 1] - nodes[i] : dr_lo;
        const double h = std::min({dr_lo, dr_hi, nodes[i] * grid.dtheta()});
        double smax = 0.0;
        for (int j = 0; j < na; ++j) {
            const std::size_t idx = grid.index(i, j);
            const double s = u.radial[idx] * u.radial[idx] + u.angular[idx] * u.angular[idx];
            smax = std::max(smax, s);
        }
        if (smax > 0.0) allowance = std::min(allowance, h / std::sqrt(smax));
    }
    return allowance;
}

DiagnosticRecord make_record(const ModalEllipticWorkspace& ws, const SimState& state,
                             const ModelConfig& config) {
    DiagnosticRecord rec;
    rec.time = state.time;
    rec.gamma = state.gamma;
    const double alpha = config.effective_alpha();

    // recompute the circulations of v = u - alpha lap(u) from the fields
    rec.gamma_recomputed.clear();
    if (ws.grid().n_boundary_components() > 0) {
        if (alpha > 0.0) {
            const VectorField lap = vector_laplacian(ws, state.u_cache);
            VectorField v = state.u_cache;
            simd::active().axpy(-alpha, lap.radial.data(), v.radial.data(), v.radial.size());
            simd::active().axpy(-alpha, lap.angular.data(), v.angular.data(), v.angular.size());
            rec.gamma_recomputed.push_back(circulation(v, 0));
        } else {
            rec.gamma_recomputed.push_back(circulation(state.u_cache, 0));
        }
    }

    rec.energy_h1_alpha = energy_h1_alpha(ws, state.u_cache, alpha);
    rec.lp_norm_q = lp_norm(state.q, config.p);
    rec.integral_q = integrate(state.q);
    rec.l2_norm_u = l2_norm(state.u_cache);
    rec.h1_norm_u = h1_norm(ws, state.u_cache);
    return rec;
}

SimState run(const ModalEllipticWorkspace& ws, const ModelConfig& config, Recorder& recorder,
             const RunOptions& opts) {
    config.validate();
    SimState state = make_initial_state(ws, config);

    recorder.on_record(make_record(ws, state, config));
    if (opts.on_snapshot && opts.snapshot_cadence > 0.0) opts.on_snapshot(state);
    if (config.t_end <= 0.0) return state;

    // heat factorizations reused across steps with the same dt
    std::map<double, std::unique_ptr<ModalHelmholtzSolver>> heat_cache;
    const bool regularized = config.model == ModelKind::alpha_euler_regularized;

    long diag_tick = 0, snap_tick = 0;
    const double diag_dt = opts.diagnostic_cadence;
    const double snap_dt = opts.snapshot_cadence;

    while (state.time < config.t_end) {
        double dt = std::min(config.t_end - state.time,
                             config.cfl * cfl_allowance(ws.grid(), state.u_cache));

        // land exactly on the next cadence tick
        double target = config.t_end;
        if (diag_dt > 0.0) target = std::min(target, (diag_tick + 1) * diag_dt);
        if (snap_dt > 0.0 && opts.on_snapshot) target = std::min(target, (snap_tick + 1) * snap_dt);
        const bool lands = state.time + dt >= target - 1e-13;
        if (lands) dt = target - state.time;

        if (regularized) {
            const double coef = config.epsilon * dt;
            auto it = heat_cache.find(coef);
            if (it == heat_cache.end())
                it = heat_cache.emplace(coef, std::make_unique<ModalHelmholtzSolver>(ws, coef))
                         .first;
            // inline the regularized step so the cached factorization is used
            SimState next;
            try {
                next.q = advect(state.q, state.u_cache, dt);
            } catch (const CflError& e) {
                throw CflError(e.what() + std::string(" (at t = ") + std::to_string(state.time) +
                                   ")",
                               e.max_displacement, state.time);
            }
            next.q = it->second->solve(next.q);
            next.gamma = state.gamma;
            next.time = state.time + dt;
            next.u_cache = velocity_from_state(ws, next.q, next.gamma, config.alpha);
            state = std::move(next);
        } else {
            state = step(ws, state, config, dt);
        }

        if (lands) state.time = target;  // pin cadence times exactly

        bool emitted = false;
        if (diag_dt > 0.0 && state.time >= (diag_tick + 1) * diag_dt - 1e-13) {
            ++diag_tick;
            recorder.on_record(make_record(ws, state, config));
            emitted = true;
        }
        if (snap_dt > 0.0 && opts.on_snapshot &&
            state.time >= (snap_tick + 1) * snap_dt - 1e-13) {
            ++snap_tick;
            opts.on_snapshot(state);
        }
        if (state.time >= config.t_end - 1e-13) {
            state.time = config.t_end;
            if (!emitted) recorder.on_record(make_record(ws, state, config));
            break;
        }
    }
    return state;
}

}  // namespace alphaflow
