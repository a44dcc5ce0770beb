// Acceptance suite: exercises the conservation laws, decay laws, operator
// bounds and the vanishing-filter limit at the reference resolution
// (annulus 1..2, 64 x 128). One pass/fail line per criterion.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "alphaflow/dynamics.hpp"
#include "alphaflow/harness.hpp"
#include "alphaflow/radial_oracles.hpp"
#include "alphaflow/simd/kernels.hpp"

using namespace alphaflow;

namespace {

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> check;
};

double max_abs_diff_fields(const ScalarField& a, const ScalarField& b) {
    return simd::active().max_abs_diff(a.values.data(), b.values.data(), a.values.size());
}

ModelConfig base_config(ModelKind kind) {
    ModelConfig cfg;
    cfg.model = kind;
    cfg.alpha = 0.05;
    cfg.p = 2.0;
    cfg.cfl = 0.8;
    cfg.t_end = 1.0;
    cfg.initial = {InitialCondition::Profile::gaussian_ring, 1.5, 0.15, 0.1, 3, 0.0};
    return cfg;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

}  // namespace

int main() {
    const GridPtr grid = build_annulus(1.0, 2.0, 64, 128);
    ModalEllipticWorkspace ws(grid);

    std::vector<Criterion> criteria;

    // 1. radial alpha-Euler states are steady
    criteria.push_back({"radial steadiness (alpha-Euler, gamma=0)", [&](std::string& msg) {
        ModelConfig cfg = base_config(ModelKind::alpha_euler);
        CsvRecorder rec;
        const SimState initial = make_initial_state(ws, cfg);
        const SimState final = run(ws, cfg, rec, {});
        const double drift = max_abs_diff_fields(final.q, initial.q);
        msg = "max-norm q drift = " + fmt(drift) + " (<= 1e-6)";
        return drift <= 1e-6;
    }});

    // 2. circulation of v is conserved and recoverable from the fields
    criteria.push_back({"circulation conservation (gamma=1)", [&](std::string& msg) {
        ModelConfig cfg = base_config(ModelKind::alpha_euler);
        cfg.initial.gamma1 = 1.0;
        CsvRecorder rec;
        run(ws, cfg, rec, {});
        double worst = 0.0;
        for (const auto& r : rec.records())
            worst = std::max(worst, std::fabs(r.gamma_recomputed[0] - 1.0));
        msg = "worst recomputed-gamma deviation = " + fmt(worst) + " (<= 1e-4)";
        return worst <= 1e-4;
    }});

    // 3. H1_alpha energy conservation, improving under dt refinement
    criteria.push_back({"H1_alpha energy conservation", [&](std::string& msg) {
        ModelConfig cfg = base_config(ModelKind::alpha_euler);
        cfg.initial.profile = InitialCondition::Profile::perturbed_ring;
        const auto drift_of = [&](double dt) {
            SimState state = make_initial_state(ws, cfg);
            const double e0 = energy_h1_alpha(ws, state.u_cache, cfg.alpha);
            double worst = 0.0;
            while (state.time < cfg.t_end - 1e-12) {
                state = step(ws, state, cfg, std::min(dt, cfg.t_end - state.time));
                const double e = energy_h1_alpha(ws, state.u_cache, cfg.alpha);
                worst = std::max(worst, std::fabs(e - e0) / e0);
            }
            return worst;
        };
        const double drift = drift_of(0.04);
        const double drift_half = drift_of(0.02);
        const double gain = drift / drift_half;
        msg = "drift = " + fmt(drift) + " (<= 1e-3), halving dt changes it " + fmt(gain) +
              "x (>= 1.5 required; the cubic-interpolation dissipation floor that dominates "
              "this drift does not scale with dt)";
        return drift <= 1e-3 && gain >= 1.5;
    }});

    // 4. Lp norms of q: conserved by transport, non-increasing with viscosity
    criteria.push_back({"Lp conservation / monotonicity", [&](std::string& msg) {
        ModelConfig cfg = base_config(ModelKind::alpha_euler);
        cfg.initial.profile = InitialCondition::Profile::perturbed_ring;
        CsvRecorder rec;
        run(ws, cfg, rec, {});
        const double l0 = rec.records().front().lp_norm_q;
        double worst = 0.0;
        for (const auto& r : rec.records())
            worst = std::max(worst, std::fabs(r.lp_norm_q - l0) / l0);

        // regularized model checked per step
        ModelConfig reg = cfg;
        reg.model = ModelKind::alpha_euler_regularized;
        reg.epsilon = 1e-3;
        SimState state = make_initial_state(ws, reg);
        bool monotone = true;
        double prev = lp_norm(state.q, 2.0);
        while (state.time < reg.t_end) {
            double dt = std::min(reg.t_end - state.time,
                                 reg.cfl * cfl_allowance(ws.grid(), state.u_cache));
            state = step(ws, state, reg, dt);
            const double cur = lp_norm(state.q, 2.0);
            if (cur > prev) monotone = false;
            prev = cur;
        }
        msg = "transport drift = " + fmt(worst) + " (<= 1e-3), viscous decrease per step: " +
              (monotone ? "yes" : "no");
        return worst <= 1e-3 && monotone;
    }});

    // 5. second-grade decay laws
    criteria.push_back({"second-grade decay laws", [&](std::string& msg) {
        ModelConfig cfg = base_config(ModelKind::second_grade);
        cfg.nu = 0.005;
        cfg.initial.gamma1 = 1.0;
        CsvRecorder rec;
        run(ws, cfg, rec, {});
        const auto& first = rec.records().front();
        const auto& last = rec.records().back();
        const double expected = std::exp(-cfg.nu * cfg.t_end / cfg.alpha);
        const double gamma_err =
            std::fabs(last.gamma[0] / first.gamma[0] - expected) / expected;
        const double integral_err =
            std::fabs(last.integral_q / first.integral_q - expected) / expected;
        bool energy_down = true;
        for (std::size_t i = 1; i < rec.records().size(); ++i)
            if (rec.records()[i].energy_h1_alpha >
                rec.records()[i - 1].energy_h1_alpha * (1.0 + 1e-10))
                energy_down = false;
        msg = "gamma-ratio error = " + fmt(gamma_err) + " (<= 1e-12), integral-ratio error = " +
              fmt(integral_err) + " (<= 1e-3), energy non-increasing: " +
              (energy_down ? "yes" : "no");
        return gamma_err <= 1e-12 && integral_err <= 1e-3 && energy_down;
    }});

    // 6. vanishing-alpha limit toward the Euler reference; the ring sits
    // near the inner wall so the transport sees the boundary-condition
    // mismatch, not only the static filter layer
    criteria.push_back({"alpha -> 0 convergence to Euler", [&](std::string& msg) {
        const std::vector<double> alphas = {0.1, 0.05, 0.025, 0.0125};
        ModelConfig cfg = base_config(ModelKind::alpha_euler);
        cfg.initial.profile = InitialCondition::Profile::perturbed_ring;
        cfg.initial.r_center = 1.25;
        cfg.t_end = 0.5;

        std::vector<std::pair<double, VectorField>> runs;
        for (const double alpha : alphas) {
            ModelConfig c = cfg;
            c.alpha = alpha;
            CsvRecorder rec;
            runs.emplace_back(alpha, run(ws, c, rec, {}).u_cache);
        }
        ModelConfig ref = cfg;
        ref.model = ModelKind::euler_reference;
        CsvRecorder rec;
        const VectorField u_ref = run(ws, ref, rec, {}).u_cache;

        const auto table = convergence_table(runs, u_ref);
        bool decreasing = true;
        for (std::size_t i = 1; i < table.size(); ++i)
            if (!(table[i].error_l2 < table[i - 1].error_l2)) decreasing = false;
        const double ratio = table.front().error_l2 / table.back().error_l2;
        msg = "errors decrease: " + std::string(decreasing ? "yes" : "no") +
              ", first/last error ratio = " + fmt(ratio) + " (>= 2)";
        return decreasing && ratio >= 2.0;
    }});

    // 7. filtered-operator bound probe
    criteria.push_back({"operator-bound probe slope", [&](std::string& msg) {
        const std::vector<double> alphas = {0.1, 0.05, 0.025, 0.0125};
        std::vector<double> sups;
        for (const double alpha : alphas)
            sups.push_back(probe_operator_bound(ws, alpha, 2.0, 32, 20240811).sup_ratio);
        const double slope = log_log_slope(alphas, sups);
        msg = "fitted log-log slope = " + fmt(slope) +
              " (>= -0.35 required; this ladder starts at alpha = 0.1 where sqrt(alpha) is a "
              "third of the gap width, and the pre-asymptotic damping steepens the fit -- the "
              "same fit one octave lower flattens past the threshold)";
        return slope >= -0.35;
    }});

    // 8. Poincare-type inequality is resolution-stable
    criteria.push_back({"Poincare ratio stability", [&](std::string& msg) {
        const auto sup_ratio = [](const ModalEllipticWorkspace& w, unsigned long seed) {
            std::mt19937_64 rng(seed);
            double sup = 0.0;
            for (int t = 0; t < 100; ++t) {
                const ScalarField q = random_band_limited(w, rng);
                const VectorField f = biot_savart(w, q);
                sup = std::max(sup, h1_norm(w, f) / lp_norm(q, 2.0));
            }
            return sup;
        };
        const double coarse = sup_ratio(ws, 424242);
        const GridPtr fine_grid = build_annulus(1.0, 2.0, 128, 256);
        ModalEllipticWorkspace fine_ws(fine_grid);
        const double fine = sup_ratio(fine_ws, 424242);
        const double change = std::fabs(fine - coarse) / coarse;
        msg = "sup ||S(q)||_H1 / ||q||_L2: " + fmt(coarse) + " -> " + fmt(fine) +
              ", change = " + fmt(change) + " (< 0.25)";
        return change < 0.25;
    }});

    // 9. nu ~ alpha obstruction vs nu = alpha^1.5 boundedness; a weak ring
    // with unit circulation makes the relaxation-driven wall vorticity the
    // dominant contribution
    criteria.push_back({"nu ~ alpha obstruction", [&](std::string& msg) {
        const std::vector<double> alphas = {0.1, 0.05, 0.025};
        const auto max_l2 = [&](double alpha, double nu) {
            ModelConfig cfg = base_config(ModelKind::second_grade);
            cfg.initial.profile = InitialCondition::Profile::perturbed_ring;
            cfg.initial.gamma1 = 1.0;
            cfg.initial.sigma = 0.1;
            cfg.initial.scale = 0.3;
            cfg.alpha = alpha;
            cfg.nu = nu;
            CsvRecorder rec;
            run(ws, cfg, rec, {});
            double m = 0.0;
            for (const auto& r : rec.records()) m = std::max(m, r.lp_norm_q);
            return m;
        };
        std::vector<double> linear, power;
        for (const double a : alphas) {
            linear.push_back(max_l2(a, 0.5 * a));
            power.push_back(max_l2(a, std::pow(a, 1.5)));
        }
        const bool growing = linear[1] > linear[0] && linear[2] > linear[1];
        const double spread =
            (*std::max_element(power.begin(), power.end()) -
             *std::min_element(power.begin(), power.end())) /
            *std::min_element(power.begin(), power.end());
        msg = "nu=0.5a ladder max||q||: " + fmt(linear[0]) + " -> " + fmt(linear[1]) + " -> " +
              fmt(linear[2]) + " (increasing: " + (growing ? "yes" : "no") +
              "); nu=a^1.5 spread = " + fmt(spread) + " (< 0.2)";
        return growing && spread < 0.2;
    }});

    // 10. oracle agreement and self-convergence
    criteria.push_back({"radial-oracle cross-checks", [&](std::string& msg) {
        bool ok = true;
        std::string parts;

        // closed-form Biot-Savart
        auto q1 = make_uniform_profile(1.0, 2.0, 4097);
        for (auto& v : q1.values) v = 1.0;
        const auto f1 = oracle_biot_savart_radial(q1);
        ok &= std::fabs(f1.values.back() - 0.75) < 1e-10;

        // 2D filtered solve vs dense 1D BVP
        const double alpha = 0.01;
        const auto ring = make_scalar(grid, [](double r, double) {
            return std::exp(-std::pow((r - 1.5) / 0.15, 2));
        });
        const auto w2d = helmholtz_stokes_inverse(ws, biot_savart(ws, ring), alpha);
        RadialProfile qp = make_uniform_profile(1.0, 2.0, 300001);
        for (std::size_t i = 0; i < qp.nodes.size(); ++i)
            qp.values[i] = std::exp(-std::pow((qp.nodes[i] - 1.5) / 0.15, 2));
        const auto w1d = oracle_filtered_inverse_radial(oracle_biot_savart_radial(qp), alpha);
        double worst = 0.0;
        for (int i = 0; i < grid->n_radial(); ++i)
            worst = std::max(worst, std::fabs(w2d.angular[grid->index(i, 0)] -
                                              profile_at(w1d, grid->radial_nodes()[i])));
        ok &= worst < 1e-8;
        parts += "filtered-BVP gap = " + fmt(worst);

        // heat step vs dense 1D solve
        const auto qh = make_scalar(grid, [](double r, double) {
            return std::exp(-std::pow((r - 1.5) / 0.15, 2));
        });
        const auto heated = diffuse(ws, qh, 1e-3, 1e-2);
        RadialProfile hp = make_uniform_profile(1.0, 2.0, 120001);
        for (std::size_t i = 0; i < hp.nodes.size(); ++i)
            hp.values[i] = std::exp(-std::pow((hp.nodes[i] - 1.5) / 0.15, 2));
        const auto oracle_h = oracle_heat_radial(hp, 1e-3, 1e-2, 1, 1.0);
        double worst_h = 0.0;
        for (int i = 0; i < grid->n_radial(); ++i)
            worst_h = std::max(worst_h, std::fabs(heated.values[grid->index(i, 0)] -
                                                  profile_at(oracle_h, grid->radial_nodes()[i])));
        ok &= worst_h < 1e-6;
        parts += ", heat gap = " + fmt(worst_h);

        // second-grade decay through the oracle
        auto q0 = make_uniform_profile(1.0, 2.0, 1025);
        for (std::size_t i = 0; i < q0.nodes.size(); ++i)
            q0.values[i] = std::exp(-std::pow((q0.nodes[i] - 1.5) / 0.15, 2));
        const auto sg = oracle_second_grade_radial(q0, 1.0, 0.05, 0.05, 1.0, 64);
        ok &= std::fabs(sg.gamma - std::exp(-1.0)) < 1e-12;

        // self-convergence orders: cumulative quadrature ~4, tridiagonal ~2
        const auto ring_fn = [](double r) { return std::exp(-std::pow((r - 1.5) / 0.2, 2)); };
        std::vector<double> errs_bs, errs_fi;
        auto qf = make_uniform_profile(1.0, 2.0, 8193);
        for (std::size_t i = 0; i < qf.nodes.size(); ++i) qf.values[i] = ring_fn(qf.nodes[i]);
        const auto fine_bs = oracle_biot_savart_radial(qf);
        const auto fine_fi = oracle_filtered_inverse_radial(qf, 0.02);
        for (int n : {129, 257}) {
            auto qc = make_uniform_profile(1.0, 2.0, n);
            for (std::size_t i = 0; i < qc.nodes.size(); ++i)
                qc.values[i] = ring_fn(qc.nodes[i]);
            const auto cb = oracle_biot_savart_radial(qc);
            const auto cf = oracle_filtered_inverse_radial(qc, 0.02);
            double eb = 0.0, ef = 0.0;
            for (std::size_t i = 0; i < qc.nodes.size(); ++i) {
                eb = std::max(eb, std::fabs(cb.values[i] - profile_at(fine_bs, qc.nodes[i])));
                ef = std::max(ef, std::fabs(cf.values[i] - profile_at(fine_fi, qc.nodes[i])));
            }
            errs_bs.push_back(eb);
            errs_fi.push_back(ef);
        }
        const double order_bs = std::log2(errs_bs[0] / errs_bs[1]);
        const double order_fi = std::log2(errs_fi[0] / errs_fi[1]);
        ok &= std::fabs(order_bs - 4.0) <= 0.5;
        ok &= std::fabs(order_fi - 2.0) <= 0.5;
        parts += ", orders = " + fmt(order_bs) + "/" + fmt(order_fi);

        msg = parts;
        return ok;
    }});

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string msg;
        bool ok = false;
        try {
            ok = criteria[i].check(msg);
        } catch (const std::exception& e) {
            msg = std::string("exception: ") + e.what();
        }
        std::printf("%s  %2zu. %s  [%s]\n", ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].name.c_str(), msg.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
