#include <doctest.h>

#include <cmath>

#include "alphaflow/dynamics.hpp"
#include "alphaflow/radial_oracles.hpp"

using namespace alphaflow;

namespace {

// observed order under node doubling, measured against the finest run
double self_convergence_order(const std::vector<double>& errors) {
    // errors at n, 2n: order = log2(e1/e2)
    return std::log2(errors[0] / errors[1]);
}

}  // namespace

TEST_CASE("oracle_biot_savart_radial closed forms") {
    auto q = make_uniform_profile(1.0, 2.0, 4097);
    for (auto& v : q.values) v = 1.0;
    const auto f = oracle_biot_savart_radial(q);
    CHECK(f.values.back() == doctest::Approx(0.75).epsilon(1e-10));
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double r = q.nodes[i];
        CHECK(f.values[i] == doctest::Approx((r * r - 1.0) / (2.0 * r)).epsilon(1e-10));
    }

    auto zero = make_uniform_profile(1.0, 2.0, 257);
    const auto f0 = oracle_biot_savart_radial(zero);
    for (double v : f0.values) CHECK(v == 0.0);

    auto qinv = make_uniform_profile(1.0, 2.0, 4097);
    for (std::size_t i = 0; i < qinv.nodes.size(); ++i) qinv.values[i] = 1.0 / qinv.nodes[i];
    const auto finv = oracle_biot_savart_radial(qinv);
    CHECK(finv.values.back() == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("oracle_biot_savart_radial self-converges at order ~4") {
    const auto ring = [](double r) { return std::exp(-std::pow((r - 1.5) / 0.2, 2)); };
    std::vector<double> errors;
    for (int n : {129, 257}) {
        auto q = make_uniform_profile(1.0, 2.0, n);
        for (std::size_t i = 0; i < q.nodes.size(); ++i) q.values[i] = ring(q.nodes[i]);
        auto qf = make_uniform_profile(1.0, 2.0, 8193);
        for (std::size_t i = 0; i < qf.nodes.size(); ++i) qf.values[i] = ring(qf.nodes[i]);
        const auto coarse = oracle_biot_savart_radial(q);
        const auto fine = oracle_biot_savart_radial(qf);
        double worst = 0.0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i)
            worst = std::max(worst, std::fabs(coarse.values[i] - profile_at(fine, q.nodes[i])));
        errors.push_back(worst);
    }
    CHECK(self_convergence_order(errors) == doctest::Approx(4.0).epsilon(0.125));
}

TEST_CASE("oracle_filtered_inverse_radial: trivial input and 1/alpha falloff") {
    auto zero = make_uniform_profile(1.0, 2.0, 513);
    const auto w0 = oracle_filtered_inverse_radial(zero, 0.01);
    for (double v : w0.values) CHECK(v == 0.0);

    auto f = make_uniform_profile(1.0, 2.0, 2049);
    for (std::size_t i = 0; i < f.nodes.size(); ++i)
        f.values[i] = std::exp(-std::pow((f.nodes[i] - 1.5) / 0.2, 2));
    const auto w_a = oracle_filtered_inverse_radial(f, 100.0);
    const auto w_b = oracle_filtered_inverse_radial(f, 1000.0);
    const std::size_t mid = f.nodes.size() / 2;
    const double ratio = w_a.values[mid] / w_b.values[mid];
    CHECK(ratio > 5.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("oracle_filtered_inverse_radial self-converges at order ~2") {
    const double alpha = 0.02;
    auto fine = make_uniform_profile(1.0, 2.0, 16385);
    for (std::size_t i = 0; i < fine.nodes.size(); ++i)
        fine.values[i] = std::exp(-std::pow((fine.nodes[i] - 1.4) / 0.25, 2));
    const auto ref = oracle_filtered_inverse_radial(fine, alpha);

    std::vector<double> errors;
    for (int n : {257, 513}) {
        auto f = make_uniform_profile(1.0, 2.0, n);
        for (std::size_t i = 0; i < f.nodes.size(); ++i)
            f.values[i] = std::exp(-std::pow((f.nodes[i] - 1.4) / 0.25, 2));
        const auto w = oracle_filtered_inverse_radial(f, alpha);
        double worst = 0.0;
        for (std::size_t i = 0; i < f.nodes.size(); ++i)
            worst = std::max(worst, std::fabs(w.values[i] - profile_at(ref, f.nodes[i])));
        errors.push_back(worst);
    }
    CHECK(self_convergence_order(errors) == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("oracle_heat_radial: trapezoidal mode self-converges at order ~2 in time") {
    auto q = make_uniform_profile(1.0, 2.0, 8193);
    for (std::size_t i = 0; i < q.nodes.size(); ++i)
        q.values[i] = std::exp(-std::pow((q.nodes[i] - 1.5) / 0.15, 2));
    const double eps = 1e-2, t = 0.5;
    const auto ref = oracle_heat_radial(q, eps, t, 256, 0.5);
    std::vector<double> errors;
    for (int substeps : {4, 8}) {
        const auto coarse = oracle_heat_radial(q, eps, t, substeps, 0.5);
        double worst = 0.0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i)
            worst = std::max(worst, std::fabs(coarse.values[i] - ref.values[i]));
        errors.push_back(worst);
    }
    CHECK(self_convergence_order(errors) == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("oracle_second_grade_radial: nu = 0 freezes q; decay laws hold") {
    auto q0 = make_uniform_profile(1.0, 2.0, 1025);
    for (std::size_t i = 0; i < q0.nodes.size(); ++i)
        q0.values[i] = std::exp(-std::pow((q0.nodes[i] - 1.5) / 0.15, 2));

    const auto frozen = oracle_second_grade_radial(q0, 1.0, 0.05, 0.0, 1.0, 16);
    for (std::size_t i = 0; i < q0.values.size(); ++i)
        CHECK(frozen.q.values[i] == q0.values[i]);
    CHECK(frozen.gamma == 1.0);

    // gamma0 = 1, nu/alpha = 1, t = 1 -> gamma = 1/e
    const auto res = oracle_second_grade_radial(q0, 1.0, 0.05, 0.05, 1.0, 64);
    CHECK(res.gamma == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

    // integral decay: 2 pi int q r dr scales by exp(-nu t / alpha); the
    // second-order omega stencil needs a dense grid to track it to 1e-8
    auto qd = make_uniform_profile(1.0, 2.0, 32769);
    for (std::size_t i = 0; i < qd.nodes.size(); ++i)
        qd.values[i] = std::exp(-std::pow((qd.nodes[i] - 1.5) / 0.15, 2));
    const auto resd = oracle_second_grade_radial(qd, 1.0, 0.05, 0.05, 1.0, 64);
    const auto moment = [&](const RadialProfile& p) {  // composite Simpson
        const double h = p.nodes[1] - p.nodes[0];
        double s = 0.0;
        for (std::size_t i = 0; i + 2 < p.nodes.size(); i += 2)
            s += h / 3.0 *
                 (p.values[i] * p.nodes[i] + 4.0 * p.values[i + 1] * p.nodes[i + 1] +
                  p.values[i + 2] * p.nodes[i + 2]);
        return 2.0 * M_PI * s;
    };
    CHECK(moment(resd.q) / moment(qd) == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));
}

TEST_CASE("second-grade radial oracle agrees with the 2D solver") {
    const auto g = build_annulus(1.0, 2.0, 64, 128);
    ModalEllipticWorkspace ws(g);
    ModelConfig cfg;
    cfg.model = ModelKind::second_grade;
    cfg.alpha = 0.05;
    cfg.nu = 0.005;
    cfg.t_end = 0.5;
    cfg.initial = {InitialCondition::Profile::gaussian_ring, 1.5, 0.15, 0.0, 0, 1.0};

    SimState state = make_initial_state(ws, cfg);
    const int n_steps = 250;
    for (int s = 0; s < n_steps; ++s) state = step(ws, state, cfg, cfg.t_end / n_steps);

    auto q0 = make_uniform_profile(1.0, 2.0, 2049);
    for (std::size_t i = 0; i < q0.nodes.size(); ++i)
        q0.values[i] = std::exp(-std::pow((q0.nodes[i] - 1.5) / 0.15, 2));
    const auto oracle =
        oracle_second_grade_radial(q0, 1.0, cfg.alpha, cfg.nu, cfg.t_end, 256);

    CHECK(state.gamma[0] == doctest::Approx(oracle.gamma).epsilon(1e-10));
    double worst = 0.0;
    for (int i = 0; i < g->n_radial(); ++i) {
        const double r = g->radial_nodes()[i];
        worst = std::max(worst,
                         std::fabs(state.q.values[g->index(i, 0)] - profile_at(oracle.q, r)));
    }
    CHECK(worst < 2e-4);
}
