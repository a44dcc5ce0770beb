#include "alphaflow/radial_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace alphaflow {

namespace {

// Thomas solve of a tridiagonal system (a: sub, b: diag, c: super)
void tridiag_solve(std::vector<double>& a, std::vector<double>& b, std::vector<double>& c,
                   std::vector<double>& rhs) {
    const int n = static_cast<int>(b.size());
    for (int i = 1; i < n; ++i) {
        const double m = a[i] / b[i - 1];
        b[i] -= m * c[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= b[n - 1];
    for (int i = n - 2; i >= 0; --i) rhs[i] = (rhs[i] - c[i] * rhs[i + 1]) / b[i];
}

// scalar radial heat operator q'' + q'/r as tridiagonal coefficients
void heat_coeffs(const RadialProfile& q, double scale, std::vector<double>& a,
                 std::vector<double>& b, std::vector<double>& c) {
    const int n = static_cast<int>(q.nodes.size());
    const double h = q.nodes[1] - q.nodes[0];
    a.assign(n, 0.0);
    b.assign(n, 0.0);
    c.assign(n, 0.0);
    for (int i = 1; i < n - 1; ++i) {
        const double r = q.nodes[i];
        a[i] = scale * (1.0 / (h * h) - 1.0 / (2.0 * h * r));
        b[i] = scale * (-2.0 / (h * h));
        c[i] = scale * (1.0 / (h * h) + 1.0 / (2.0 * h * r));
    }
}

}  // namespace

RadialProfile make_uniform_profile(double r0, double r1, int n) {
    if (!(r0 < r1) || n < 8) throw std::invalid_argument("make_uniform_profile: bad parameters");
    RadialProfile p;
    p.nodes.resize(n);
    p.values.assign(n, 0.0);
    for (int i = 0; i < n; ++i) p.nodes[i] = r0 + (r1 - r0) * static_cast<double>(i) / (n - 1);
    p.nodes.back() = r1;
    return p;
}

double profile_at(const RadialProfile& p, double r) {
    const int n = static_cast<int>(p.nodes.size());
    int hi = static_cast<int>(std::upper_bound(p.nodes.begin(), p.nodes.end(), r) -
                              p.nodes.begin());
    int s0 = std::clamp(hi - 2, 0, n - 4);
    double out = 0.0;
    for (int o = 0; o < 4; ++o) {
        double w = 1.0;
        for (int m = 0; m < 4; ++m) {
            if (m == o) continue;
            w *= (r - p.nodes[s0 + m]) / (p.nodes[s0 + o] - p.nodes[s0 + m]);
        }
        out += w * p.values[s0 + o];
    }
    return out;
}

RadialProfile oracle_biot_savart_radial(const RadialProfile& q) {
    const int n = static_cast<int>(q.nodes.size());
    const double h = q.nodes[1] - q.nodes[0];
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = q.nodes[i] * q.values[i];

    // cumulative integral, cubic (Adams-Moulton style) segment weights
    std::vector<double> integral(n, 0.0);
    for (int i = 0; i + 1 < n; ++i) {
        double seg;
        if (i == 0) {
            seg = h * (9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3]) / 24.0;
        } else if (i == n - 2) {
            seg = h * (g[n - 4] - 5.0 * g[n - 3] + 19.0 * g[n - 2] + 9.0 * g[n - 1]) / 24.0;
        } else {
            seg = h * (-g[i - 1] + 13.0 * g[i] + 13.0 * g[i + 1] - g[i + 2]) / 24.0;
        }
        integral[i + 1] = integral[i] + seg;
    }

    RadialProfile f = q;
    for (int i = 0; i < n; ++i) f.values[i] = integral[i] / q.nodes[i];
    return f;
}

RadialProfile oracle_filtered_inverse_radial(const RadialProfile& f, double alpha) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("oracle_filtered_inverse_radial: alpha must be > 0");
    const int n = static_cast<int>(f.nodes.size());
    const double h = f.nodes[1] - f.nodes[0];
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), rhs(n, 0.0);
    for (int i = 1; i < n - 1; ++i) {
        const double r = f.nodes[i];
        // w - alpha (w'' + w'/r - w/r^2) = f
        a[i] = -alpha * (1.0 / (h * h) - 1.0 / (2.0 * h * r));
        b[i] = 1.0 - alpha * (-2.0 / (h * h) - 1.0 / (r * r));
        c[i] = -alpha * (1.0 / (h * h) + 1.0 / (2.0 * h * r));
        rhs[i] = f.values[i];
    }
    b[0] = 1.0;
    b[n - 1] = 1.0;  // w = 0 at both ends
    tridiag_solve(a, b, c, rhs);
    RadialProfile w = f;
    w.values = std::move(rhs);
    return w;
}

RadialProfile oracle_heat_radial(const RadialProfile& q, double eps, double dt, int substeps,
                                 double theta) {
    if (!(eps > 0.0) || !(dt > 0.0) || substeps < 1)
        throw std::invalid_argument("oracle_heat_radial: bad parameters");
    const int n = static_cast<int>(q.nodes.size());
    const double tau = dt / substeps;
    RadialProfile cur = q;
    std::vector<double> la, lb, lc;
    heat_coeffs(q, 1.0, la, lb, lc);
    for (int s = 0; s < substeps; ++s) {
        std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), rhs(n, 0.0);
        for (int i = 1; i < n - 1; ++i) {
            a[i] = -theta * eps * tau * la[i];
            b[i] = 1.0 - theta * eps * tau * lb[i];
            c[i] = -theta * eps * tau * lc[i];
            const double lap = la[i] * cur.values[i - 1] + lb[i] * cur.values[i] +
                               lc[i] * cur.values[i + 1];
            rhs[i] = cur.values[i] + (1.0 - theta) * eps * tau * lap;
        }
        rhs[0] = 0.0;
        rhs[n - 1] = 0.0;
        tridiag_solve(a, b, c, rhs);
        cur.values = std::move(rhs);
    }
    return cur;
}

SecondGradeRadialResult oracle_second_grade_radial(const RadialProfile& q0, double gamma0,
                                                   double alpha, double nu, double t_end,
                                                   int n_steps) {
    if (!(alpha > 0.0) || nu < 0.0 || n_steps < 1)
        throw std::invalid_argument("oracle_second_grade_radial: bad parameters");
    const int n = static_cast<int>(q0.nodes.size());
    const double h = q0.nodes[1] - q0.nodes[0];

    // omega = curl u = (r u_theta)'/r for the mode-0 Dirichlet velocity
    const auto omega_of = [&](const std::vector<double>& qv, double gamma) {
        RadialProfile q = q0;
        q.values = qv;
        RadialProfile f = oracle_biot_savart_radial(q);
        for (int i = 0; i < n; ++i) f.values[i] += gamma / (2.0 * M_PI * q0.nodes[i]);
        const RadialProfile w = oracle_filtered_inverse_radial(f, alpha);
        std::vector<double> omega(n);
        for (int i = 0; i < n; ++i) {
            const double r = q0.nodes[i];
            double d;
            if (i == 0)
                d = (-3.0 * r * w.values[0] + 4.0 * q0.nodes[1] * w.values[1] -
                     q0.nodes[2] * w.values[2]) /
                    (2.0 * h);
            else if (i == n - 1)
                d = (3.0 * r * w.values[n - 1] - 4.0 * q0.nodes[n - 2] * w.values[n - 2] +
                     q0.nodes[n - 3] * w.values[n - 3]) /
                    (2.0 * h);
            else
                d = (q0.nodes[i + 1] * w.values[i + 1] - q0.nodes[i - 1] * w.values[i - 1]) /
                    (2.0 * h);
            omega[i] = d / r;
        }
        return omega;
    };

    const double rate = nu / alpha;
    const auto rhs = [&](const std::vector<double>& qv, double t) {
        const double gamma = gamma0 * std::exp(-rate * t);
        const std::vector<double> om = omega_of(qv, gamma);
        std::vector<double> out(n);
        for (int i = 0; i < n; ++i) out[i] = rate * (om[i] - qv[i]);
        return out;
    };

    std::vector<double> q = q0.values;
    const double dt = t_end / n_steps;
    std::vector<double> k1, k2, k3, k4, tmp(n);
    for (int s = 0; s < n_steps; ++s) {
        const double t = s * dt;
        k1 = rhs(q, t);
        for (int i = 0; i < n; ++i) tmp[i] = q[i] + 0.5 * dt * k1[i];
        k2 = rhs(tmp, t + 0.5 * dt);
        for (int i = 0; i < n; ++i) tmp[i] = q[i] + 0.5 * dt * k2[i];
        k3 = rhs(tmp, t + 0.5 * dt);
        for (int i = 0; i < n; ++i) tmp[i] = q[i] + dt * k3[i];
        k4 = rhs(tmp, t + dt);
        for (int i = 0; i < n; ++i)
            q[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    SecondGradeRadialResult out;
    out.q = q0;
    out.q.values = std::move(q);
    out.gamma = gamma0 * std::exp(-rate * t_end);
    return out;
}

}  // namespace alphaflow
