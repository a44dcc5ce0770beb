#include "alphaflow/chebyshev.hpp"

#include <cmath>
#include <stdexcept>

namespace alphaflow {

std::vector<double> chebyshev_lobatto_nodes(double a, double b, int n) {
    if (n < 2) throw std::invalid_argument("chebyshev_lobatto_nodes: need n >= 2");
    std::vector<double> x(n);
    const int big_n = n - 1;
    for (int j = 0; j <= big_n; ++j) {
        // 1 - cos maps j=0 to a and j=N to b, increasing
        const double c = std::cos(M_PI * static_cast<double>(j) / big_n);
        x[j] = a + (b - a) * 0.5 * (1.0 - c);
    }
    x.front() = a;
    x.back() = b;
    return x;
}

std::vector<double> uniform_nodes(double a, double b, int n) {
    if (n < 2) throw std::invalid_argument("uniform_nodes: need n >= 2");
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j) x[j] = a + (b - a) * static_cast<double>(j) / (n - 1);
    x.back() = b;
    return x;
}

std::vector<double> barycentric_weights(const std::vector<double>& nodes) {
    const int n = static_cast<int>(nodes.size());
    // scale factors to keep the products in range
    const double scale = 4.0 / (nodes.back() - nodes.front());
    std::vector<double> w(n, 1.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            w[i] *= (nodes[i] - nodes[j]) * scale;
        }
        w[i] = 1.0 / w[i];
    }
    return w;
}

Eigen::MatrixXd differentiation_matrix(const std::vector<double>& nodes) {
    const int n = static_cast<int>(nodes.size());
    const std::vector<double> w = barycentric_weights(nodes);
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            d(i, j) = (w[j] / w[i]) / (nodes[i] - nodes[j]);
            row_sum += d(i, j);
        }
        d(i, i) = -row_sum;  // rows of D annihilate constants
    }
    return d;
}

void gauss_legendre(double a, double b, int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton iteration from the Chebyshev initial guess
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15) break;
        }
        const double xm = 0.5 * (b + a);
        const double xl = 0.5 * (b - a);
        x[i] = xm - xl * z;
        x[n - 1 - i] = xm + xl * z;
        w[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

std::vector<double> interpolatory_weights(const std::vector<double>& nodes, int moment,
                                          double a, double b) {
    const int n = static_cast<int>(nodes.size());
    const std::vector<double> bw = barycentric_weights(nodes);
    // reference rule exact for degree (n-1) + moment
    const int gl_n = (n + moment) / 2 + 2;
    std::vector<double> gx, gw;
    gauss_legendre(a, b, gl_n, gx, gw);

    std::vector<double> w(n, 0.0);
    std::vector<double> basis(n);
    for (int q = 0; q < gl_n; ++q) {
        // all Lagrange basis values at gx[q] via the barycentric form
        const double x = gx[q];
        bool on_node = false;
        for (int i = 0; i < n; ++i) {
            if (x == nodes[i]) {
                std::fill(basis.begin(), basis.end(), 0.0);
                basis[i] = 1.0;
                on_node = true;
                break;
            }
        }
        if (!on_node) {
            double denom = 0.0;
            for (int i = 0; i < n; ++i) {
                basis[i] = bw[i] / (x - nodes[i]);
                denom += basis[i];
            }
            for (int i = 0; i < n; ++i) basis[i] /= denom;
        }
        double xm = 1.0;
        for (int k = 0; k < moment; ++k) xm *= x;
        for (int i = 0; i < n; ++i) w[i] += gw[q] * xm * basis[i];
    }
    return w;
}

std::vector<double> interpolatory_weights(const std::vector<double>& nodes, int moment) {
    return interpolatory_weights(nodes, moment, nodes.front(), nodes.back());
}

double barycentric_eval(const std::vector<double>& nodes, const std::vector<double>& bary_w,
                        const std::vector<double>& values, double x) {
    const int n = static_cast<int>(nodes.size());
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = x - nodes[i];
        if (dx == 0.0) return values[i];
        const double t = bary_w[i] / dx;
        num += t * values[i];
        den += t;
    }
    return num / den;
}

}  // namespace alphaflow
