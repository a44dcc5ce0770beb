#include "alphaflow/elliptic.hpp"

#include <cmath>
#include <stdexcept>

#include "alphaflow/chebyshev.hpp"
#include "alphaflow/diagnostics.hpp"
#include "alphaflow/simd/kernels.hpp"

namespace alphaflow {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};

Eigen::VectorXcd apply_real(const Eigen::MatrixXd& a, const Eigen::VectorXcd& v) {
    Eigen::VectorXcd out(a.rows());
    out.real() = a * v.real();
    out.imag() = a * v.imag();
    return out;
}

Eigen::VectorXcd cwise_mul(const Eigen::VectorXd& a, const Eigen::VectorXcd& v) {
    Eigen::VectorXcd out(v.size());
    out.real() = a.cwiseProduct(v.real());
    out.imag() = a.cwiseProduct(v.imag());
    return out;
}

Eigen::VectorXcd solve_complex(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu,
                               const Eigen::VectorXcd& b) {
    Eigen::MatrixXd packed(b.size(), 2);
    packed.col(0) = b.real();
    packed.col(1) = b.imag();
    const Eigen::MatrixXd x = lu.solve(packed);
    Eigen::VectorXcd out(b.size());
    out.real() = x.col(0);
    out.imag() = x.col(1);
    return out;
}

int scalar_parity(int k) { return (k % 2 == 0) ? +1 : -1; }

}  // namespace

// ----------------------------------------------------------------- Impl

struct ModalEllipticWorkspace::Impl {
    bool disk = false;
    int m = 0;        // radial nodes on the grid
    int n_modes = 0;  // n_angular/2 + 1

    // derivative matrices per extension parity (annulus: both identical)
    Eigen::MatrixXd d1_plus, d1_minus, d2_plus, d2_minus;
    Eigen::VectorXd r, inv_r, inv_r2;

    std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> poisson_lu;  // per mode

    struct Filtered {
        double alpha = 0.0;
        std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu;  // per mode, 2m x 2m
        // influence response to a unit stream constant on the inner circle
        Eigen::VectorXd phi_h, zeta_h;
        double circ_h = 0.0;
        VectorField xtilde;  // (1 + alpha A)^{-1} Y_1, annulus only
    };
    mutable std::map<double, std::shared_ptr<const Filtered>> filtered_cache;
    mutable std::mutex cache_mutex;

    const Eigen::MatrixXd& pick_d1(int parity) const { return parity > 0 ? d1_plus : d1_minus; }
    const Eigen::MatrixXd& pick_d2(int parity) const { return parity > 0 ? d2_plus : d2_minus; }

    Eigen::MatrixXd mode_laplacian(int k) const {
        const int p = scalar_parity(k);
        Eigen::MatrixXd l = pick_d2(p);
        l += inv_r.asDiagonal() * pick_d1(p);
        l -= static_cast<double>(k) * k * inv_r2.asDiagonal().toDenseMatrix();
        return l;
    }

    // circulation of v = w - alpha*lap(w) on the inner circle, from the
    // mode-0 stream pair (phi, zeta)
    double circulation_functional(double r0, double alpha, const Eigen::VectorXd& phi,
                                  const Eigen::VectorXd& zeta) const {
        const Eigen::VectorXd h = phi - alpha * zeta;
        return 2.0 * M_PI * r0 * d1_plus.row(0).dot(h);
    }

    std::shared_ptr<Filtered> build_filtered(const PolarGrid& g, double alpha) const;
};

ModalEllipticWorkspace::ModalEllipticWorkspace(GridPtr grid)
    : impl_(std::make_unique<Impl>()), grid_(std::move(grid)) {
    const PolarGrid& g = *grid_;
    if (g.spacing() != RadialSpacing::chebyshev)
        throw std::invalid_argument(
            "ModalEllipticWorkspace: elliptic solves require chebyshev radial nodes");
    transform_ = std::make_unique<AngularTransform>(g.n_radial(), g.n_angular());

    Impl& im = *impl_;
    im.disk = g.is_disk();
    im.m = g.n_radial();
    im.n_modes = transform_->n_modes();

    const auto& nodes = g.radial_nodes();
    im.r = Eigen::Map<const Eigen::VectorXd>(nodes.data(), im.m);
    im.inv_r = im.r.cwiseInverse();
    im.inv_r2 = im.inv_r.cwiseProduct(im.inv_r);
    inv_r_ = im.inv_r;

    if (!im.disk) {
        const Eigen::MatrixXd d = differentiation_matrix(nodes);
        im.d1_plus = d;
        im.d1_minus = d;
        im.d2_plus = d * d;
        im.d2_minus = im.d2_plus;
    } else {
        // differentiate on the full symmetric grid, then fold: for an
        // extension f(-r) = s*f(r) the derivative at the positive nodes is
        // D[P,P] + s*D[P,M]*J with J the index reversal of the mirror block
        std::vector<double> full(2 * im.m);
        for (int i = 0; i < im.m; ++i) {
            full[im.m + i] = nodes[i];
            full[im.m - 1 - i] = -nodes[i];
        }
        const Eigen::MatrixXd d = differentiation_matrix(full);
        const Eigen::MatrixXd d2 = d * d;
        const auto fold = [&](const Eigen::MatrixXd& a, int sign) {
            Eigen::MatrixXd f = a.block(im.m, im.m, im.m, im.m);
            for (int i = 0; i < im.m; ++i)
                for (int j = 0; j < im.m; ++j) f(i, j) += sign * a(im.m + i, im.m - 1 - j);
            return f;
        };
        im.d1_plus = fold(d, +1);
        im.d1_minus = fold(d, -1);
        im.d2_plus = fold(d2, +1);
        im.d2_minus = fold(d2, -1);
    }

    // Poisson factorizations: stream function with psi = 0 on the outer
    // circle; mode 0 of the annulus carries the zero-circulation Neumann
    // condition psi'(r0) = 0 instead of an inner Dirichlet value
    im.poisson_lu.reserve(im.n_modes);
    for (int k = 0; k < im.n_modes; ++k) {
        Eigen::MatrixXd a = im.mode_laplacian(k);
        a.row(im.m - 1).setZero();
        a(im.m - 1, im.m - 1) = 1.0;
        if (!im.disk) {
            if (k == 0) {
                a.row(0) = im.d1_plus.row(0);
            } else {
                a.row(0).setZero();
                a(0, 0) = 1.0;
            }
        }
        im.poisson_lu.emplace_back(a);
    }
}

ModalEllipticWorkspace::~ModalEllipticWorkspace() = default;

struct EllipticDetail {
    static ModalBuffer filtered_stream_solve(const ModalEllipticWorkspace& ws,
                                             const ModalEllipticWorkspace::Impl::Filtered& fs,
                                             const ModalBuffer& g_modes, double gamma_target);
    static std::shared_ptr<const ModalEllipticWorkspace::Impl::Filtered> get_filtered(
        const ModalEllipticWorkspace& ws, double alpha);
    static const ModalEllipticWorkspace::Impl& impl(const ModalEllipticWorkspace& ws) {
        return *ws.impl_;
    }
};


const Eigen::MatrixXd& ModalEllipticWorkspace::d1(int k, bool vector_component) const {
    const int p = vector_component ? -scalar_parity(k) : scalar_parity(k);
    return impl_->pick_d1(p);
}

const Eigen::MatrixXd& ModalEllipticWorkspace::d2(int k, bool vector_component) const {
    const int p = vector_component ? -scalar_parity(k) : scalar_parity(k);
    return impl_->pick_d2(p);
}

Eigen::VectorXcd ModalEllipticWorkspace::apply_mode_laplacian(int k, const Eigen::VectorXcd& v,
                                                              bool vector_component) const {
    const Impl& im = *impl_;
    const Eigen::VectorXcd dv = apply_real(d1(k, vector_component), v);
    Eigen::VectorXcd out = apply_real(d2(k, vector_component), v);
    out.real() += im.inv_r.cwiseProduct(dv.real()) -
                  static_cast<double>(k) * k * im.inv_r2.cwiseProduct(v.real());
    out.imag() += im.inv_r.cwiseProduct(dv.imag()) -
                  static_cast<double>(k) * k * im.inv_r2.cwiseProduct(v.imag());
    return out;
}

ModalBuffer ModalEllipticWorkspace::to_modes(const std::vector<double>& values) const {
    ModalBuffer out(static_cast<std::size_t>(impl_->m) * impl_->n_modes);
    transform_->forward(values.data(), out.data());
    return out;
}

void ModalEllipticWorkspace::to_values(const ModalBuffer& modes, std::vector<double>& values) const {
    values.resize(grid_->size());
    transform_->inverse(modes.data(), values.data());
}

namespace {

// gather / scatter one mode column of a radial-major modal buffer
Eigen::VectorXcd mode_column(const ModalBuffer& buf, int m, int n_modes, int k) {
    Eigen::VectorXcd v(m);
    for (int i = 0; i < m; ++i) v[i] = buf[static_cast<std::size_t>(i) * n_modes + k];
    return v;
}

void set_mode_column(ModalBuffer& buf, int m, int n_modes, int k, const Eigen::VectorXcd& v) {
    for (int i = 0; i < m; ++i) buf[static_cast<std::size_t>(i) * n_modes + k] = v[i];
}

void check_grid(const ModalEllipticWorkspace& ws, const GridPtr& g, const char* who) {
    if (g.get() != ws.grid_ptr().get())
        throw std::invalid_argument(std::string(who) + ": field grid does not match workspace grid");
}

}  // namespace

// -------------------------------------------------------- curl and lap

ScalarField curl(const ModalEllipticWorkspace& ws, const VectorField& u) {
    check_grid(ws, u.grid, "curl");
    const auto& im = *ws.impl_;
    const ModalBuffer ur = ws.to_modes(u.radial);
    const ModalBuffer ut = ws.to_modes(u.angular);
    ModalBuffer out(ur.size());
    const int nyquist = ws.grid().n_angular() / 2;
    for (int k = 0; k < im.n_modes; ++k) {
        const Eigen::VectorXcd t = mode_column(ut, im.m, im.n_modes, k);
        // r*u_theta has scalar parity on the folded disk grid
        Eigen::VectorXcd c = apply_real(ws.d1(k, false), cwise_mul(im.r, t));
        if (k != nyquist) {
            const Eigen::VectorXcd r = mode_column(ur, im.m, im.n_modes, k);
            c -= kImag * static_cast<double>(k) * r;
        }
        set_mode_column(out, im.m, im.n_modes, k, cwise_mul(im.inv_r, c));
    }
    ScalarField q(ws.grid_ptr());
    ws.to_values(out, q.values);
    return q;
}

VectorField vector_laplacian(const ModalEllipticWorkspace& ws, const VectorField& u) {
    check_grid(ws, u.grid, "vector_laplacian");
    const auto& im = *ws.impl_;
    const ModalBuffer ur = ws.to_modes(u.radial);
    const ModalBuffer ut = ws.to_modes(u.angular);
    ModalBuffer lr(ur.size()), lt(ut.size());
    const int nyquist = ws.grid().n_angular() / 2;
    for (int k = 0; k < im.n_modes; ++k) {
        const Eigen::VectorXcd r = mode_column(ur, im.m, im.n_modes, k);
        const Eigen::VectorXcd t = mode_column(ut, im.m, im.n_modes, k);
        Eigen::VectorXcd ar = ws.apply_mode_laplacian(k, r, true);
        Eigen::VectorXcd at = ws.apply_mode_laplacian(k, t, true);
        ar -= cwise_mul(im.inv_r2, r);
        at -= cwise_mul(im.inv_r2, t);
        if (k != nyquist) {
            ar -= 2.0 * kImag * static_cast<double>(k) * cwise_mul(im.inv_r2, t);
            at += 2.0 * kImag * static_cast<double>(k) * cwise_mul(im.inv_r2, r);
        }
        set_mode_column(lr, im.m, im.n_modes, k, ar);
        set_mode_column(lt, im.m, im.n_modes, k, at);
    }
    VectorField out(ws.grid_ptr());
    ws.to_values(lr, out.radial);
    ws.to_values(lt, out.angular);
    return out;
}

// ------------------------------------------------------------ Biot-Savart

namespace {

// synthesize the perpendicular gradient of a modal stream function
VectorField velocity_from_stream_modes(const ModalEllipticWorkspace& ws, const ModalBuffer& psi) {
    const auto& im = EllipticDetail::impl(ws);
    ModalBuffer ur(psi.size()), ut(psi.size());
    const int nyquist = ws.grid().n_angular() / 2;
    for (int k = 0; k < im.n_modes; ++k) {
        const Eigen::VectorXcd p = mode_column(psi, im.m, im.n_modes, k);
        Eigen::VectorXcd vr = Eigen::VectorXcd::Zero(im.m);
        if (k != 0 && k != nyquist)
            vr = -kImag * static_cast<double>(k) * cwise_mul(im.inv_r, p);
        const Eigen::VectorXcd vt = apply_real(ws.d1(k, false), p);
        set_mode_column(ur, im.m, im.n_modes, k, vr);
        set_mode_column(ut, im.m, im.n_modes, k, vt);
    }
    VectorField u(ws.grid_ptr());
    ws.to_values(ur, u.radial);
    ws.to_values(ut, u.angular);
    return u;
}

}  // namespace

VectorField biot_savart(const ModalEllipticWorkspace& ws, const ScalarField& q) {
    check_grid(ws, q.grid, "biot_savart");
    const auto& im = *ws.impl_;
    const ModalBuffer qm = ws.to_modes(q.values);
    ModalBuffer psi(qm.size());
    for (int k = 0; k < im.n_modes; ++k) {
        Eigen::VectorXcd rhs = mode_column(qm, im.m, im.n_modes, k);
        rhs[im.m - 1] = 0.0;
        if (!im.disk) rhs[0] = 0.0;
        set_mode_column(psi, im.m, im.n_modes, k, solve_complex(im.poisson_lu[k], rhs));
    }
    return velocity_from_stream_modes(ws, psi);
}

VectorField harmonic_field(const ModalEllipticWorkspace& ws, int i) {
    const PolarGrid& g = ws.grid();
    if (g.n_boundary_components() == 0)
        throw std::invalid_argument("harmonic_field: no harmonic fields on simply-connected domain");
    if (i != 1)
        throw std::invalid_argument("harmonic_field: only Y_1 exists on the annulus, got i=" +
                                    std::to_string(i));
    return make_vector(
        ws.grid_ptr(), [](double, double) { return 0.0; },
        [](double r, double) { return 1.0 / (2.0 * M_PI * r); });
}

// ------------------------------------------------------- filtered inverse

std::shared_ptr<ModalEllipticWorkspace::Impl::Filtered>
ModalEllipticWorkspace::Impl::build_filtered(const PolarGrid& g, double alpha) const {
    auto f = std::make_shared<Filtered>();
    f->alpha = alpha;
    f->lu.reserve(n_modes);
    for (int k = 0; k < n_modes; ++k) {
        const Eigen::MatrixXd lk = mode_laplacian(k);
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * m, 2 * m);
        // stream block: lap phi - zeta = 0 at interior nodes
        a.block(0, 0, m, m) = lk;
        a.block(0, m, m, m) = -Eigen::MatrixXd::Identity(m, m);
        // filter block: zeta - alpha lap zeta = g at interior nodes
        a.block(m, m, m, m) = Eigen::MatrixXd::Identity(m, m) - alpha * lk;

        const int p = scalar_parity(k);
        const Eigen::MatrixXd& d = pick_d1(p);
        // outer circle: phi = 0 and phi' = 0
        a.row(m - 1).setZero();
        a(m - 1, m - 1) = 1.0;
        a.row(2 * m - 1).setZero();
        a.block(2 * m - 1, 0, 1, m) = d.row(m - 1);
        if (!g.is_disk()) {
            // inner circle: phi = const (0 here; the constant enters through
            // the influence response) and phi' = 0
            a.row(0).setZero();
            a(0, 0) = 1.0;
            a.row(m).setZero();
            a.block(m, 0, 1, m) = d.row(0);
        }
        f->lu.emplace_back(a);
    }

    if (!g.is_disk()) {
        // influence response: unit stream constant on the inner circle
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * m);
        rhs[0] = 1.0;
        const Eigen::VectorXd x = f->lu[0].solve(rhs);
        f->phi_h = x.head(m);
        f->zeta_h = x.tail(m);
        f->circ_h = circulation_functional(g.r_inner(), alpha, f->phi_h, f->zeta_h);
    }
    return f;
}

// Solve (1 - alpha lap) lap phi = g per mode with the boundary conditions of
// the Dirichlet velocity problem; gamma_target is the circulation that
// v = w - alpha lap w must carry on the inner circle.
ModalBuffer EllipticDetail::filtered_stream_solve(const ModalEllipticWorkspace& ws,
                                                  const ModalEllipticWorkspace::Impl::Filtered& fs,
                                                  const ModalBuffer& g_modes,
                                                  double gamma_target) {
    const auto& im = *ws.impl_;
    const bool disk = im.disk;
    const int m = im.m;
    ModalBuffer psi(g_modes.size());
    for (int k = 0; k < im.n_modes; ++k) {
        Eigen::VectorXcd b = Eigen::VectorXcd::Zero(2 * m);
        const Eigen::VectorXcd gk = mode_column(g_modes, m, im.n_modes, k);
        const int lo = disk ? 0 : 1;
        for (int i = lo; i < m - 1; ++i) b[m + i] = gk[i];
        Eigen::VectorXcd x = solve_complex(fs.lu[k], b);
        if (!disk && k == 0) {
            Eigen::VectorXd phi_re = x.head(m).real(), zeta_re = x.tail(m).real();
            Eigen::VectorXd phi_im = x.head(m).imag(), zeta_im = x.tail(m).imag();
            const double r0 = ws.grid().r_inner();
            const double c_re =
                (gamma_target - im.circulation_functional(r0, fs.alpha, phi_re, zeta_re)) /
                fs.circ_h;
            const double c_im =
                (0.0 - im.circulation_functional(r0, fs.alpha, phi_im, zeta_im)) / fs.circ_h;
            x.head(m).real() = phi_re + c_re * fs.phi_h;
            x.head(m).imag() = phi_im + c_im * fs.phi_h;
            x.tail(m).real() = zeta_re + c_re * fs.zeta_h;
            x.tail(m).imag() = zeta_im + c_im * fs.zeta_h;
        }
        Eigen::VectorXcd phik = x.head(m);
        set_mode_column(psi, m, im.n_modes, k, phik);
    }
    return psi;
}

std::shared_ptr<const ModalEllipticWorkspace::Impl::Filtered> EllipticDetail::get_filtered(
    const ModalEllipticWorkspace& ws, double alpha) {
    auto& im = *ws.impl_;
    std::lock_guard<std::mutex> lock(im.cache_mutex);
    auto it = im.filtered_cache.find(alpha);
    if (it != im.filtered_cache.end()) return it->second;
    auto built = im.build_filtered(ws.grid(), alpha);
    if (!ws.grid().is_disk()) {
        // cache Xtilde_1 = (1 + alpha A)^{-1} Y_1: zero curl, unit circulation
        ModalBuffer zero(static_cast<std::size_t>(im.m) * im.n_modes);
        const ModalBuffer psi = filtered_stream_solve(ws, *built, zero, 1.0);
        built->xtilde = velocity_from_stream_modes(ws, psi);
    }
    std::shared_ptr<const ModalEllipticWorkspace::Impl::Filtered> frozen = built;
    im.filtered_cache.emplace(alpha, frozen);
    return frozen;
}

VectorField helmholtz_stokes_inverse(const ModalEllipticWorkspace& ws, const VectorField& f,
                                     double alpha) {
    check_grid(ws, f.grid, "helmholtz_stokes_inverse");
    if (!(alpha > 0.0))
        throw std::invalid_argument(
            "helmholtz_stokes_inverse: alpha must be positive (use biot_savart at alpha = 0)");
    const ScalarField g = curl(ws, f);
    const double gamma_f = ws.grid().n_boundary_components() > 0 ? circulation(f, 0) : 0.0;
    auto fs = EllipticDetail::get_filtered(ws, alpha);
    const ModalBuffer psi = EllipticDetail::filtered_stream_solve(ws, *fs, ws.to_modes(g.values), gamma_f);
    return velocity_from_stream_modes(ws, psi);
}

VectorField velocity_from_state(const ModalEllipticWorkspace& ws, const ScalarField& q,
                                const std::vector<double>& gamma, double alpha) {
    check_grid(ws, q.grid, "velocity_from_state");
    const int nb = ws.grid().n_boundary_components();
    if (static_cast<int>(gamma.size()) != nb)
        throw std::invalid_argument("velocity_from_state: gamma has length " +
                                    std::to_string(gamma.size()) + ", expected " +
                                    std::to_string(nb));
    if (alpha < 0.0) throw std::invalid_argument("velocity_from_state: alpha must be >= 0");

    if (alpha == 0.0) {
        VectorField u = biot_savart(ws, q);
        if (nb > 0 && gamma[0] != 0.0) {
            const VectorField y1 = harmonic_field(ws, 1);
            simd::active().axpy(gamma[0], y1.radial.data(), u.radial.data(), u.radial.size());
            simd::active().axpy(gamma[0], y1.angular.data(), u.angular.data(), u.angular.size());
        }
        return u;
    }

    auto fs = EllipticDetail::get_filtered(ws, alpha);
    // T(q): curl of S(q) is q and S(q) carries no circulation
    const ModalBuffer psi = EllipticDetail::filtered_stream_solve(ws, *fs, ws.to_modes(q.values), 0.0);
    VectorField u = velocity_from_stream_modes(ws, psi);
    if (nb > 0 && gamma[0] != 0.0) {
        simd::active().axpy(gamma[0], fs->xtilde.radial.data(), u.radial.data(), u.radial.size());
        simd::active().axpy(gamma[0], fs->xtilde.angular.data(), u.angular.data(),
                            u.angular.size());
    }
    return u;
}

// --------------------------------------------------------- heat operator

struct ModalHelmholtzSolver::Impl {
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu;
};

ModalHelmholtzSolver::ModalHelmholtzSolver(const ModalEllipticWorkspace& ws, double coef)
    : ws_(ws), impl_(std::make_unique<Impl>()) {
    const auto& im = *ws.impl_;
    impl_->lu.reserve(im.n_modes);
    for (int k = 0; k < im.n_modes; ++k) {
        Eigen::MatrixXd a =
            Eigen::MatrixXd::Identity(im.m, im.m) - coef * im.mode_laplacian(k);
        a.row(im.m - 1).setZero();
        a(im.m - 1, im.m - 1) = 1.0;
        if (!im.disk) {
            a.row(0).setZero();
            a(0, 0) = 1.0;
        }
        impl_->lu.emplace_back(a);
    }
}

ModalHelmholtzSolver::~ModalHelmholtzSolver() = default;

ScalarField ModalHelmholtzSolver::solve(const ScalarField& rhs) const {
    check_grid(ws_, rhs.grid, "ModalHelmholtzSolver::solve");
    const auto& im = *ws_.impl_;
    const ModalBuffer rm = ws_.to_modes(rhs.values);
    ModalBuffer out(rm.size());
    for (int k = 0; k < im.n_modes; ++k) {
        Eigen::VectorXcd b = mode_column(rm, im.m, im.n_modes, k);
        b[im.m - 1] = 0.0;  // homogeneous Dirichlet data
        if (!im.disk) b[0] = 0.0;
        set_mode_column(out, im.m, im.n_modes, k, solve_complex(impl_->lu[k], b));
    }
    ScalarField q(ws_.grid_ptr());
    ws_.to_values(out, q.values);
    return q;
}

// -------------------------------------------------------------- probes

ScalarField random_band_limited(const ModalEllipticWorkspace& ws, std::mt19937_64& rng) {
    const auto& im = EllipticDetail::impl(ws);
    const PolarGrid& g = ws.grid();
    // A fresh bandwidth per draw, within the resolvable band: the smooth
    // draws dominate sup-type functionals while wide draws exercise the
    // rough end. With a fixed full band every draw is statistically alike
    // and the sample sup tracks the dense-field mean instead of the
    // extremal ratio.
    std::uniform_int_distribution<int> kcut(0, g.n_angular() / 4);
    std::uniform_int_distribution<int> mcut(1, g.n_radial() / 2);
    const int kmax = kcut(rng);
    const int mmax = mcut(rng);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    // Chebyshev table in the mapped radial variable
    Eigen::VectorXd x(im.m);
    for (int i = 0; i < im.m; ++i) {
        const double r = g.radial_nodes()[i];
        x[i] = g.is_disk() ? r / g.r_outer()
                           : 2.0 * (r - g.r_inner()) / (g.r_outer() - g.r_inner()) - 1.0;
    }
    Eigen::MatrixXd cheb(im.m, mmax);
    for (int i = 0; i < im.m; ++i) {
        double t0 = 1.0, t1 = x[i];
        for (int d = 0; d < mmax; ++d) {
            cheb(i, d) = (d == 0) ? 1.0 : t1;
            if (d >= 1) {
                const double t2 = 2.0 * x[i] * t1 - t0;
                t0 = t1;
                t1 = t2;
            }
        }
    }

    ModalBuffer modes(static_cast<std::size_t>(im.m) * im.n_modes);
    for (int k = 0; k <= kmax; ++k) {
        for (int d = 0; d < mmax; ++d) {
            if (g.is_disk() && (d % 2) != (k % 2)) continue;  // parity at the origin
            const double re = unit(rng);
            const double imag = k > 0 ? unit(rng) : 0.0;
            const std::complex<double> c(re, imag);
            for (int i = 0; i < im.m; ++i)
                modes[static_cast<std::size_t>(i) * im.n_modes + k] += c * cheb(i, d);
        }
    }
    ScalarField q(ws.grid_ptr());
    ws.to_values(modes, q.values);

    // unit L2 normalization
    const auto& w = g.quadrature_weights();
    const double l2 = std::sqrt(
        simd::active().weighted_dot(w.data(), q.values.data(), q.values.data(), w.size()));
    if (l2 > 0.0) simd::active().scale(1.0 / l2, q.values.data(), q.values.size());
    return q;
}

OperatorBoundReport probe_operator_bound(const ModalEllipticWorkspace& ws, double alpha, double p,
                                         int trials, unsigned long seed) {
    if (trials < 1) throw std::invalid_argument("probe_operator_bound: trials must be >= 1");
    if (!(p > 1.0) || !std::isfinite(p))
        throw std::invalid_argument("probe_operator_bound: need 1 < p < inf");
    std::mt19937_64 rng(seed);
    OperatorBoundReport report;
    report.ratios.reserve(trials);
    const std::vector<double> no_circulation(ws.grid().n_boundary_components(), 0.0);
    for (int t = 0; t < trials; ++t) {
        const ScalarField q = random_band_limited(ws, rng);
        const double lp = lp_norm(q, p);
        const VectorField u = velocity_from_state(ws, q, no_circulation, alpha);
        const double h1 = h1_norm(ws, u);
        const double ratio = h1 / lp;
        report.ratios.push_back(ratio);
        report.sup_ratio = std::max(report.sup_ratio, ratio);
    }
    return report;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("log_log_slope: need two aligned samples at least");
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace alphaflow
