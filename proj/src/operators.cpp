#include "qbc/operators.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qbc {

namespace {
constexpr double kPi = std::numbers::pi;

void require_kind(const Grid& g, GridKind kind, const char* what) {
    if (g.kind != kind) {
        std::ostringstream msg;
        msg << what << " requires a different grid kind";
        throw NumericsError(msg.str());
    }
}
}  // namespace

void require_constants(const PhysicalConstants& c) {
    if (!(c.hbar > 0.0) || !std::isfinite(c.hbar) || !(c.mass > 0.0) || !std::isfinite(c.mass))
        throw NumericsError("physical constants must be positive and finite");
}

BoundarySpec BoundarySpec::dirichlet() {
    BoundarySpec b;
    b.kind = Kind::Dirichlet;
    return b;
}

BoundarySpec BoundarySpec::neumann() {
    BoundarySpec b;
    b.kind = Kind::Neumann;
    return b;
}

BoundarySpec BoundarySpec::robin(double mu0, double mupi) {
    if (!std::isfinite(mu0) || !std::isfinite(mupi) || mu0 < 0.0 || mupi < 0.0)
        throw NumericsError("Robin strengths must be finite and nonnegative");
    BoundarySpec b;
    b.kind = Kind::Robin;
    b.mu0 = mu0;
    b.mupi = mupi;
    return b;
}

BoundarySpec BoundarySpec::twisted(double alpha) {
    if (!std::isfinite(alpha)) throw NumericsError("twist angle must be finite");
    BoundarySpec b;
    b.kind = Kind::TwistedPeriodic;
    b.alpha = std::fmod(alpha, 2.0 * kPi);
    if (b.alpha < 0.0) b.alpha += 2.0 * kPi;
    return b;
}

std::string BoundarySpec::describe() const {
    std::ostringstream s;
    switch (kind) {
        case Kind::Dirichlet: s << "dirichlet"; break;
        case Kind::Neumann: s << "neumann"; break;
        case Kind::Robin: s << "robin(mu0=" << mu0 << ",mupi=" << mupi << ")"; break;
        case Kind::TwistedPeriodic: s << "twisted(alpha=" << alpha << ")"; break;
    }
    return s.str();
}

HermitianOperator build_circle_laplacian(const Grid& g, const PhysicalConstants& c) {
    require_kind(g, GridKind::Circle, "circle Laplacian");
    require_constants(c);
    const std::size_t n = g.n;
    const double s = c.hbar * c.hbar / (2.0 * c.mass * g.h * g.h);
    HermitianOperator h(n, "circle-laplacian");
    for (std::size_t k = 0; k < n; ++k) {
        h.set(k, k, 2.0 * s);
        h.set(k, (k + 1) % n, -s);
    }
    return h;
}

HermitianOperator build_circle_momentum(const Grid& g, const PhysicalConstants& c) {
    require_kind(g, GridKind::Circle, "circle momentum");
    require_constants(c);
    const std::size_t n = g.n;
    const long kmin = -static_cast<long>(n) / 2 + 1;
    const long kmax = static_cast<long>(n) / 2;
    // Toeplitz coefficients c_d = (hbar/N) sum_k k e^{i k d h}
    ComplexVector coeff(n);
    for (std::size_t d = 0; d < n; ++d) {
        Complex acc = 0.0;
        for (long k = kmin; k <= kmax; ++k) {
            const double phase = static_cast<double>(k) * static_cast<double>(d) * g.h;
            acc += static_cast<double>(k) * Complex(std::cos(phase), std::sin(phase));
        }
        coeff[d] = acc * (c.hbar / static_cast<double>(n));
    }
    HermitianOperator p(n, "circle-momentum");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p.at(i, j) = coeff[(i + n - j) % n];
    p.hermitize();
    return p;
}

HermitianOperator build_interval_hamiltonian(const Grid& g, const BoundarySpec& bc,
                                             const PhysicalConstants& c) {
    require_kind(g, GridKind::Interval, "interval Hamiltonian");
    require_constants(c);
    const std::size_t m = g.n - 1;  // segments
    const double s = c.hbar * c.hbar / (2.0 * c.mass * g.h * g.h);
    const double r2 = std::sqrt(2.0);
    switch (bc.kind) {
        case BoundarySpec::Kind::Dirichlet: {
            HermitianOperator h(m - 1, "interval-dirichlet");
            for (std::size_t j = 0; j < m - 1; ++j) {
                h.set(j, j, 2.0 * s);
                if (j + 1 < m - 1) h.set(j, j + 1, -s);
            }
            return h;
        }
        case BoundarySpec::Kind::Neumann:
        case BoundarySpec::Kind::Robin: {
            const double mu0 = (bc.kind == BoundarySpec::Kind::Robin) ? bc.mu0 : 0.0;
            const double mupi = (bc.kind == BoundarySpec::Kind::Robin) ? bc.mupi : 0.0;
            const char* name =
                (bc.kind == BoundarySpec::Kind::Robin) ? "interval-robin" : "interval-neumann";
            HermitianOperator h(m + 1, name);
            // boundary rows in half-weight coordinates: the sqrt(2) off-diagonal
            // restores symmetry after eliminating the ghost point
            h.set(0, 0, s * (2.0 + 2.0 * g.h * mu0));
            h.set(0, 1, -r2 * s);
            h.set(m, m, s * (2.0 + 2.0 * g.h * mupi));
            h.set(m, m - 1, -r2 * s);
            for (std::size_t j = 1; j < m; ++j) {
                h.set(j, j, 2.0 * s);
                if (j + 1 < m) h.set(j, j + 1, -s);
            }
            return h;
        }
        case BoundarySpec::Kind::TwistedPeriodic: {
            HermitianOperator h(m, "interval-twisted");
            for (std::size_t j = 0; j < m; ++j) {
                h.set(j, j, 2.0 * s);
                if (j + 1 < m) h.set(j, j + 1, -s);
            }
            const Complex corner = -s * std::exp(Complex(0.0, bc.alpha));
            h.set(0, m - 1, h.at(0, m - 1) + corner);
            return h;
        }
    }
    throw NumericsError("unhandled boundary kind");
}

HermitianOperator build_parity_operator(const Grid& g) {
    const auto perm = parity_permutation(g);
    HermitianOperator p(g.n, "parity");
    for (std::size_t k = 0; k < g.n; ++k) p.at(k, perm[k]) = 1.0;
    if (p.hermiticity_error() > 0.0) throw NumericsError("reflection permutation not involutive");
    return p;
}

HermitianOperator build_spinor_parity(const Grid& g, const std::array<double, 3>& axis) {
    require_kind(g, GridKind::Circle, "spinor parity");
    const double nrm =
        std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (std::fabs(nrm - 1.0) > 1e-12)
        throw NumericsError("spin axis must be a unit vector");
    const auto perm = parity_permutation(g);
    const std::size_t n = g.n;
    HermitianOperator p(2 * n, "spinor-parity");
    const Complex upper_lower(axis[0], -axis[1]);  // (n.sigma)_{01}
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t r = perm[k];
        p.at(k, r) = axis[2];
        p.at(n + k, n + r) = -axis[2];
        p.at(k, n + r) = upper_lower;
        p.at(n + k, r) = std::conj(upper_lower);
    }
    p.hermitize();
    return p;
}

std::vector<double> compute_current(const ComplexVector& state, const Grid& g,
                                    const PhysicalConstants& c) {
    require_constants(c);
    if (state.size() != g.n) throw NumericsError("state length does not match grid");
    const std::size_t n = g.n;
    const double scale = c.hbar / c.mass;
    std::vector<double> j(n);
    auto central = [&](std::size_t fwd, std::size_t bwd) {
        return (state[fwd] - state[bwd]) / (2.0 * g.h);
    };
    if (g.kind == GridKind::Circle) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex d = central((k + 1) % n, (k + n - 1) % n);
            j[k] = scale * std::imag(std::conj(state[k]) * d);
        }
        return j;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const Complex d = central(k + 1, k - 1);
        j[k] = scale * std::imag(std::conj(state[k]) * d);
    }
    const Complex d0 =
        (-3.0 * state[0] + 4.0 * state[1] - state[2]) / (2.0 * g.h);
    const Complex dn =
        (3.0 * state[n - 1] - 4.0 * state[n - 2] + state[n - 3]) / (2.0 * g.h);
    j[0] = scale * std::imag(std::conj(state[0]) * d0);
    j[n - 1] = scale * std::imag(std::conj(state[n - 1]) * dn);
    return j;
}

ConnectionCheck check_connection_projectable(const ConnectionSpec& conn, const Grid& g) {
    require_kind(g, GridKind::Circle, "connection check");
    if (conn.alpha_samples.size() != g.n)
        throw NumericsError("connection samples do not match grid");
    for (double v : conn.alpha_samples)
        if (!std::isfinite(v)) throw NumericsError("connection samples must be finite");
    const auto perm = parity_permutation(g);
    ConnectionCheck chk;
    for (std::size_t k = 0; k < g.n; ++k)
        chk.max_violation = std::max(
            chk.max_violation, std::fabs(conn.alpha_samples[k] + conn.alpha_samples[perm[k]]));
    chk.max_violation = std::max(chk.max_violation, std::fabs(conn.alpha_samples[g.n / 2]));
    chk.projectable = chk.max_violation <= 1e-10;
    return chk;
}

}  // namespace qbc
