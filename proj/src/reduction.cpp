#include "qbc/reduction.hpp"

#include <cmath>
#include <sstream>

namespace qbc {

namespace {

void require_circle(const Grid& g, const char* who) {
    if (g.kind != GridKind::Circle) {
        std::ostringstream msg;
        msg << who << " needs a circle grid";
        throw NumericsError(msg.str());
    }
}

void require_size(std::size_t got, std::size_t want, const char* who) {
    if (got != want) {
        std::ostringstream msg;
        msg << who << " expects " << want << " samples, got " << got;
        throw NumericsError(msg.str());
    }
}

// weighted norm of (P - sign) state; the gate for claiming definite parity
double sector_defect(const ComplexVector& state, const Grid& g, int sign) {
    const auto perm = parity_permutation(g);
    ComplexVector diff(state.size());
    for (std::size_t k = 0; k < state.size(); ++k)
        diff[k] = state[perm[k]] - static_cast<double>(sign) * state[k];
    return weighted_norm(g, diff);
}

void require_sector(const ComplexVector& state, const Grid& g, int sign, const char* who) {
    const double defect = sector_defect(state, g, sign);
    if (defect > 1e-8) {
        std::ostringstream msg;
        msg << who << " expects a state of parity " << (sign > 0 ? "+1" : "-1")
            << "; asymmetry norm " << defect;
        throw NumericsError(msg.str());
    }
}

int checked_sign(int sign) {
    if (sign != +1 && sign != -1) throw NumericsError("parity sector sign must be +1 or -1");
    return sign;
}

}  // namespace

Grid matched_interval_grid(const Grid& circle) {
    require_circle(circle, "matched_interval_grid");
    return make_interval_grid(circle.n / 2);
}

ParitySplit split_even_odd(const ComplexVector& state, const Grid& circle) {
    require_circle(circle, "split_even_odd");
    require_size(state.size(), circle.n, "split_even_odd");
    const auto perm = parity_permutation(circle);
    ParitySplit parts;
    parts.even.resize(state.size());
    parts.odd.resize(state.size());
    for (std::size_t k = 0; k < state.size(); ++k) {
        parts.even[k] = 0.5 * (state[k] + state[perm[k]]);
        parts.odd[k] = 0.5 * (state[k] - state[perm[k]]);
    }
    return parts;
}

ComplexVector u_plus(const ComplexVector& state, const Grid& circle) {
    require_circle(circle, "u_plus");
    require_size(state.size(), circle.n, "u_plus");
    require_sector(state, circle, +1, "u_plus");
    const std::size_t m = circle.n / 2;
    const double root2 = std::sqrt(2.0);
    ComplexVector out(m + 1);
    for (std::size_t k = 0; k < m; ++k) out[k] = root2 * state[m + k];
    out[m] = root2 * state[0];  // x = pi is the wrap node
    return out;
}

ComplexVector u_plus_adjoint(const ComplexVector& interval_state, const Grid& circle) {
    require_circle(circle, "u_plus_adjoint");
    const std::size_t m = circle.n / 2;
    require_size(interval_state.size(), m + 1, "u_plus_adjoint");
    const double inv = 1.0 / std::sqrt(2.0);
    ComplexVector out(circle.n);
    for (std::size_t k = 0; k < m; ++k) out[m + k] = inv * interval_state[k];
    out[0] = inv * interval_state[m];
    for (std::size_t k = 1; k < m; ++k) out[m - k] = out[m + k];  // even extension
    return out;
}

ComplexVector u_minus(const ComplexVector& state, const Grid& circle) {
    require_circle(circle, "u_minus");
    require_size(state.size(), circle.n, "u_minus");
    require_sector(state, circle, -1, "u_minus");
    const std::size_t m = circle.n / 2;
    const double root2 = std::sqrt(2.0);
    ComplexVector out(m + 1);
    for (std::size_t k = 0; k < m; ++k) out[k] = root2 * state[m + k];
    out[m] = root2 * state[0];
    return out;
}

ComplexVector u_minus_adjoint(const ComplexVector& interval_state, const Grid& circle) {
    require_circle(circle, "u_minus_adjoint");
    const std::size_t m = circle.n / 2;
    require_size(interval_state.size(), m + 1, "u_minus_adjoint");
    const double inv = 1.0 / std::sqrt(2.0);
    ComplexVector out(circle.n);
    for (std::size_t k = 0; k < m; ++k) out[m + k] = inv * interval_state[k];
    out[0] = inv * interval_state[m];
    for (std::size_t k = 1; k < m; ++k) out[m - k] = -out[m + k];  // odd extension
    return out;
}

ParitySector parity_sector(const Grid& circle, int sign) {
    require_circle(circle, "parity_sector");
    checked_sign(sign);
    const std::size_t n = circle.n;
    const std::size_t m = n / 2;
    const auto perm = parity_permutation(circle);

    ParitySector sector;
    sector.sign = sign;
    sector.projector = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        sector.projector.at(k, k) += 0.5;
        sector.projector.at(k, perm[k]) += 0.5 * static_cast<double>(sign);
    }

    const double half = 1.0 / std::sqrt(2.0);
    if (sign > 0) {
        sector.isometry = ComplexMatrix(m + 1, n);
        sector.isometry.at(0, m) = 1.0;
        for (std::size_t k = 1; k < m; ++k) {
            sector.isometry.at(k, m + k) = half;
            sector.isometry.at(k, m - k) = half;
        }
        sector.isometry.at(m, 0) = 1.0;
    } else {
        sector.isometry = ComplexMatrix(m - 1, n);
        for (std::size_t k = 1; k < m; ++k) {
            sector.isometry.at(k - 1, m + k) = half;
            sector.isometry.at(k - 1, m - k) = -half;
        }
    }
    return sector;
}

namespace {

// max entry of [op, P] without forming products; P is the node reflection
double reflection_commutator(const HermitianOperator& op, const std::vector<std::size_t>& perm) {
    double worst = 0.0;
    for (std::size_t i = 0; i < op.dim; ++i)
        for (std::size_t j = 0; j < op.dim; ++j)
            worst = std::max(worst, std::abs(op.at(i, perm[j]) - op.at(perm[i], j)));
    return worst;
}

[[noreturn]] void reject_not_projectable(const char* who, double worst) {
    std::ostringstream msg;
    msg << who << ": operator does not commute with the reflection (max commutator entry "
        << worst << "), so it has no self-adjoint half-domain projection";
    throw NumericsError(msg.str());
}

}  // namespace

HermitianOperator reduce_hamiltonian(const HermitianOperator& circle_op, const Grid& circle,
                                     int sign, const Tolerances& tol) {
    require_circle(circle, "reduce_hamiltonian");
    checked_sign(sign);
    if (circle_op.dim != circle.n)
        throw NumericsError("reduce_hamiltonian: operator and grid dimensions differ");

    const auto perm = parity_permutation(circle);
    const double worst = reflection_commutator(circle_op, perm);
    const double scale = std::max(1.0, circle_op.max_abs());
    if (worst > tol.commutator * scale) reject_not_projectable("reduce_hamiltonian", worst);

    auto reduced = compress(circle_op, parity_sector(circle, sign).isometry, tol);
    reduced.label = circle_op.label + (sign > 0 ? " [even sector]" : " [odd sector]");
    return reduced;
}

SpinorReduction reduce_spinor(const HermitianOperator& doubled_op, const Grid& circle, int sign,
                              const std::array<double, 3>& axis, const Tolerances& tol) {
    require_circle(circle, "reduce_spinor");
    checked_sign(sign);
    const std::size_t n = circle.n;
    if (doubled_op.dim != 2 * n)
        throw NumericsError("reduce_spinor: operator must act on the doubled circle space");

    // commutator with the spinor reflection S: since both are Hermitian,
    // op S = (S op)^dagger, so one sparse product suffices
    const auto spinor = build_spinor_parity(circle, axis);
    ComplexMatrix smat(2 * n, 2 * n);
    smat.data = spinor.entries;
    ComplexMatrix hmat(2 * n, 2 * n);
    hmat.data = doubled_op.entries;
    const auto sh = smat.multiply(hmat);
    double worst = 0.0;
    for (std::size_t i = 0; i < 2 * n; ++i)
        for (std::size_t j = 0; j < 2 * n; ++j)
            worst = std::max(worst, std::abs(std::conj(sh.at(j, i)) - sh.at(i, j)));
    const double scale = std::max(1.0, doubled_op.max_abs());
    if (worst > tol.commutator * scale) reject_not_projectable("reduce_spinor", worst);

    // spin states along and against the axis; (a, b) and (-conj b, conj a)
    const double nx = axis[0], ny = axis[1], nz = axis[2];
    std::complex<double> a, b;
    if (nz >= 0.0) {
        const double norm = std::sqrt(2.0 * (1.0 + nz));
        a = (1.0 + nz) / norm;
        b = std::complex<double>(nx, ny) / norm;
    } else {
        const double norm = std::sqrt(2.0 * (1.0 - nz));
        a = std::complex<double>(nx, -ny) / norm;
        b = (1.0 - nz) / norm;
    }
    const std::complex<double> aligned[2] = {a, b};
    const std::complex<double> against[2] = {-std::conj(b), std::conj(a)};

    const auto even = parity_sector(circle, +1).isometry;
    const auto odd = parity_sector(circle, -1).isometry;
    const ComplexMatrix& upper_space = (sign > 0) ? even : odd;
    const ComplexMatrix& lower_space = (sign > 0) ? odd : even;

    ComplexMatrix v(upper_space.rows + lower_space.rows, 2 * n);
    for (std::size_t r = 0; r < upper_space.rows; ++r)
        for (std::size_t j = 0; j < n; ++j) {
            const auto w = upper_space.at(r, j);
            if (w == std::complex<double>(0.0)) continue;
            v.at(r, j) = std::conj(aligned[0]) * w;
            v.at(r, n + j) = std::conj(aligned[1]) * w;
        }
    for (std::size_t r = 0; r < lower_space.rows; ++r)
        for (std::size_t j = 0; j < n; ++j) {
            const auto w = lower_space.at(r, j);
            if (w == std::complex<double>(0.0)) continue;
            v.at(upper_space.rows + r, j) = std::conj(against[0]) * w;
            v.at(upper_space.rows + r, n + j) = std::conj(against[1]) * w;
        }

    const auto sector = compress(doubled_op, v, tol);

    SpinorReduction out;
    const std::size_t cut = upper_space.rows;
    out.upper = HermitianOperator(cut, doubled_op.label + " [spin-aligned block]");
    out.lower = HermitianOperator(sector.dim - cut, doubled_op.label + " [spin-antialigned block]");
    for (std::size_t i = 0; i < sector.dim; ++i)
        for (std::size_t j = 0; j < sector.dim; ++j) {
            const auto value = sector.at(i, j);
            if (i < cut && j < cut) {
                out.upper.at(i, j) = value;
            } else if (i >= cut && j >= cut) {
                out.lower.at(i - cut, j - cut) = value;
            } else {
                out.coupling_max = std::max(out.coupling_max, std::abs(value));
            }
        }
    return out;
}

}  // namespace qbc
