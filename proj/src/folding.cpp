#include "qbc/folding.hpp"

#include <algorithm>
#include <cmath>

namespace qbc {

namespace {

void require_pair(const SpinorState& s, std::size_t want) {
    if (s.phi_plus.size() != s.phi_minus.size())
        throw NumericsError("spinor components must have equal length");
    if (s.phi_plus.size() != want) throw NumericsError("spinor length does not match the grid");
}

std::size_t wrapped_size(const Grid& source) {
    return source.kind == GridKind::Circle ? source.n : source.n - 1;
}

// slot order: y = 0 joint, + sheet interior, far joint, - sheet interior
std::vector<std::size_t> slot_nodes(const FoldIndexMap& map, std::size_t nw) {
    const std::size_t m = map.folded.n - 1;
    std::vector<std::size_t> nodes(nw);
    for (std::size_t j = 0; j <= m; ++j) nodes[j] = map.plus_source[j] % nw;
    for (std::size_t j = 1; j < m; ++j) nodes[m + j] = map.minus_source[j] % nw;
    return nodes;
}

double mode_step(const Grid& source) {
    // wavenumber of the lowest positive mode on the (wrapped) source
    return source.kind == GridKind::Circle ? 1.0 : 2.0 * M_PI / source.length;
}

}  // namespace

SpinorState fold(const ComplexVector& psi, const Grid& source) {
    const auto map = fold_index_map(source);
    if (psi.size() != source.n) throw NumericsError("fold: state length does not match the grid");
    SpinorState s;
    s.phi_plus.resize(map.folded.n);
    s.phi_minus.resize(map.folded.n);
    for (std::size_t j = 0; j < map.folded.n; ++j) {
        s.phi_plus[j] = psi[map.plus_source[j]];
        s.phi_minus[j] = psi[map.minus_source[j]];
    }
    return s;
}

ComplexVector unfold(const SpinorState& s, const Grid& source) {
    const auto map = fold_index_map(source);
    require_pair(s, map.folded.n);
    ComplexVector psi(source.n);
    for (std::size_t j = 0; j < map.folded.n; ++j) {
        psi[map.plus_source[j]] = s.phi_plus[j];
        psi[map.minus_source[j]] = s.phi_minus[j];
    }
    for (const std::size_t j : map.fixed)
        psi[map.plus_source[j]] = 0.5 * (s.phi_plus[j] + s.phi_minus[j]);
    return psi;
}

double spinor_norm(const SpinorState& s, const Grid& folded) {
    require_pair(s, folded.n);
    const double np = weighted_norm(folded, s.phi_plus);
    const double nm = weighted_norm(folded, s.phi_minus);
    return std::sqrt(np * np + nm * nm);
}

HermitianOperator build_dirac(const Grid& source, const Grid& folded,
                              const PhysicalConstants& c) {
    require_constants(c);
    const auto map = fold_index_map(source);
    if (folded.kind != GridKind::Interval || folded.n != map.folded.n ||
        std::abs(folded.h - map.folded.h) > 1e-12 ||
        std::abs(folded.length - map.folded.length) > 1e-12)
        throw NumericsError("build_dirac: folded grid does not match the source");

    const std::size_t nw = wrapped_size(source);
    const double theta = 2.0 * M_PI / static_cast<double>(nw);
    const double kf = mode_step(source);
    const long half = static_cast<long>(nw) / 2;

    // circulant kernel of the spectral momentum on the wrapped source
    std::vector<Complex> kernel(nw);
    for (std::size_t delta = 0; delta < nw; ++delta) {
        Complex acc = 0.0;
        for (long n = -half + 1; n <= half; ++n)
            acc += static_cast<double>(n) *
                   std::polar(1.0, theta * static_cast<double>(n) * static_cast<double>(delta));
        kernel[delta] = acc * (c.hbar * kf / static_cast<double>(nw));
    }

    HermitianOperator momentum(nw, "spectral momentum");
    for (std::size_t i = 0; i < nw; ++i)
        for (std::size_t j = i; j < nw; ++j)
            momentum.set(i, j, kernel[(i + nw - j) % nw]);

    const auto nodes = slot_nodes(map, nw);
    ComplexMatrix u(nw, nw);
    for (std::size_t slot = 0; slot < nw; ++slot) u.at(slot, nodes[slot]) = 1.0;

    auto dirac = conjugate(momentum, u);
    dirac.label = "folded dirac";
    return dirac;
}

ComplexVector dirac_coords_from_spinor(const SpinorState& s, const Grid& source) {
    const auto map = fold_index_map(source);
    require_pair(s, map.folded.n);
    const std::size_t m = map.folded.n - 1;
    ComplexVector coords(wrapped_size(source));
    coords[0] = 0.5 * (s.phi_plus[0] + s.phi_minus[0]);
    coords[m] = 0.5 * (s.phi_plus[m] + s.phi_minus[m]);
    for (std::size_t j = 1; j < m; ++j) {
        coords[j] = s.phi_plus[j];
        coords[m + j] = s.phi_minus[j];
    }
    return coords;
}

SpinorState spinor_from_dirac_coords(const ComplexVector& coords, const Grid& source) {
    const auto map = fold_index_map(source);
    if (coords.size() != wrapped_size(source))
        throw NumericsError("coordinate length does not match the folded system");
    const std::size_t m = map.folded.n - 1;
    SpinorState s;
    s.phi_plus.resize(m + 1);
    s.phi_minus.resize(m + 1);
    s.phi_plus[0] = s.phi_minus[0] = coords[0];
    s.phi_plus[m] = s.phi_minus[m] = coords[m];
    for (std::size_t j = 1; j < m; ++j) {
        s.phi_plus[j] = coords[j];
        s.phi_minus[j] = coords[m + j];
    }
    return s;
}

SpinorState evolve(const SpinorState& s, double t, const Grid& source,
                   const PhysicalConstants& c) {
    require_constants(c);
    if (!std::isfinite(t)) throw NumericsError("evolve: time must be finite");
    const auto psi = unfold(s, source);

    const std::size_t nw = wrapped_size(source);
    const double theta = 2.0 * M_PI / static_cast<double>(nw);
    const double kf = mode_step(source);
    const long half = static_cast<long>(nw) / 2;

    ComplexVector wrapped(nw);
    for (std::size_t j = 0; j < nw; ++j) wrapped[j] = psi[j];
    if (source.kind == GridKind::TruncatedLine)
        wrapped[0] = 0.5 * (psi.front() + psi.back());  // far ends identified

    std::vector<Complex> roots(nw);
    for (std::size_t r = 0; r < nw; ++r) roots[r] = std::polar(1.0, theta * static_cast<double>(r));

    ComplexVector shifted(nw, 0.0);
    for (long n = -half + 1; n <= half; ++n) {
        const std::size_t rn = static_cast<std::size_t>(((n % static_cast<long>(nw)) +
                                                         static_cast<long>(nw)) %
                                                        static_cast<long>(nw));
        Complex coef = 0.0;
        for (std::size_t j = 0; j < nw; ++j) coef += wrapped[j] * std::conj(roots[(rn * j) % nw]);
        coef *= std::polar(1.0, -static_cast<double>(n) * kf * t) / static_cast<double>(nw);
        for (std::size_t j = 0; j < nw; ++j) shifted[j] += coef * roots[(rn * j) % nw];
    }

    ComplexVector out(source.n);
    for (std::size_t j = 0; j < nw; ++j) out[j] = shifted[j];
    if (source.kind == GridKind::TruncatedLine) out[nw] = shifted[0];
    return fold(out, source);
}

SpinorState evolve_crank_nicolson(const SpinorState& s, double t, std::size_t steps,
                                  const HermitianOperator& dirac, const Grid& source,
                                  const PhysicalConstants& c) {
    require_constants(c);
    if (steps == 0) throw NumericsError("evolve_crank_nicolson: needs at least one step");
    if (!std::isfinite(t)) throw NumericsError("evolve_crank_nicolson: time must be finite");
    const auto coords = dirac_coords_from_spinor(s, source);
    if (coords.size() != dirac.dim)
        throw NumericsError("evolve_crank_nicolson: operator does not match the grid");

    const auto eig = hermitian_eigen(dirac);
    const double dt = t / static_cast<double>(steps);
    ComplexVector out(coords.size(), 0.0);
    for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k) {
        const auto& mode = eig.eigenvectors[k];
        Complex amp = 0.0;
        for (std::size_t j = 0; j < coords.size(); ++j) amp += std::conj(mode[j]) * coords[j];
        // (1 - iz)/(1 + iz) walks the unit circle; accumulate its phase exactly
        const double z = eig.eigenvalues[k] * dt / (2.0 * c.hbar);
        amp *= std::polar(1.0, -2.0 * std::atan(z) * static_cast<double>(steps));
        for (std::size_t j = 0; j < coords.size(); ++j) out[j] += amp * mode[j];
    }
    return spinor_from_dirac_coords(out, source);
}

SpinDensityMatrix spin_density(const SpinorState& s, const Grid& folded) {
    const double nrm = spinor_norm(s, folded);
    if (std::abs(nrm - 1.0) > 1e-8)
        throw NumericsError("spin_density: state is not normalized");

    const Complex pp = weighted_inner(folded, s.phi_plus, s.phi_plus);
    const Complex mm = weighted_inner(folded, s.phi_minus, s.phi_minus);
    const Complex cross = weighted_inner(folded, s.phi_minus, s.phi_plus);
    const double trace = pp.real() + mm.real();

    SpinDensityMatrix rho;
    rho.entries[0] = pp.real() / trace;
    rho.entries[1] = cross / trace;
    rho.entries[2] = std::conj(cross) / trace;
    rho.entries[3] = mm.real() / trace;

    const auto lam = spin_eigenvalues(rho);
    if (lam[0] > 1.0 + 1e-10 || lam[1] < -1e-10)
        throw NumericsError("spin_density: eigenvalues left the unit interval");
    return rho;
}

std::array<double, 2> spin_eigenvalues(const SpinDensityMatrix& rho) {
    const double a = rho.at(0, 0).real();
    const double d = rho.at(1, 1).real();
    const double disc = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(rho.at(0, 1)));
    return {0.5 * (a + d) + disc, 0.5 * (a + d) - disc};
}

double entanglement_entropy(const SpinDensityMatrix& rho) {
    double s = 0.0;
    for (double lam : spin_eigenvalues(rho)) {
        lam = std::clamp(lam, 0.0, 1.0);
        if (lam > 0.0) s -= lam * std::log(lam);
    }
    return s;
}

}  // namespace qbc
