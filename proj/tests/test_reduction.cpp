#include "doctest.h"

#include "qbc/reduction.hpp"

#include <cmath>
#include <complex>
#include <random>

using namespace qbc;

namespace {

const std::complex<double> I{0.0, 1.0};

ComplexVector random_state(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexVector out(n);
    for (auto& v : out) v = {u(rng), u(rng)};
    return out;
}

double max_abs_diff(const ComplexVector& a, const ComplexVector& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    return worst;
}

double max_entry_diff(const HermitianOperator& a, const HermitianOperator& b) {
    REQUIRE(a.dim == b.dim);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.entries.size(); ++k)
        worst = std::max(worst, std::abs(a.entries[k] - b.entries[k]));
    return worst;
}

HermitianOperator doubled(const HermitianOperator& up, const HermitianOperator& down) {
    REQUIRE(up.dim == down.dim);
    const std::size_t n = up.dim;
    HermitianOperator out(2 * n, up.label + " (doubled)");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            out.at(i, j) = up.at(i, j);
            out.at(n + i, n + j) = down.at(i, j);
        }
    return out;
}

// propagator through the eigenbasis, acting on operator coordinates
ComplexVector evolve_coords(const HermitianOperator& op, const ComplexVector& coords, double t) {
    const auto eig = hermitian_eigen(op);
    ComplexVector out(coords.size(), 0.0);
    for (std::size_t j = 0; j < op.dim; ++j) {
        const auto& mode = eig.eigenvectors[j];
        std::complex<double> amp = 0.0;
        for (std::size_t k = 0; k < op.dim; ++k) amp += std::conj(mode[k]) * coords[k];
        const auto phase = std::exp(-I * eig.eigenvalues[j] * t);
        for (std::size_t k = 0; k < op.dim; ++k) out[k] += phase * amp * mode[k];
    }
    return out;
}

}  // namespace

TEST_SUITE("reduction") {

TEST_CASE("split into even and odd parts") {
    const Grid g = make_circle_grid(32);

    ComplexVector wave(32);
    for (std::size_t k = 0; k < 32; ++k) wave[k] = std::exp(I * g.nodes[k]);
    const auto parts = split_even_odd(wave, g);
    for (std::size_t k = 0; k < 32; ++k) {
        CHECK(std::abs(parts.even[k] - std::cos(g.nodes[k])) <= 1e-15);
        CHECK(std::abs(parts.odd[k] - I * std::sin(g.nodes[k])) <= 1e-15);
        CHECK(std::abs(parts.even[k] + parts.odd[k] - wave[k]) <= 1e-15);
    }

    ComplexVector evenwave(32);
    for (std::size_t k = 0; k < 32; ++k) evenwave[k] = std::cos(2.0 * g.nodes[k]);
    const auto pure = split_even_odd(evenwave, g);
    CHECK(max_abs_diff(pure.even, evenwave) <= 1e-14);
    for (const auto& v : pure.odd) CHECK(std::abs(v) <= 1e-14);

    CHECK_THROWS_AS(split_even_odd(ComplexVector(31, 0.0), g), NumericsError);
}

TEST_CASE("half-domain maps preserve the weighted norm") {
    const Grid circle = make_circle_grid(64);
    const Grid interval = matched_interval_grid(circle);
    CHECK(interval.h == doctest::Approx(circle.h).epsilon(1e-15));

    const auto parts = split_even_odd(random_state(64, 11), circle);

    const auto even_image = u_plus(parts.even, circle);
    CHECK(std::abs(weighted_norm(interval, even_image) - weighted_norm(circle, parts.even)) <= 1e-10);
    CHECK(max_abs_diff(u_plus_adjoint(even_image, circle), parts.even) <= 1e-12);

    const auto odd_image = u_minus(parts.odd, circle);
    CHECK(std::abs(weighted_norm(interval, odd_image) - weighted_norm(circle, parts.odd)) <= 1e-10);
    CHECK(max_abs_diff(u_minus_adjoint(odd_image, circle), parts.odd) <= 1e-12);
}

TEST_CASE("half-domain maps on trigonometric states") {
    const Grid circle = make_circle_grid(48);
    const Grid interval = matched_interval_grid(circle);
    const double root2 = std::sqrt(2.0);

    // flat normalized state keeps unit norm on the half domain
    const double flat = 1.0 / std::sqrt(2.0 * M_PI);
    const auto flat_image = u_plus(ComplexVector(48, flat), circle);
    CHECK(weighted_norm(interval, flat_image) == doctest::Approx(1.0).epsilon(1e-12));

    ComplexVector cosine(48);
    for (std::size_t k = 0; k < 48; ++k) cosine[k] = std::cos(3.0 * circle.nodes[k]);
    const auto cos_image = u_plus(cosine, circle);
    for (std::size_t k = 0; k < cos_image.size(); ++k)
        CHECK(std::abs(cos_image[k] - root2 * std::cos(3.0 * interval.nodes[k])) <= 1e-13);

    ComplexVector sine(48);
    for (std::size_t k = 0; k < 48; ++k) sine[k] = std::sin(2.0 * circle.nodes[k]);
    const auto sin_image = u_minus(sine, circle);
    for (std::size_t k = 0; k < sin_image.size(); ++k)
        CHECK(std::abs(sin_image[k] - root2 * std::sin(2.0 * interval.nodes[k])) <= 1e-13);

    // adjoint of the odd map carries the antisymmetric sign convention
    const auto rebuilt = u_minus_adjoint(sin_image, circle);
    const auto perm = parity_permutation(circle);
    for (std::size_t k = 0; k < 48; ++k)
        CHECK(std::abs(rebuilt[perm[k]] + rebuilt[k]) <= 1e-13);

    CHECK_THROWS_WITH_AS(u_minus(cosine, circle), doctest::Contains("asymmetry"), NumericsError);
    CHECK_THROWS_AS(u_plus(sine, circle), NumericsError);
}

TEST_CASE("parity sector data is consistent") {
    const Grid circle = make_circle_grid(24);
    for (int sign : {+1, -1}) {
        const auto sector = parity_sector(circle, sign);
        const auto twice = sector.projector.multiply(sector.projector);
        double worst = 0.0;
        for (std::size_t k = 0; k < twice.data.size(); ++k)
            worst = std::max(worst, std::abs(twice.data[k] - sector.projector.data[k]));
        CHECK(worst <= 1e-12);
        CHECK(row_orthonormality_error(sector.isometry) <= 1e-10);
    }
    CHECK_THROWS_AS(parity_sector(circle, 2), NumericsError);
}

TEST_CASE("reduced circle laplacian equals the interval builders entrywise") {
    const PhysicalConstants c;
    for (std::size_t segments : {64u, 256u}) {
        const Grid circle = make_circle_grid(2 * segments);
        const Grid interval = matched_interval_grid(circle);
        const auto h = build_circle_laplacian(circle, c);

        const auto neumann = reduce_hamiltonian(h, circle, +1);
        CHECK(max_entry_diff(neumann, build_interval_hamiltonian(interval, BoundarySpec::neumann(), c)) <=
              1e-10);

        const auto dirichlet = reduce_hamiltonian(h, circle, -1);
        CHECK(max_entry_diff(dirichlet,
                             build_interval_hamiltonian(interval, BoundarySpec::dirichlet(), c)) <= 1e-10);
    }
}

TEST_CASE("sector spectra merge into the circle spectrum") {
    const PhysicalConstants c;
    for (std::size_t n : {8u, 12u, 20u, 64u, 1024u}) {
        const Grid circle = make_circle_grid(n);
        const auto h = build_circle_laplacian(circle, c);
        auto circle_levels = hermitian_eigenvalues(h);

        auto merged = hermitian_eigenvalues(reduce_hamiltonian(h, circle, +1));
        const auto odd_levels = hermitian_eigenvalues(reduce_hamiltonian(h, circle, -1));
        merged.insert(merged.end(), odd_levels.begin(), odd_levels.end());
        std::sort(merged.begin(), merged.end());

        REQUIRE(merged.size() == circle_levels.size());
        for (std::size_t k = 0; k < merged.size(); ++k)
            CHECK(std::abs(merged[k] - circle_levels[k]) <= 1e-10);
    }
}

TEST_CASE("mapping commutes with the dynamics") {
    const PhysicalConstants c;
    const Grid circle = make_circle_grid(64);
    const Grid interval = matched_interval_grid(circle);
    const auto h = build_circle_laplacian(circle, c);
    const auto neumann = reduce_hamiltonian(h, circle, +1);

    const auto even = split_even_odd(random_state(64, 21), circle).even;
    const double t = 0.37;

    // circle samples are operator coordinates already
    const auto evolved_then_mapped = u_plus(evolve_coords(h, even, t), circle);

    const auto mapped = to_operator_coords(interval, u_plus(even, circle));
    const auto mapped_then_evolved = to_samples(interval, evolve_coords(neumann, mapped, t));

    CHECK(max_abs_diff(evolved_then_mapped, mapped_then_evolved) <= 1e-8);
}

TEST_CASE("momentum admits no half-domain projection") {
    const PhysicalConstants c;
    const Grid circle = make_circle_grid(32);
    const auto p = build_circle_momentum(circle, c);
    CHECK_THROWS_WITH_AS(reduce_hamiltonian(p, circle, +1), doctest::Contains("commute"),
                         NumericsError);
    CHECK_THROWS_AS(reduce_hamiltonian(p, circle, -1), NumericsError);
}

TEST_CASE("spinor sectors split into swapped boundary blocks") {
    const PhysicalConstants c;
    const Grid circle = make_circle_grid(32);
    const Grid interval = matched_interval_grid(circle);
    const auto h = build_circle_laplacian(circle, c);
    const auto hh = doubled(h, h);
    const auto neumann = build_interval_hamiltonian(interval, BoundarySpec::neumann(), c);
    const auto dirichlet = build_interval_hamiltonian(interval, BoundarySpec::dirichlet(), c);

    const auto plus = reduce_spinor(hh, circle, +1);
    CHECK(max_entry_diff(plus.upper, neumann) <= 1e-10);
    CHECK(max_entry_diff(plus.lower, dirichlet) <= 1e-10);
    CHECK(plus.coupling_max <= 1e-12);

    const auto minus = reduce_spinor(hh, circle, -1);
    CHECK(max_entry_diff(minus.upper, dirichlet) <= 1e-10);
    CHECK(max_entry_diff(minus.lower, neumann) <= 1e-10);
    CHECK(minus.coupling_max <= 1e-12);

    // both sectors carry the same level multiset
    auto plus_levels = hermitian_eigenvalues(plus.upper);
    const auto plus_low = hermitian_eigenvalues(plus.lower);
    plus_levels.insert(plus_levels.end(), plus_low.begin(), plus_low.end());
    std::sort(plus_levels.begin(), plus_levels.end());
    auto minus_levels = hermitian_eigenvalues(minus.upper);
    const auto minus_low = hermitian_eigenvalues(minus.lower);
    minus_levels.insert(minus_levels.end(), minus_low.begin(), minus_low.end());
    std::sort(minus_levels.begin(), minus_levels.end());
    for (std::size_t k = 0; k < plus_levels.size(); ++k)
        CHECK(std::abs(plus_levels[k] - minus_levels[k]) <= 1e-10);

    // a tilted quantization axis reaches the same blocks for a scalar operator
    const double inv = 1.0 / std::sqrt(2.0);
    const auto tilted = reduce_spinor(hh, circle, +1, {inv, 0.0, inv});
    CHECK(max_entry_diff(tilted.upper, neumann) <= 1e-10);
    CHECK(max_entry_diff(tilted.lower, dirichlet) <= 1e-10);

    // spin blocks that disagree with the reflection are rejected
    const auto bad = doubled(h, build_circle_momentum(circle, c));
    CHECK_THROWS_WITH_AS(reduce_spinor(bad, circle, +1), doctest::Contains("commute"),
                         NumericsError);
}

}  // TEST_SUITE
