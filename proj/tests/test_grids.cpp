#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qbc/grids.hpp"

using namespace qbc;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("grids") {

TEST_CASE("circle grid covers [-pi, pi) with the origin on a node") {
    const Grid g = make_circle_grid(8);
    CHECK(g.n == 8);
    CHECK(g.h == doctest::Approx(kPi / 4.0));
    CHECK(g.nodes[0] == doctest::Approx(-kPi));
    CHECK(g.nodes[4] == doctest::Approx(0.0));
    CHECK(g.nodes[7] == doctest::Approx(3.0 * kPi / 4.0));
    const auto w = quadrature_weights(g);
    for (double wk : w) CHECK(wk == doctest::Approx(g.h));
    CHECK_THROWS_AS(make_circle_grid(7), NumericsError);
    CHECK_THROWS_AS(make_circle_grid(2), NumericsError);
}

TEST_CASE("interval grid is trapezoid weighted") {
    const Grid g = make_interval_grid(4);
    CHECK(g.n == 5);
    CHECK(g.nodes.front() == 0.0);
    CHECK(g.nodes.back() == doctest::Approx(kPi));
    const auto w = quadrature_weights(g);
    CHECK(w.front() == doctest::Approx(0.5 * g.h));
    CHECK(w[2] == doctest::Approx(g.h));
    CHECK(w.back() == doctest::Approx(0.5 * g.h));
    CHECK_THROWS_AS(make_interval_grid(1), NumericsError);
    CHECK_THROWS_AS(make_interval_grid(4, -1.0), NumericsError);
}

TEST_CASE("line grid is symmetric about a node at zero") {
    const Grid g = make_line_grid(3, 2.0);
    CHECK(g.n == 7);
    CHECK(g.nodes[0] == doctest::Approx(-2.0));
    CHECK(g.nodes[3] == 0.0);
    CHECK(g.nodes[6] == doctest::Approx(2.0));
    CHECK(g.h == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("reflection permutation fixes the symmetry axis") {
    const Grid c = make_circle_grid(8);
    const auto pc = parity_permutation(c);
    CHECK(pc[0] == 0);  // x = -pi is its own reflection on the circle
    CHECK(pc[4] == 4);
    CHECK(pc[1] == 7);
    CHECK(pc[3] == 5);
    const Grid l = make_line_grid(3, 1.0);
    const auto pl = parity_permutation(l);
    CHECK(pl[0] == 6);
    CHECK(pl[3] == 3);
    CHECK_THROWS_AS(parity_permutation(make_interval_grid(4)), NumericsError);
}

TEST_CASE("fourier modes are orthogonal in the circle inner product") {
    const Grid g = make_circle_grid(32);
    ComplexVector e1(g.n), e2(g.n);
    for (std::size_t k = 0; k < g.n; ++k) {
        e1[k] = std::exp(Complex(0.0, g.nodes[k]));
        e2[k] = std::exp(Complex(0.0, 2.0 * g.nodes[k]));
    }
    CHECK(std::abs(weighted_inner(g, e1, e1) - Complex(2.0 * kPi)) < 1e-13);
    CHECK(std::abs(weighted_inner(g, e1, e2)) < 1e-13);
    CHECK(weighted_norm(g, e1) == doctest::Approx(std::sqrt(2.0 * kPi)));
}

TEST_CASE("trapezoid rule integrates sin^2 exactly on the interval") {
    const Grid g = make_interval_grid(16);
    ComplexVector s(g.n);
    for (std::size_t j = 0; j < g.n; ++j) s[j] = std::sin(g.nodes[j]);
    CHECK(weighted_inner(g, s, s).real() == doctest::Approx(kPi / 2.0).epsilon(1e-14));
}

TEST_CASE("operator coordinates halve the endpoint weight") {
    const Grid g = make_interval_grid(4);
    ComplexVector f(g.n, 1.0);
    const auto c = to_operator_coords(g, f);
    CHECK(std::abs(c.front() - Complex(std::sqrt(0.5))) < 1e-15);
    CHECK(std::abs(c[1] - Complex(1.0)) < 1e-15);
    const auto back = to_samples(g, c);
    for (std::size_t j = 0; j < g.n; ++j) CHECK(std::abs(back[j] - f[j]) < 1e-15);
    // circle picture is untouched
    const Grid circ = make_circle_grid(8);
    ComplexVector fc(circ.n, Complex(0.3, -0.1));
    const auto cc = to_operator_coords(circ, fc);
    for (std::size_t j = 0; j < circ.n; ++j) CHECK(cc[j] == fc[j]);
}

TEST_CASE("fold map pairs mirror nodes and pins the fold points") {
    const auto map = fold_index_map(make_circle_grid(8));
    CHECK(map.folded.n == 5);
    CHECK(map.folded.length == doctest::Approx(kPi));
    CHECK(map.plus_source == std::vector<std::size_t>{4, 5, 6, 7, 0});
    CHECK(map.minus_source == std::vector<std::size_t>{4, 3, 2, 1, 0});
    CHECK(map.fixed == std::vector<std::size_t>{0, 4});

    const auto lm = fold_index_map(make_line_grid(3, 2.0));
    CHECK(lm.folded.n == 4);
    CHECK(lm.folded.length == doctest::Approx(2.0));
    CHECK(lm.plus_source == std::vector<std::size_t>{3, 4, 5, 6});
    CHECK(lm.minus_source == std::vector<std::size_t>{3, 2, 1, 0});
    CHECK(lm.fixed == std::vector<std::size_t>{0});
    CHECK_THROWS_AS(fold_index_map(make_interval_grid(4)), NumericsError);
}

}  // TEST_SUITE
