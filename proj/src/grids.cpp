#include "qbc/grids.hpp"

#include <cmath>
#include <numbers>

namespace qbc {

namespace {
constexpr double kPi = std::numbers::pi;
}

Grid make_circle_grid(std::size_t nodes) {
    if (nodes < 4 || nodes % 2 != 0)
        throw NumericsError("circle grid needs an even node count >= 4");
    Grid g;
    g.kind = GridKind::Circle;
    g.n = nodes;
    g.length = 2.0 * kPi;
    g.h = g.length / static_cast<double>(nodes);
    g.nodes.resize(nodes);
    for (std::size_t k = 0; k < nodes; ++k) g.nodes[k] = -kPi + static_cast<double>(k) * g.h;
    return g;
}

Grid make_interval_grid(std::size_t segments, double length) {
    if (segments < 2) throw NumericsError("interval grid needs at least 2 segments");
    if (!(length > 0.0)) throw NumericsError("interval length must be positive");
    Grid g;
    g.kind = GridKind::Interval;
    g.n = segments + 1;
    g.length = length;
    g.h = length / static_cast<double>(segments);
    g.nodes.resize(g.n);
    for (std::size_t j = 0; j < g.n; ++j) g.nodes[j] = static_cast<double>(j) * g.h;
    g.nodes.back() = length;
    return g;
}

Grid make_line_grid(std::size_t half_segments, double half_length) {
    if (half_segments < 2) throw NumericsError("line grid needs at least 2 segments per side");
    if (!(half_length > 0.0)) throw NumericsError("line half-length must be positive");
    Grid g;
    g.kind = GridKind::TruncatedLine;
    g.n = 2 * half_segments + 1;
    g.length = 2.0 * half_length;
    g.h = half_length / static_cast<double>(half_segments);
    g.nodes.resize(g.n);
    for (std::size_t j = 0; j < g.n; ++j)
        g.nodes[j] = -half_length + static_cast<double>(j) * g.h;
    g.nodes[half_segments] = 0.0;
    g.nodes.back() = half_length;
    return g;
}

std::vector<double> quadrature_weights(const Grid& g) {
    std::vector<double> w(g.n, g.h);
    if (g.kind != GridKind::Circle) {
        w.front() = 0.5 * g.h;
        w.back() = 0.5 * g.h;
    }
    return w;
}

std::vector<std::size_t> parity_permutation(const Grid& g) {
    std::vector<std::size_t> p(g.n);
    switch (g.kind) {
        case GridKind::Circle:
            for (std::size_t k = 0; k < g.n; ++k) p[k] = (g.n - k) % g.n;
            break;
        case GridKind::TruncatedLine:
            for (std::size_t k = 0; k < g.n; ++k) p[k] = g.n - 1 - k;
            break;
        case GridKind::Interval:
            throw NumericsError("reflection is not defined on the half domain");
    }
    return p;
}

Complex weighted_inner(const Grid& g, const ComplexVector& a, const ComplexVector& b) {
    if (a.size() != g.n || b.size() != g.n)
        throw NumericsError("state length does not match grid");
    const std::vector<double> w = quadrature_weights(g);
    Complex acc = 0.0;
    for (std::size_t k = 0; k < g.n; ++k) acc += w[k] * std::conj(a[k]) * b[k];
    return acc;
}

double weighted_norm(const Grid& g, const ComplexVector& a) {
    return std::sqrt(weighted_inner(g, a, a).real());
}

ComplexVector to_operator_coords(const Grid& g, const ComplexVector& samples) {
    if (samples.size() != g.n) throw NumericsError("state length does not match grid");
    ComplexVector c = samples;
    if (g.kind != GridKind::Circle) {
        const double r = std::sqrt(0.5);
        c.front() *= r;
        c.back() *= r;
    }
    return c;
}

ComplexVector to_samples(const Grid& g, const ComplexVector& coords) {
    if (coords.size() != g.n) throw NumericsError("state length does not match grid");
    ComplexVector f = coords;
    if (g.kind != GridKind::Circle) {
        const double r = std::sqrt(2.0);
        f.front() *= r;
        f.back() *= r;
    }
    return f;
}

FoldIndexMap fold_index_map(const Grid& g) {
    FoldIndexMap map;
    if (g.kind == GridKind::Circle) {
        const std::size_t m = g.n / 2;
        map.folded = make_interval_grid(m, kPi);
        map.plus_source.resize(m + 1);
        map.minus_source.resize(m + 1);
        for (std::size_t j = 0; j <= m; ++j) {
            map.plus_source[j] = (m + j) % g.n;  // x = +y_j, wraps at pi
            map.minus_source[j] = m - j;
        }
        map.fixed = {0, m};
    } else if (g.kind == GridKind::TruncatedLine) {
        const std::size_t m = (g.n - 1) / 2;
        map.folded = make_interval_grid(m, 0.5 * g.length);
        map.plus_source.resize(m + 1);
        map.minus_source.resize(m + 1);
        for (std::size_t j = 0; j <= m; ++j) {
            map.plus_source[j] = m + j;
            map.minus_source[j] = m - j;
        }
        map.fixed = {0};
    } else {
        throw NumericsError("folding starts from a circle or a truncated line");
    }
    return map;
}

}  // namespace qbc
