#pragma once

#include "qbc/numerics.hpp"

namespace qbc {

enum class GridKind { Circle, Interval, TruncatedLine };

// Uniform sampling grid. Circle: nodes at -pi + k h covering [-pi, pi) with
// the identification x = +-pi at node 0. Interval: segments+1 nodes including
// both ends. TruncatedLine: symmetric [-L, L] with a node at 0.
struct Grid {
    GridKind kind = GridKind::Interval;
    std::size_t n = 0;   // nodes carried by state vectors
    double h = 0.0;
    double length = 0.0; // circumference, interval length, or 2L
    std::vector<double> nodes;
};

Grid make_circle_grid(std::size_t nodes);  // nodes even, >= 4
Grid make_interval_grid(std::size_t segments, double length = 3.14159265358979323846);
Grid make_line_grid(std::size_t half_segments, double half_length);

// Circle weights are uniform; interval and line use the trapezoid rule.
std::vector<double> quadrature_weights(const Grid& g);

// Node index of the reflected point -x. Circle reflects modulo the
// identification; the truncated line reverses. Not defined for intervals.
std::vector<std::size_t> parity_permutation(const Grid& g);

Complex weighted_inner(const Grid& g, const ComplexVector& a, const ComplexVector& b);
double weighted_norm(const Grid& g, const ComplexVector& a);

// Hermitian matrices act on weighted coordinates c_k = sqrt(w_k / h) f_k so
// that half-weight endpoints stay symmetric. On the circle both pictures
// coincide.
ComplexVector to_operator_coords(const Grid& g, const ComplexVector& samples);
ComplexVector to_samples(const Grid& g, const ComplexVector& coords);

// Two-sheet covering of the half domain. plus_source[j] / minus_source[j] are
// the source nodes at +y_j / -y_j; fixed lists the targets where both agree
// (the fold points).
struct FoldIndexMap {
    Grid folded;
    std::vector<std::size_t> plus_source;
    std::vector<std::size_t> minus_source;
    std::vector<std::size_t> fixed;
};

FoldIndexMap fold_index_map(const Grid& g);  // circle or truncated line

}  // namespace qbc
