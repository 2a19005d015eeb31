#include "qbc/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qbc {

SpectrumOracle SpectrumOracle::circle_laplacian(std::size_t levels) {
    return {Family::CircleLaplacian, levels, 0.0, 0.0, 0.0};
}

SpectrumOracle SpectrumOracle::circle_momentum(std::size_t levels) {
    return {Family::CircleMomentum, levels, 0.0, 0.0, 0.0};
}

SpectrumOracle SpectrumOracle::dirichlet(std::size_t levels) {
    return {Family::Dirichlet, levels, 0.0, 0.0, 0.0};
}

SpectrumOracle SpectrumOracle::neumann(std::size_t levels) {
    return {Family::Neumann, levels, 0.0, 0.0, 0.0};
}

SpectrumOracle SpectrumOracle::robin(std::size_t levels, double mu0, double mupi) {
    return {Family::Robin, levels, mu0, mupi, 0.0};
}

SpectrumOracle SpectrumOracle::twisted(std::size_t levels, double alpha) {
    return {Family::Twisted, levels, 0.0, 0.0, alpha};
}

namespace {

double level_scale(const PhysicalConstants& c) { return c.hbar * c.hbar / (2.0 * c.mass); }

std::vector<double> neumann_levels(std::size_t levels, const PhysicalConstants& c) {
    std::vector<double> out;
    out.reserve(levels);
    for (std::size_t n = 0; n < levels; ++n)
        out.push_back(level_scale(c) * static_cast<double>(n) * static_cast<double>(n));
    return out;
}

// Both Robin endpoint conditions in one entire function of k. Zeros at k_m in
// (m-1, m) give eigenvalues k_m^2; the polynomial prefactors keep k = 0 and
// k^2 = mu0 mupi regular, unlike the tangent form.
double robin_secular(double k, double mu0, double mupi) {
    return (mu0 * mupi - k * k) * std::sin(k * M_PI) + k * (mu0 + mupi) * std::cos(k * M_PI);
}

std::vector<double> robin_levels(std::size_t levels, double mu0, double mupi,
                                 const PhysicalConstants& c) {
    if (!(mu0 >= 0.0) || !(mupi >= 0.0))
        throw NumericsError("robin oracle expects nonnegative boundary strengths");
    if (mu0 + mupi < 1e-14) return neumann_levels(levels, c);
    std::vector<double> out;
    out.reserve(levels);
    for (std::size_t m = 1; m <= levels; ++m) {
        double lo = static_cast<double>(m - 1);
        if (m == 1) lo = 1e-9;  // secular function is positive just above zero
        const double hi = static_cast<double>(m);
        const double k = bisection_root(
            [mu0, mupi](double x) { return robin_secular(x, mu0, mupi); }, lo, hi, 1e-13);
        out.push_back(level_scale(c) * k * k);
    }
    return out;
}

std::vector<double> twisted_formula(std::size_t levels, double alpha, const PhysicalConstants& c) {
    // k_n = 2n + alpha/pi, n ranging over the integers
    const double shift = alpha / M_PI;
    std::vector<double> out;
    const long reach = static_cast<long>(levels) + 2;
    for (long n = -reach; n <= reach; ++n) {
        const double k = 2.0 * static_cast<double>(n) + shift;
        out.push_back(level_scale(c) * k * k);
    }
    std::sort(out.begin(), out.end());
    out.resize(levels);
    return out;
}

void gate_twisted(double alpha, const PhysicalConstants& c) {
    // Cheap standing check before trusting the closed form: the first levels
    // must match a small dense matrix to within its own discretization error.
    const Grid g = make_interval_grid(64);
    const auto matrix_levels =
        hermitian_eigenvalues(build_interval_hamiltonian(g, BoundarySpec::twisted(alpha), c));
    const auto formula = twisted_formula(4, alpha, c);
    for (std::size_t i = 0; i < formula.size(); ++i) {
        const double denom = std::max(level_scale(c), std::abs(formula[i]));
        if (std::abs(matrix_levels[i] - formula[i]) > 2e-2 * denom) {
            std::ostringstream msg;
            msg << "twisted oracle failed dense validation at level " << i << ": formula "
                << formula[i] << " vs matrix " << matrix_levels[i];
            throw NumericsError(msg.str());
        }
    }
}

}  // namespace

std::vector<double> analytic_spectrum(const SpectrumOracle& o, const PhysicalConstants& c) {
    require_constants(c);
    switch (o.family) {
        case SpectrumOracle::Family::Neumann:
            return neumann_levels(o.levels, c);
        case SpectrumOracle::Family::Dirichlet: {
            std::vector<double> out;
            out.reserve(o.levels);
            for (std::size_t n = 1; n <= o.levels; ++n)
                out.push_back(level_scale(c) * static_cast<double>(n) * static_cast<double>(n));
            return out;
        }
        case SpectrumOracle::Family::CircleLaplacian: {
            std::vector<double> out;
            out.reserve(o.levels + 1);
            for (long n = 0; out.size() < o.levels; ++n) {
                const double e = level_scale(c) * static_cast<double>(n) * static_cast<double>(n);
                out.push_back(e);
                if (n > 0 && out.size() < o.levels) out.push_back(e);  // +-n degeneracy
            }
            return out;
        }
        case SpectrumOracle::Family::CircleMomentum: {
            std::vector<double> out;
            out.reserve(o.levels);
            if (o.levels == 0) return out;
            const long lo = -static_cast<long>((o.levels - 1) / 2);
            for (long n = lo; out.size() < o.levels; ++n)
                out.push_back(c.hbar * static_cast<double>(n));
            return out;
        }
        case SpectrumOracle::Family::Robin:
            return robin_levels(o.levels, o.mu0, o.mupi, c);
        case SpectrumOracle::Family::Twisted: {
            gate_twisted(o.alpha, c);
            return twisted_formula(o.levels, o.alpha, c);
        }
    }
    throw NumericsError("unknown spectrum family");
}

double gaussian_entropy(double t, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(t))
        throw NumericsError("gaussian_entropy expects sigma > 0 and finite t");
    const double overlap = std::exp(-(t * t) / (sigma * sigma));
    const auto term = [](double lambda) { return lambda > 0.0 ? -lambda * std::log(lambda) : 0.0; };
    return term(0.5 * (1.0 + overlap)) + term(0.5 * (1.0 - overlap));
}

namespace {

// Characteristic polynomial of a (scaled) matrix by the trace recursion:
// M_1 = A, c_1 = -tr M_1, M_{k+1} = A (M_k + c_k I), c_{k+1} = -tr(M_{k+1})/(k+1).
std::vector<double> characteristic_coefficients(const ComplexMatrix& a) {
    const std::size_t n = a.rows;
    std::vector<double> coeff(n + 1, 0.0);
    coeff[0] = 1.0;
    ComplexMatrix m = ComplexMatrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        if (k > 1) {
            for (std::size_t i = 0; i < n; ++i) m.at(i, i) += coeff[k - 1];
            m = a.multiply(m);
        } else {
            m = a;
        }
        std::complex<double> trace = 0.0;
        for (std::size_t i = 0; i < n; ++i) trace += m.at(i, i);
        coeff[k] = -trace.real() / static_cast<double>(k);
    }
    return coeff;  // monic, descending degree
}

double evaluate(const std::vector<double>& coeff, std::size_t degree, double x, double* derivative) {
    double p = coeff[0];
    double dp = 0.0;
    for (std::size_t i = 1; i <= degree; ++i) {
        dp = dp * x + p;
        p = p * x + coeff[i];
    }
    if (derivative) *derivative = dp;
    return p;
}

// Largest real root of an all-real-rooted monic polynomial: Newton iteration
// started above the Cauchy bound decreases monotonically onto it.
double newton_from_above(const std::vector<double>& coeff, std::size_t degree, double start) {
    double x = start;
    for (int iter = 0; iter < 300; ++iter) {
        double dp = 0.0;
        const double p = evaluate(coeff, degree, x, &dp);
        if (dp == 0.0) break;
        const double step = p / dp;
        x -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

}  // namespace

BruteForceReport brute_force_check(const HermitianOperator& op) {
    if (op.dim == 0 || op.dim > 12)
        throw NumericsError("brute_force_check handles dimensions 1 through 12");
    require_hermitian(op, Tolerances{});
    const std::size_t n = op.dim;
    const double scale = std::max(1.0, op.max_abs());

    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a.at(i, j) = op.at(i, j) / scale;

    const auto coeff = characteristic_coefficients(a);
    double bound = 0.0;
    for (std::size_t i = 1; i <= n; ++i) bound = std::max(bound, std::abs(coeff[i]));
    bound += 1.1;  // strictly above every root of the monic polynomial

    std::vector<double> deflated = coeff;
    std::vector<double> roots;
    roots.reserve(n);
    for (std::size_t degree = n; degree >= 1; --degree) {
        double r = newton_from_above(deflated, degree, bound);
        r = newton_from_above(coeff, n, r + 1e-12);  // polish on the undeflated polynomial
        roots.push_back(r);
        for (std::size_t i = 1; i <= degree; ++i) deflated[i] += deflated[i - 1] * r;
        deflated.resize(degree);  // quotient coefficients, still monic
    }
    std::sort(roots.begin(), roots.end());
    for (double& r : roots) r *= scale;

    BruteForceReport report;
    report.reference = roots;
    const auto solver = hermitian_eigenvalues(op);
    for (std::size_t i = 0; i < n; ++i)
        report.max_deviation = std::max(report.max_deviation, std::abs(solver[i] - roots[i]));
    return report;
}

}  // namespace qbc
