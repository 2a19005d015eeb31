#pragma once

#include "qbc/operators.hpp"

namespace qbc {

// Piecewise-linear conformal factor on [0, pi]: value a0 at 0, a_pi at pi,
// constant height l on the middle piece [eps, pi - eps], normalized so the
// primitive F maps [0, pi] onto itself. F and its inverse are closed-form
// per piece; no iterative inversion is involved.
struct MetricDeformation {
    double epsilon = 0.0;
    double a0 = 1.0;
    double a_pi = 1.0;
    double l = 1.0;

    double f(double x) const;
    double f_prime(double x) const;  // one-sided into the ramps at 0 and pi
    double F(double x) const;        // primitive with F(0) = 0, F(pi) = pi exact
    double F_inverse(double y) const;
    double g(double y) const { return f(F_inverse(y)); }
    double g_prime(double y) const;  // chain rule f'/f at the pulled-back point
};

MetricDeformation make_feps(double epsilon, double a);
MetricDeformation make_feps(double epsilon, double a0, double a_pi);

struct RobinParams {
    double nu0 = 0.0;
    double nupi = 0.0;
};

// Boundary parameters induced by the deformation:
// nu0 = -f'(0)/(2 f(0)^2), nupi = f'(pi)/(2 f(pi)^2).
RobinParams robin_params(const MetricDeformation& d);

// phi(y) = psi(F^{-1}(y)) / sqrt(g(y)), with psi read off the uniform grid by
// cubic interpolation. Both pictures live on the same node set.
ComplexVector apply_uf(const ComplexVector& psi, const MetricDeformation& d, const Grid& g);

struct DeformedOperators {
    HermitianOperator h_f;       // divergence-form assembly on pulled-back nodes
    HermitianOperator p_f;       // symmetrized g p - (i hbar/2) g'
    std::vector<double> v;       // transported potential samples, -(hbar^2/8m)(g'^2 + 2 g g'')
    std::vector<double> metric;  // g samples on the grid nodes
};

DeformedOperators build_deformed(const MetricDeformation& d, const Grid& g,
                                 const PhysicalConstants& c);

// Mass entering the flattened description of the squeezed-limit Hamiltonian,
// m (2 mu0 pi / (2 mu0 pi - 1))^2. Requires mu0 > 1/(2 pi).
double renormalized_mass(double mu0, const PhysicalConstants& c);

enum class LimitRegime { Robin, Dirichlet, Neumann, Unphysical };

struct RobinLimitReport {
    LimitRegime regime = LimitRegime::Robin;
    double mu0 = 0.0;
    std::vector<double> epsilons;        // descending scan
    std::vector<double> nu0;
    std::vector<double> nupi;
    std::vector<double> heights;         // l(eps); negative in the runaway regime
    std::vector<double> bulk_residuals;  // action residual against the limit operator
    double mass_ratio = 0.0;             // limiting M/m for the regime
    bool unphysical = false;
};

// Squeezing scan: per epsilon the wall speed a(epsilon) follows the regime
// (robin: 1/(2 mu0 eps); dirichlet: eps^{-1/2}; neumann: 1 + eps^2;
// runaway: eps^{-2}). Bulk residuals compare the deformed operator against
// the limiting free operator on a fixed interior bump. The runaway regime
// only reports the diverging height; nothing is assembled there.
RobinLimitReport limit_study(double mu0, const std::vector<double>& epsilons, LimitRegime regime,
                             const Grid& g, const PhysicalConstants& c);

// The interior test bump shared by the scan and its tests; C^2, supported in
// [pi/4, 3 pi/4].
double limit_test_bump(double y);

}  // namespace qbc
