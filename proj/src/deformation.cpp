#include "qbc/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qbc {

namespace {

void require_interval(const Grid& g, const char* who) {
    if (g.kind != GridKind::Interval || std::abs(g.length - M_PI) > 1e-12) {
        std::ostringstream msg;
        msg << who << " needs the standard interval grid on [0, pi]";
        throw NumericsError(msg.str());
    }
}

double ramp_height(double epsilon, double a0, double a_pi) {
    return (M_PI - epsilon * 0.5 * (a0 + a_pi)) / (M_PI - epsilon);
}

}  // namespace

double MetricDeformation::f(double x) const {
    if (x < epsilon) return a0 + (l - a0) * (x / epsilon);
    if (x > M_PI - epsilon) return a_pi + (l - a_pi) * ((M_PI - x) / epsilon);
    return l;
}

double MetricDeformation::f_prime(double x) const {
    if (x < epsilon) return (l - a0) / epsilon;
    if (x > M_PI - epsilon) return (a_pi - l) / epsilon;
    return 0.0;
}

double MetricDeformation::F(double x) const {
    if (x <= epsilon) return a0 * x + (l - a0) * x * x / (2.0 * epsilon);
    if (x >= M_PI - epsilon) {
        const double u = M_PI - x;  // measured from the right end, so F(pi) = pi exactly
        return M_PI - (a_pi * u + (l - a_pi) * u * u / (2.0 * epsilon));
    }
    return epsilon * 0.5 * (a0 + l) + l * (x - epsilon);
}

double MetricDeformation::F_inverse(double y) const {
    const double y_left = epsilon * 0.5 * (a0 + l);
    const double y_right = M_PI - epsilon * 0.5 * (l + a_pi);
    if (y <= y_left) {
        // a0 x + c x^2 = y, rationalized root stays stable for either ramp sign
        const double c = (l - a0) / (2.0 * epsilon);
        return 2.0 * y / (a0 + std::sqrt(a0 * a0 + 4.0 * c * y));
    }
    if (y >= y_right) {
        const double d = (l - a_pi) / (2.0 * epsilon);
        const double delta = M_PI - y;
        const double u = 2.0 * delta / (a_pi + std::sqrt(a_pi * a_pi + 4.0 * d * delta));
        return M_PI - u;
    }
    return epsilon + (y - y_left) / l;
}

double MetricDeformation::g_prime(double y) const {
    const double x = F_inverse(y);
    return f_prime(x) / f(x);
}

MetricDeformation make_feps(double epsilon, double a) { return make_feps(epsilon, a, a); }

MetricDeformation make_feps(double epsilon, double a0, double a_pi) {
    if (!std::isfinite(epsilon) || !(epsilon > 0.0) || !(epsilon < M_PI / 2.0))
        throw NumericsError("make_feps: epsilon must lie in (0, pi/2)");
    if (!std::isfinite(a0) || !(a0 > 0.0) || !std::isfinite(a_pi) || !(a_pi > 0.0))
        throw NumericsError("make_feps: wall values must be positive");
    const double l = ramp_height(epsilon, a0, a_pi);
    if (!(l > 0.0)) {
        std::ostringstream msg;
        msg << "make_feps: wall area leaves no room for a positive middle height (l = " << l << ")";
        throw NumericsError(msg.str());
    }
    MetricDeformation d;
    d.epsilon = epsilon;
    d.a0 = a0;
    d.a_pi = a_pi;
    d.l = l;
    return d;
}

RobinParams robin_params(const MetricDeformation& d) {
    RobinParams p;
    p.nu0 = -d.f_prime(0.0) / (2.0 * d.f(0.0) * d.f(0.0));
    p.nupi = d.f_prime(M_PI) / (2.0 * d.f(M_PI) * d.f(M_PI));
    return p;
}

ComplexVector apply_uf(const ComplexVector& psi, const MetricDeformation& d, const Grid& g) {
    require_interval(g, "apply_uf");
    if (psi.size() != g.n) throw NumericsError("apply_uf: state size does not match the grid");
    if (g.n < 4) throw NumericsError("apply_uf: cubic interpolation needs at least four nodes");
    const std::size_t m = g.n - 1;
    ComplexVector phi(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
        const double x = d.F_inverse(g.nodes[j]);
        // cubic interpolation on the four nearest source nodes
        std::size_t cell = static_cast<std::size_t>(std::floor(x / g.h));
        cell = std::min(cell, m - 1);
        const std::size_t base = std::min(std::max<std::size_t>(cell, 1) - 1, m - 3);
        const double t = (x - g.nodes[base]) / g.h;
        Complex acc = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            double w = 1.0;
            for (std::size_t k = 0; k < 4; ++k) {
                if (k == i) continue;
                w *= (t - static_cast<double>(k)) /
                     (static_cast<double>(i) - static_cast<double>(k));
            }
            acc += w * psi[base + i];
        }
        phi[j] = acc / std::sqrt(d.f(x));
    }
    return phi;
}

DeformedOperators build_deformed(const MetricDeformation& d, const Grid& g,
                                 const PhysicalConstants& c) {
    require_interval(g, "build_deformed");
    require_constants(c);
    const std::size_t m = g.n - 1;
    const double h = g.h;
    const double sc = c.hbar * c.hbar / (2.0 * c.mass);

    std::vector<double> xt(m + 1), fx(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
        xt[j] = d.F_inverse(g.nodes[j]);
        fx[j] = d.f(xt[j]);
    }
    std::vector<double> dx(m);
    for (std::size_t j = 0; j < m; ++j) {
        dx[j] = xt[j + 1] - xt[j];
        if (!(dx[j] > 0.0)) throw NumericsError("build_deformed: coordinate map not increasing");
    }

    // stiffness of the flat operator on the pulled-back nodes, written in the
    // stretched-picture variables, against the trapezoid mass of this grid
    const auto wt = [m](std::size_t j) { return (j == 0 || j == m) ? 0.5 : 1.0; };
    DeformedOperators out;
    out.h_f = HermitianOperator(m + 1, "deformed hamiltonian");
    for (std::size_t j = 0; j <= m; ++j) {
        double diag = 0.0;
        if (j > 0) diag += sc * fx[j] / dx[j - 1];
        if (j < m) diag += sc * fx[j] / dx[j];
        out.h_f.set(j, j, diag / (h * wt(j)));
        if (j < m) {
            const double off = -sc * std::sqrt(fx[j] * fx[j + 1]) / dx[j];
            out.h_f.set(j, j + 1, off / (h * std::sqrt(wt(j) * wt(j + 1))));
        }
    }

    // first derivative rows (second order, one-sided at the ends), then the
    // anti-Hermitian part of metric * derivative gives the momentum exactly
    std::vector<double> deriv((m + 1) * (m + 1), 0.0);
    const double inv2h = 1.0 / (2.0 * h);
    deriv[0 * (m + 1) + 0] = -3.0 * inv2h;
    deriv[0 * (m + 1) + 1] = 4.0 * inv2h;
    deriv[0 * (m + 1) + 2] = -1.0 * inv2h;
    for (std::size_t j = 1; j < m; ++j) {
        deriv[j * (m + 1) + (j - 1)] = -inv2h;
        deriv[j * (m + 1) + (j + 1)] = inv2h;
    }
    deriv[m * (m + 1) + m] = 3.0 * inv2h;
    deriv[m * (m + 1) + (m - 1)] = -4.0 * inv2h;
    deriv[m * (m + 1) + (m - 2)] = 1.0 * inv2h;

    out.p_f = HermitianOperator(m + 1, "deformed momentum");
    for (std::size_t i = 0; i <= m; ++i)
        for (std::size_t j = i; j <= m; ++j) {
            const double aij = fx[i] * deriv[i * (m + 1) + j] * std::sqrt(wt(i) / wt(j));
            const double aji = fx[j] * deriv[j * (m + 1) + i] * std::sqrt(wt(j) / wt(i));
            const double anti = aij - aji;
            if (anti == 0.0) continue;
            out.p_f.set(i, j, Complex(0.0, -0.5 * c.hbar * anti));
        }

    out.metric = fx;
    out.v.resize(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
        const double fp = d.f_prime(xt[j]);
        const double gp = fp / fx[j];
        const double gpp = -fp * fp / (fx[j] * fx[j] * fx[j]);  // ramps are linear pieces
        out.v[j] = -(sc / 4.0) * (gp * gp + 2.0 * fx[j] * gpp);
    }
    return out;
}

double renormalized_mass(double mu0, const PhysicalConstants& c) {
    require_constants(c);
    if (!std::isfinite(mu0) || !(mu0 > 1.0 / (2.0 * M_PI)))
        throw NumericsError(
            "renormalized_mass: needs mu0 > 1/(2 pi), otherwise the flattened height degenerates");
    const double factor = 2.0 * mu0 * M_PI / (2.0 * mu0 * M_PI - 1.0);
    return c.mass * factor * factor;
}

double limit_test_bump(double y) {
    const double t = (y - M_PI / 4.0) / (M_PI / 2.0);
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double u = t * (1.0 - t);
    return u * u * u;
}

RobinLimitReport limit_study(double mu0, const std::vector<double>& epsilons, LimitRegime regime,
                             const Grid& g, const PhysicalConstants& c) {
    require_interval(g, "limit_study");
    require_constants(c);
    if (epsilons.empty()) throw NumericsError("limit_study: empty scan");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0) || !(epsilons[i] < M_PI / 2.0))
            throw NumericsError("limit_study: scan values must lie in (0, pi/2)");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
            throw NumericsError("limit_study: scan must be strictly descending");
    }
    if (regime == LimitRegime::Robin && !(mu0 > 0.0))
        throw NumericsError("limit_study: robin regime needs mu0 > 0");

    RobinLimitReport report;
    report.regime = regime;
    report.mu0 = mu0;
    report.epsilons = epsilons;

    const auto wall = [&](double eps) {
        switch (regime) {
            case LimitRegime::Robin: return 1.0 / (2.0 * mu0 * eps);
            case LimitRegime::Dirichlet: return 1.0 / std::sqrt(eps);
            case LimitRegime::Neumann: return 1.0 + eps * eps;
            case LimitRegime::Unphysical: return 1.0 / (eps * eps);
        }
        throw NumericsError("limit_study: unknown regime");
    };

    if (regime == LimitRegime::Unphysical) {
        report.unphysical = true;
        report.mass_ratio = 0.0;
        for (const double eps : epsilons) {
            const double a = wall(eps);
            const double l = ramp_height(eps, a, a);
            report.heights.push_back(l);
            report.nu0.push_back((a - l) / (2.0 * eps * a * a));
            report.nupi.push_back((a - l) / (2.0 * eps * a * a));
            report.bulk_residuals.push_back(0.0);
        }
        return report;
    }

    PhysicalConstants limit_constants = c;
    if (regime == LimitRegime::Robin) {
        limit_constants.mass = renormalized_mass(mu0, c);
        report.mass_ratio = limit_constants.mass / c.mass;
    } else {
        report.mass_ratio = 1.0;
    }
    const auto h_limit = build_interval_hamiltonian(g, BoundarySpec::neumann(), limit_constants);

    ComplexVector bump(g.nodes.size());
    for (std::size_t j = 0; j < bump.size(); ++j) bump[j] = limit_test_bump(g.nodes[j]);
    const ComplexVector probe = to_operator_coords(g, bump);
    double probe_norm = 0.0;
    for (const auto& v : probe) probe_norm += std::norm(v);
    probe_norm = std::sqrt(probe_norm);

    for (const double eps : epsilons) {
        const auto deformation = make_feps(eps, wall(eps));
        const auto params = robin_params(deformation);
        const auto ops = build_deformed(deformation, g, c);
        report.heights.push_back(deformation.l);
        report.nu0.push_back(params.nu0);
        report.nupi.push_back(params.nupi);

        const auto lhs = ops.h_f.apply(probe);
        const auto rhs = h_limit.apply(probe);
        double dev = 0.0;
        for (std::size_t k = 0; k < lhs.size(); ++k) dev += std::norm(lhs[k] - rhs[k]);
        report.bulk_residuals.push_back(std::sqrt(dev) / probe_norm);
    }
    return report;
}

}  // namespace qbc
