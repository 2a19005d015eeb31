#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qbc/experiments.hpp"

using namespace qbc;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;
const PhysicalConstants kC{};

int failures = 0;

void report(int idx, const char* what, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %02d: %s%s%s\n", pass ? "PASS" : "FAIL", idx, what,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

double entry_diff(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim != b.dim) return 1e300;
    double worst = 0.0;
    for (std::size_t k = 0; k < a.entries.size(); ++k)
        worst = std::max(worst, std::abs(a.entries[k] - b.entries[k]));
    return worst;
}

double fitted_order(const std::vector<double>& eps, const std::vector<double>& errs) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double x = std::log(eps[i]);
        const double y = std::log(errs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---- criteria ----

void criterion_union() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto circle = make_circle_grid(512);
    const auto laplacian = build_circle_laplacian(circle, kC);
    const auto full = hermitian_eigenvalues(laplacian);
    const auto plus = hermitian_eigenvalues(reduce_hamiltonian(laplacian, circle, +1));
    const auto minus = hermitian_eigenvalues(reduce_hamiltonian(laplacian, circle, -1));
    std::vector<double> merged;
    merged.insert(merged.end(), plus.begin(), plus.end());
    merged.insert(merged.end(), minus.begin(), minus.end());
    std::sort(merged.begin(), merged.end());
    double worst = 1e300;
    if (merged.size() == full.size()) {
        worst = 0.0;
        for (std::size_t k = 0; k < full.size(); ++k)
            worst = std::max(worst, std::abs(merged[k] - full[k]));
    }
    const double elapsed = seconds_since(t0);
    report(1, "circle spectrum equals the merged half-domain spectra (N = 512)",
           worst <= 1e-10 && elapsed < 30.0,
           fmt("max level gap %.3g (bound 1e-10), %.1f s (bound 30 s)", worst, elapsed));
}

void criterion_block_identity() {
    double worst = 0.0;
    for (const std::size_t nodes : {std::size_t{64}, std::size_t{256}}) {
        const auto circle = make_circle_grid(nodes);
        const auto laplacian = build_circle_laplacian(circle, kC);
        const auto interval = matched_interval_grid(circle);
        const auto neumann = build_interval_hamiltonian(interval, BoundarySpec::neumann(), kC);
        const auto dirichlet = build_interval_hamiltonian(interval, BoundarySpec::dirichlet(), kC);
        worst = std::max(worst, entry_diff(reduce_hamiltonian(laplacian, circle, +1), neumann));
        worst = std::max(worst, entry_diff(reduce_hamiltonian(laplacian, circle, -1), dirichlet));
    }
    report(2, "parity reduction reproduces the interval builders entrywise (N = 64, 256)",
           worst <= 1e-10, fmt("max entry gap %.3g (bound 1e-10)", worst));
}

void criterion_spinor_blocks() {
    const auto circle = make_circle_grid(64);
    const auto laplacian = build_circle_laplacian(circle, kC);
    const std::size_t n = circle.n;
    HermitianOperator doubled(2 * n, "doubled laplacian");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            doubled.set(i, j, laplacian.at(i, j));
            doubled.set(n + i, n + j, laplacian.at(i, j));
        }
    const auto interval = matched_interval_grid(circle);
    const auto neumann = build_interval_hamiltonian(interval, BoundarySpec::neumann(), kC);
    const auto dirichlet = build_interval_hamiltonian(interval, BoundarySpec::dirichlet(), kC);
    const auto plus = reduce_spinor(doubled, circle, +1);
    const auto minus = reduce_spinor(doubled, circle, -1);
    double worst = std::max(plus.coupling_max, minus.coupling_max);
    worst = std::max(worst, entry_diff(plus.upper, neumann));
    worst = std::max(worst, entry_diff(plus.lower, dirichlet));
    worst = std::max(worst, entry_diff(minus.upper, dirichlet));
    worst = std::max(worst, entry_diff(minus.lower, neumann));
    report(3, "spinor parity sectors split into the expected boundary blocks", worst <= 1e-10,
           fmt("max entry gap %.3g (bound 1e-10)", worst));
}

void criterion_spectra() {
    bool pass = true;
    std::string detail;
    for (const bool dirichlet : {false, true}) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto g = make_interval_grid(2000);
        const auto bc = dirichlet ? BoundarySpec::dirichlet() : BoundarySpec::neumann();
        const auto numeric = hermitian_eigenvalues(build_interval_hamiltonian(g, bc, kC));
        double worst = 0.0;
        for (std::size_t k = 0; k < 10; ++k) {
            const double n = static_cast<double>(k) + (dirichlet ? 1.0 : 0.0);
            const double analytic = 0.5 * n * n;
            worst = std::max(worst, std::abs(numeric[k] - analytic) / std::max(1.0, analytic));
        }
        const double elapsed = seconds_since(t0);
        pass = pass && worst <= 1e-3 && elapsed < 120.0;
        detail += fmt(dirichlet ? "dirichlet rel %.3g, %.1f s" : "neumann rel %.3g, %.1f s; ",
                      worst, elapsed);
    }
    report(4, "first ten boundary levels match n^2/2 (N = 2000, bound 1e-3, 2 min each)", pass,
           detail);
}

void criterion_robin_boundary() {
    const std::vector<double> scan = {0.2, 0.1, 0.05, 0.025, 0.0125};
    std::vector<double> errs;
    for (const double eps : scan) {
        const auto d = make_feps(eps, 1.0 / (2.0 * eps));
        errs.push_back(std::abs(robin_params(d).nu0 - 1.0));
    }
    const double order = fitted_order(scan, errs);
    const bool order_ok = order >= 0.9 && order <= 1.1;

    const auto g = make_interval_grid(2000);
    const auto d = make_feps(0.1, 5.0);
    const auto params = robin_params(d);
    const auto free_op = build_interval_hamiltonian(g, BoundarySpec::neumann(), kC);
    const auto levels = hermitian_eigenvalues(free_op);
    double worst = 0.0;
    for (std::size_t k = 0; k < 5; ++k) {
        auto psi = to_samples(g, tridiagonal_eigenvector(free_op, levels[k]));
        const double nrm = weighted_norm(g, psi);
        for (auto& z : psi) z /= nrm;
        const auto phi = apply_uf(psi, d, g);
        const std::size_t m = g.n - 1;
        const Complex deriv0 = (-3.0 * phi[0] + 4.0 * phi[1] - phi[2]) / (2.0 * g.h);
        const Complex derivpi = (3.0 * phi[m] - 4.0 * phi[m - 1] + phi[m - 2]) / (2.0 * g.h);
        worst = std::max(worst, std::abs(deriv0 - params.nu0 * phi[0]));
        worst = std::max(worst, std::abs(derivpi + params.nupi * phi[m]));
    }
    const bool residual_ok = worst <= 5.0 * g.h;
    report(5, "wall steepening converges to the robin condition at first order",
           order_ok && residual_ok,
           fmt("nu0 order %.3f (bound 1.0 +- 0.1), boundary residual %.3g (bound %.3g)", order,
               worst, 5.0 * g.h));
}

void criterion_mass_ratio() {
    const double direct = std::pow(2.0 * kPi / (2.0 * kPi - 1.0), 2.0);
    const double ratio = renormalized_mass(1.0, kC) / kC.mass;
    const double gap = std::abs(ratio - direct);

    const auto g = make_interval_grid(800);
    const auto rep = limit_study(1.0, {0.2, 0.1, 0.05, 0.025, 0.0125}, LimitRegime::Robin, g, kC);
    bool decreasing = true;
    for (std::size_t k = 1; k < rep.bulk_residuals.size(); ++k)
        decreasing = decreasing && rep.bulk_residuals[k] < rep.bulk_residuals[k - 1];
    report(6, "renormalized mass matches the closed form and residuals shrink monotonically",
           gap <= 1e-10 && decreasing,
           fmt("mass-ratio gap %.3g (bound 1e-10), residuals ", gap) +
               (decreasing ? "strictly decreasing" : "NOT monotone"));
}

void criterion_deformed_spectrum() {
    bool pass = true;
    std::string detail;
    const std::pair<double, double> cases[] = {{0.1, 5.0}, {0.05, 10.0}};
    for (const auto& [eps, wall] : cases) {
        const auto g = make_interval_grid(2000);
        const auto ops = build_deformed(make_feps(eps, wall), g, kC);
        const auto numeric = hermitian_eigenvalues(ops.h_f);
        double worst = 0.0;
        for (std::size_t k = 0; k < 5; ++k) {
            const double analytic = 0.5 * static_cast<double>(k * k);
            worst = std::max(worst, std::abs(numeric[k] - analytic) / std::max(1.0, analytic));
        }
        pass = pass && worst <= 1e-3;
        detail += fmt("eps %.3g rel %.3g; ", eps, worst);
    }
    report(7, "deformed hamiltonians stay spectrally flat (first 5 levels, N = 2000)", pass,
           detail + "bound 1e-3");
}

void criterion_fold_roundtrip() {
    std::mt19937 rng(424242u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double worst = 0.0;
    for (const std::size_t nodes : {std::size_t{64}, std::size_t{256}}) {
        const auto circle = make_circle_grid(nodes);
        const auto map = fold_index_map(circle);
        for (int trial = 0; trial < 100; ++trial) {
            ComplexVector psi(circle.n);
            for (auto& z : psi) z = Complex(dist(rng), dist(rng));
            const double nrm = weighted_norm(circle, psi);
            for (auto& z : psi) z /= nrm;
            const auto s = fold(psi, circle);
            worst = std::max(worst, std::abs(spinor_norm(s, map.folded) - 1.0));
            const auto back = unfold(s, circle);
            for (std::size_t j = 0; j < psi.size(); ++j)
                worst = std::max(worst, std::abs(back[j] - psi[j]));
        }
    }
    report(8, "folding round-trips and preserves norms (100 states, N = 64, 256)",
           worst <= 1e-12, fmt("max deviation %.3g (bound 1e-12)", worst));
}

void criterion_dirac() {
    const auto circle = make_circle_grid(64);
    const auto folded = make_interval_grid(32);
    const auto dirac = build_dirac(circle, folded, kC);
    const auto eig = hermitian_eigen(dirac);
    double level_gap = 0.0;
    for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k)
        level_gap = std::max(level_gap,
                             std::abs(eig.eigenvalues[k] - (static_cast<double>(k) - 31.0)));
    double joint_gap = 0.0;
    for (const auto& v : eig.eigenvectors) {
        const auto s = spinor_from_dirac_coords(v, circle);
        joint_gap = std::max(joint_gap, std::abs(s.phi_plus.front() - s.phi_minus.front()));
        joint_gap = std::max(joint_gap, std::abs(s.phi_plus.back() - s.phi_minus.back()));
    }
    report(9, "folded dirac operator carries the integer circle momenta (N = 64)",
           level_gap <= 1e-10 && joint_gap <= 1e-8,
           fmt("max level gap %.3g (bound 1e-10), max joint mismatch %.3g (bound 1e-8)",
               level_gap, joint_gap));
}

void criterion_entropy() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto line = make_line_grid(512, 20.0);
    const auto map = fold_index_map(line);
    const double sigma = 0.3;
    ComplexVector phi(map.folded.n);
    for (std::size_t j = 0; j < phi.size(); ++j) {
        const double u = (map.folded.nodes[j] - 2.0) / sigma;
        phi[j] = std::exp(-0.5 * u * u);
    }
    const double nrm = weighted_norm(map.folded, phi) * std::sqrt(2.0);
    for (auto& z : phi) z /= nrm;
    const SpinorState s0{phi, phi};

    double worst = 0.0, s_zero = 1e300, s_late = 1e300;
    for (const double t : {0.0, 0.15, 0.3, 0.6, 1.2}) {
        const auto st = evolve(s0, t, line, kC);
        const double entropy = entanglement_entropy(spin_density(st, map.folded));
        worst = std::max(worst, std::abs(entropy - gaussian_entropy(t, sigma)));
        if (t == 0.0) s_zero = entropy;
        if (t == 1.2) s_late = entropy;
    }
    const double elapsed = seconds_since(t0);
    const bool pass = worst <= 1e-3 && s_zero <= 1e-10 &&
                      std::abs(s_late - std::log(2.0)) <= 1e-3 && elapsed < 60.0;
    report(10, "branch separation follows the gaussian overlap entropy (L = 20)", pass,
           fmt("max closed-form gap %.3g (bound 1e-3), S(0) %.3g, ln2 gap %.3g", worst, s_zero,
               std::abs(s_late - std::log(2.0))) +
               fmt(", %.1f s (bound 60 s)", elapsed));
}

void criterion_rejections() {
    const auto circle = make_circle_grid(64);
    bool momentum_rejected = false;
    try {
        reduce_hamiltonian(build_circle_momentum(circle, kC), circle, +1);
    } catch (const NumericsError&) {
        momentum_rejected = true;
    }
    ConnectionSpec odd, even;
    for (const double x : circle.nodes) {
        odd.alpha_samples.push_back(std::sin(x));
        even.alpha_samples.push_back(std::cos(x));
    }
    const bool odd_ok = check_connection_projectable(odd, circle).projectable;
    const bool even_rejected = !check_connection_projectable(even, circle).projectable;
    report(11, "non-symmetric operators and non-odd connections are turned away",
           momentum_rejected && odd_ok && even_rejected,
           std::string("momentum ") + (momentum_rejected ? "rejected" : "ACCEPTED") +
               ", sin(x) " + (odd_ok ? "projectable" : "REJECTED") + ", cos(x) " +
               (even_rejected ? "rejected" : "ACCEPTED"));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return "<unreadable " + p.string() + ">";
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void criterion_determinism(const char* binary) {
    const fs::path work = fs::temp_directory_path() / "qbc_acceptance_verify";
    fs::remove_all(work);
    fs::create_directories(work);
    const fs::path cfg = work / "config.json";
    std::ofstream(cfg) << "{\"command\": \"verify\"}\n";

    bool ran = true;
    for (const char* sub : {"a", "b"}) {
        const std::string cmd = std::string("\"") + binary + "\" --config \"" + cfg.string() +
                                "\" --out \"" + (work / sub).string() + "\" > /dev/null";
        ran = ran && std::system(cmd.c_str()) == 0;
    }
    bool identical = false;
    if (ran) {
        identical = slurp(work / "a" / "verify.csv") == slurp(work / "b" / "verify.csv") &&
                    slurp(work / "a" / "meta.json") == slurp(work / "b" / "meta.json");
    }
    fs::remove_all(work);
    report(12, "repeated verify runs emit byte-identical result files", ran && identical,
           ran ? (identical ? "verify.csv and meta.json match" : "outputs DIFFER")
               : "verify run failed");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-qbc-binary>\n", argv[0]);
        return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    try {
        criterion_union();
        criterion_block_identity();
        criterion_spinor_blocks();
        criterion_spectra();
        criterion_robin_boundary();
        criterion_mass_ratio();
        criterion_deformed_spectrum();
        criterion_fold_roundtrip();
        criterion_dirac();
        criterion_entropy();
        criterion_rejections();
        criterion_determinism(argv[1]);
    } catch (const std::exception& e) {
        std::printf("[FAIL] unexpected exception: %s\n", e.what());
        ++failures;
    }
    std::printf("%d/12 criteria passed in %.1f s\n", 12 - failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
