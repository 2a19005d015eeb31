#include "qbc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "json.hpp"

namespace qbc {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kPi = 3.14159265358979323846;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t hash = 1469598103934665603ull;
    for (const unsigned char b : bytes) {
        hash ^= b;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const json& need(const json& j, const char* key, const char* where) {
    const auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(std::string(where) + " needs \"" + key + "\"");
    return *it;
}

std::string need_string(const json& j, const char* key, const char* where) {
    const json& v = need(j, key, where);
    if (!v.is_string()) throw ConfigError(std::string(where) + "." + key + " must be a string");
    return v.get<std::string>();
}

double need_number(const json& j, const char* key, const char* where) {
    const json& v = need(j, key, where);
    if (!v.is_number()) throw ConfigError(std::string(where) + "." + key + " must be a number");
    return v.get<double>();
}

std::size_t need_count(const json& j, const char* key, const char* where) {
    const json& v = need(j, key, where);
    if (!v.is_number_integer() || v.get<long long>() <= 0)
        throw ConfigError(std::string(where) + "." + key + " must be a positive integer");
    return static_cast<std::size_t>(v.get<long long>());
}

std::vector<double> need_numbers(const json& j, const char* key, const char* where) {
    const json& v = need(j, key, where);
    if (!v.is_array() || v.empty())
        throw ConfigError(std::string(where) + "." + key + " must be a nonempty array");
    std::vector<double> values;
    for (const auto& entry : v) {
        if (!entry.is_number())
            throw ConfigError(std::string(where) + "." + key + " must hold numbers");
        values.push_back(entry.get<double>());
    }
    return values;
}

class CsvFile {
  public:
    CsvFile(const fs::path& path, const std::string& header) : stream_(path) {
        if (!stream_) throw ConfigError("cannot open " + path.string() + " for writing");
        stream_ << header << '\n';
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) stream_ << ',';
            stream_ << cells[i];
        }
        stream_ << '\n';
    }

  private:
    std::ofstream stream_;
};

Grid grid_from(const json& cfg) {
    const json& g = need(cfg, "grid", "config");
    if (!g.is_object()) throw ConfigError("config.grid must be an object");
    const std::string kind = need_string(g, "kind", "grid");
    if (kind == "circle") return make_circle_grid(need_count(g, "nodes", "grid"));
    if (kind == "interval")
        return make_interval_grid(need_count(g, "segments", "grid"), g.value("length", kPi));
    if (kind == "line")
        return make_line_grid(need_count(g, "half_segments", "grid"),
                              need_number(g, "half_length", "grid"));
    throw ConfigError("grid.kind must be circle, interval, or line");
}

PhysicalConstants constants_from(const json& cfg) {
    PhysicalConstants c;
    if (cfg.contains("constants")) {
        const json& j = cfg["constants"];
        if (!j.is_object()) throw ConfigError("config.constants must be an object");
        c.hbar = j.value("hbar", 1.0);
        c.mass = j.value("mass", 1.0);
    }
    return c;
}

Tolerances tolerances_from(const json& cfg) {
    Tolerances tol;
    if (cfg.contains("tolerances")) {
        const json& j = cfg["tolerances"];
        if (!j.is_object()) throw ConfigError("config.tolerances must be an object");
        tol.hermiticity = j.value("hermiticity", tol.hermiticity);
        tol.orthonormality = j.value("orthonormality", tol.orthonormality);
        tol.residual = j.value("residual", tol.residual);
        tol.unitarity = j.value("unitarity", tol.unitarity);
        tol.commutator = j.value("commutator", tol.commutator);
        tol.sector = j.value("sector", tol.sector);
    }
    return tol;
}

std::size_t worker_cap() {
    if (const char* env = std::getenv("QBC_WORKERS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed >= 1) return static_cast<std::size_t>(parsed);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

ComplexVector normalized_gaussian(const Grid& g, double center, double sigma) {
    ComplexVector v(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double u = (g.nodes[j] - center) / sigma;
        v[j] = std::exp(-0.5 * u * u);
    }
    const double nrm = weighted_norm(g, v);
    if (nrm <= 0.0) throw ConfigError("gaussian profile vanished on the grid");
    for (auto& z : v) z /= nrm;
    return v;
}

ComplexVector seeded_state(const Grid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ComplexVector v(g.n);
    for (auto& z : v) z = Complex(dist(rng), dist(rng));
    const double nrm = weighted_norm(g, v);
    for (auto& z : v) z /= nrm;
    return v;
}

// ---- spectrum ----

int cmd_spectrum(const json& cfg, const Tolerances& tol, const PhysicalConstants& c,
                 const fs::path& dir, json& meta) {
    const Grid g = grid_from(cfg);
    const json& b = need(cfg, "boundary", "config");
    const std::string family = need_string(b, "family", "boundary");
    const std::size_t levels = cfg.contains("levels") ? need_count(cfg, "levels", "config") : 10;

    SpectrumOracle oracle;
    std::vector<double> numeric;
    if (family == "circle-laplacian" || family == "circle-momentum") {
        if (g.kind != GridKind::Circle)
            throw ConfigError("family " + family + " needs a circle grid");
        if (family == "circle-laplacian") {
            oracle = SpectrumOracle::circle_laplacian(levels);
            numeric = hermitian_eigenvalues(build_circle_laplacian(g, c), tol);
            if (levels > numeric.size()) throw ConfigError("levels exceeds the matrix dimension");
            numeric.resize(levels);
        } else {
            oracle = SpectrumOracle::circle_momentum(levels);
            const auto all = hermitian_eigenvalues(build_circle_momentum(g, c), tol);
            const long lo = -static_cast<long>((levels - 1) / 2);
            const long start = lo + static_cast<long>(g.n) / 2 - 1;
            if (start < 0 || static_cast<std::size_t>(start) + levels > all.size())
                throw ConfigError("levels exceeds the resolved momentum window");
            numeric.assign(all.begin() + start, all.begin() + start + static_cast<long>(levels));
        }
    } else {
        if (g.kind != GridKind::Interval)
            throw ConfigError("family " + family + " needs an interval grid");
        BoundarySpec bc;
        if (family == "dirichlet") {
            bc = BoundarySpec::dirichlet();
            oracle = SpectrumOracle::dirichlet(levels);
        } else if (family == "neumann") {
            bc = BoundarySpec::neumann();
            oracle = SpectrumOracle::neumann(levels);
        } else if (family == "robin") {
            const double mu0 = need_number(b, "mu0", "boundary");
            const double mupi = b.value("mupi", mu0);
            bc = BoundarySpec::robin(mu0, mupi);
            oracle = SpectrumOracle::robin(levels, mu0, mupi);
        } else if (family == "twisted") {
            const double alpha = need_number(b, "alpha", "boundary");
            bc = BoundarySpec::twisted(alpha);
            oracle = SpectrumOracle::twisted(levels, alpha);
        } else {
            throw ConfigError("unknown boundary.family " + family);
        }
        numeric = hermitian_eigenvalues(build_interval_hamiltonian(g, bc, c), tol);
        if (levels > numeric.size()) throw ConfigError("levels exceeds the matrix dimension");
        numeric.resize(levels);
    }

    const auto analytic = analytic_spectrum(oracle, c);
    CsvFile csv(dir / "spectrum.csv", "index,numeric,analytic,abs_error");
    double worst = 0.0;
    for (std::size_t k = 0; k < levels; ++k) {
        const double err = std::abs(numeric[k] - analytic[k]);
        worst = std::max(worst, err);
        csv.row({std::to_string(k), g17(numeric[k]), g17(analytic[k]), g17(err)});
    }
    meta["family"] = family;
    meta["max_abs_error"] = worst;
    return 0;
}

// ---- reduce ----

int cmd_reduce(const json& cfg, const Tolerances& tol, const PhysicalConstants& c,
               const fs::path& dir, json& meta) {
    const Grid g = grid_from(cfg);
    if (g.kind != GridKind::Circle) throw ConfigError("reduce needs a circle grid");

    const auto laplacian = build_circle_laplacian(g, c);
    const auto circle_levels = hermitian_eigenvalues(laplacian, tol);
    const auto plus = hermitian_eigenvalues(reduce_hamiltonian(laplacian, g, +1, tol), tol);
    const auto minus = hermitian_eigenvalues(reduce_hamiltonian(laplacian, g, -1, tol), tol);

    std::vector<std::pair<double, const char*>> merged;
    for (const double v : plus) merged.emplace_back(v, "neumann");
    for (const double v : minus) merged.emplace_back(v, "dirichlet");
    std::stable_sort(merged.begin(), merged.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    CsvFile csv(dir / "reduce.csv", "index,family,reduced,circle,abs_error");
    double residual = 0.0;
    for (std::size_t k = 0; k < merged.size(); ++k) {
        const double err = std::abs(merged[k].first - circle_levels[k]);
        residual = std::max(residual, err);
        csv.row({std::to_string(k), merged[k].second, g17(merged[k].first),
                 g17(circle_levels[k]), g17(err)});
    }
    meta["union_residual"] = residual;
    return 0;
}

// ---- deform ----

LimitRegime regime_from(const std::string& name) {
    if (name == "robin") return LimitRegime::Robin;
    if (name == "dirichlet") return LimitRegime::Dirichlet;
    if (name == "neumann") return LimitRegime::Neumann;
    if (name == "unphysical") return LimitRegime::Unphysical;
    throw ConfigError("deformation.regime must be robin, dirichlet, neumann, or unphysical");
}

int cmd_deform(const json& cfg, const Tolerances&, const PhysicalConstants& c,
               const fs::path& dir, json& meta) {
    const Grid g = grid_from(cfg);
    const json& d = need(cfg, "deformation", "config");
    const double mu0 = d.value("mu0", 1.0);
    const LimitRegime regime = regime_from(need_string(d, "regime", "deformation"));
    const auto epsilons = need_numbers(d, "epsilons", "deformation");

    const auto report = limit_study(mu0, epsilons, regime, g, c);

    CsvFile csv(dir / "deform.csv", "epsilon,nu0,nupi,bulk_residual,l,mass_ratio");
    for (std::size_t k = 0; k < report.epsilons.size(); ++k)
        csv.row({g17(report.epsilons[k]), g17(report.nu0[k]), g17(report.nupi[k]),
                 g17(report.bulk_residuals[k]), g17(report.heights[k]),
                 g17(report.mass_ratio)});
    meta["unphysical"] = report.unphysical;
    meta["mass_ratio"] = report.mass_ratio;
    return 0;
}

// ---- fold-evolve ----

int cmd_fold_evolve(const json& cfg, const Tolerances&, const PhysicalConstants& c,
                    const fs::path& dir, json& meta) {
    const Grid g = grid_from(cfg);
    if (g.kind != GridKind::TruncatedLine)
        throw ConfigError("fold-evolve needs a line grid");
    const json& e = need(cfg, "evolution", "config");
    const double center = e.value("center", 2.0);
    const double sigma = need_number(e, "sigma", "evolution");
    if (sigma <= 0.0) throw ConfigError("evolution.sigma must be positive");
    const auto times = need_numbers(e, "times", "evolution");

    const auto map = fold_index_map(g);
    const auto phi = normalized_gaussian(map.folded, center, sigma);
    SpinorState s0{phi, phi};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (auto& z : s0.phi_plus) z *= inv_sqrt2;
    for (auto& z : s0.phi_minus) z *= inv_sqrt2;

    const std::size_t far = map.folded.n - 1;
    CsvFile csv(dir / "fold_evolve.csv",
                "t,entropy,overlap,closed_form_entropy,deviation,flux_origin,flux_far");
    double worst = 0.0;
    for (const double t : times) {
        const auto st = evolve(s0, t, g, c);
        const auto rho = spin_density(st, map.folded);
        const double entropy = entanglement_entropy(rho);
        const double overlap = 2.0 * std::abs(rho.at(0, 1));
        const double closed = gaussian_entropy(t, sigma);
        const double deviation = std::abs(entropy - closed);
        worst = std::max(worst, deviation);
        // helicity-signed density at the fold points; zero means no leakage
        const double flux0 = std::norm(st.phi_plus[0]) - std::norm(st.phi_minus[0]);
        const double fluxL = std::norm(st.phi_plus[far]) - std::norm(st.phi_minus[far]);
        csv.row({g17(t), g17(entropy), g17(overlap), g17(closed), g17(deviation), g17(flux0),
                 g17(fluxL)});
    }
    meta["max_deviation"] = worst;
    return 0;
}

// ---- verify ----

struct VerifyCheck {
    std::string name;
    double bound = 0.0;
    std::function<double()> fn;
    double residual = 0.0;
    bool threw = false;
    std::string message;
};

void run_checks(std::vector<VerifyCheck>& checks) {
    std::atomic<std::size_t> cursor{0};
    auto worker = [&checks, &cursor] {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= checks.size()) break;
            try {
                checks[i].residual = checks[i].fn();
            } catch (const std::exception& e) {
                checks[i].threw = true;
                checks[i].message = e.what();
                checks[i].residual = std::numeric_limits<double>::infinity();
            }
        }
    };
    const std::size_t workers = std::min(worker_cap(), checks.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

double union_residual_check(std::size_t nodes, const Tolerances& tol,
                            const PhysicalConstants& c) {
    const auto circle = make_circle_grid(nodes);
    const auto laplacian = build_circle_laplacian(circle, c);
    const auto circle_levels = hermitian_eigenvalues(laplacian, tol);
    const auto plus = hermitian_eigenvalues(reduce_hamiltonian(laplacian, circle, +1, tol), tol);
    const auto minus = hermitian_eigenvalues(reduce_hamiltonian(laplacian, circle, -1, tol), tol);
    std::vector<double> merged;
    merged.insert(merged.end(), plus.begin(), plus.end());
    merged.insert(merged.end(), minus.begin(), minus.end());
    std::sort(merged.begin(), merged.end());
    double worst = 0.0;
    for (std::size_t k = 0; k < merged.size(); ++k)
        worst = std::max(worst, std::abs(merged[k] - circle_levels[k]));
    return worst;
}

double entry_diff(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim != b.dim) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t k = 0; k < a.entries.size(); ++k)
        worst = std::max(worst, std::abs(a.entries[k] - b.entries[k]));
    return worst;
}

double block_match_check(const Tolerances& tol, const PhysicalConstants& c) {
    const auto circle = make_circle_grid(64);
    const auto laplacian = build_circle_laplacian(circle, c);
    const auto interval = matched_interval_grid(circle);
    const auto neumann = build_interval_hamiltonian(interval, BoundarySpec::neumann(), c);
    const auto dirichlet = build_interval_hamiltonian(interval, BoundarySpec::dirichlet(), c);
    return std::max(entry_diff(reduce_hamiltonian(laplacian, circle, +1, tol), neumann),
                    entry_diff(reduce_hamiltonian(laplacian, circle, -1, tol), dirichlet));
}

double spinor_block_check(const Tolerances& tol, const PhysicalConstants& c) {
    const auto circle = make_circle_grid(64);
    const auto laplacian = build_circle_laplacian(circle, c);
    const std::size_t n = circle.n;
    HermitianOperator doubled(2 * n, "doubled laplacian");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            doubled.set(i, j, laplacian.at(i, j));
            doubled.set(n + i, n + j, laplacian.at(i, j));
        }
    const auto interval = matched_interval_grid(circle);
    const auto neumann = build_interval_hamiltonian(interval, BoundarySpec::neumann(), c);
    const auto dirichlet = build_interval_hamiltonian(interval, BoundarySpec::dirichlet(), c);
    const auto plus = reduce_spinor(doubled, circle, +1, {0.0, 0.0, 1.0}, tol);
    const auto minus = reduce_spinor(doubled, circle, -1, {0.0, 0.0, 1.0}, tol);
    double worst = std::max(plus.coupling_max, minus.coupling_max);
    worst = std::max(worst, entry_diff(plus.upper, neumann));
    worst = std::max(worst, entry_diff(plus.lower, dirichlet));
    worst = std::max(worst, entry_diff(minus.upper, dirichlet));
    worst = std::max(worst, entry_diff(minus.lower, neumann));
    return worst;
}

double oracle_agreement_check(const BoundarySpec& bc, const SpectrumOracle& oracle,
                              std::size_t segments, const Tolerances& tol,
                              const PhysicalConstants& c) {
    const auto g = make_interval_grid(segments);
    const auto numeric = hermitian_eigenvalues(build_interval_hamiltonian(g, bc, c), tol);
    const auto analytic = analytic_spectrum(oracle, c);
    double worst = 0.0;
    for (std::size_t k = 0; k < analytic.size(); ++k)
        worst = std::max(worst, std::abs(numeric[k] - analytic[k]) / std::max(1.0, analytic[k]));
    return worst;
}

double projectability_check() {
    const auto circle = make_circle_grid(64);
    ConnectionSpec odd, even;
    for (const double x : circle.nodes) {
        odd.alpha_samples.push_back(std::sin(x));
        even.alpha_samples.push_back(std::cos(x));
    }
    double bad = 0.0;
    if (!check_connection_projectable(odd, circle).projectable) bad += 1.0;
    if (check_connection_projectable(even, circle).projectable) bad += 1.0;
    return bad;
}

double momentum_rejection_check(const Tolerances& tol, const PhysicalConstants& c) {
    const auto circle = make_circle_grid(64);
    const auto momentum = build_circle_momentum(circle, c);
    try {
        reduce_hamiltonian(momentum, circle, +1, tol);
    } catch (const NumericsError&) {
        return 0.0;
    }
    return 1.0;
}

double mass_ratio_check(const PhysicalConstants& c) {
    const double direct = std::pow(2.0 * kPi / (2.0 * kPi - 1.0), 2.0);
    return std::abs(renormalized_mass(1.0, c) / c.mass - direct);
}

double limit_monotonicity_check(const PhysicalConstants& c) {
    const auto g = make_interval_grid(400);
    const auto report = limit_study(1.0, {0.2, 0.1, 0.05}, LimitRegime::Robin, g, c);
    double worst = 0.0;
    for (std::size_t k = 1; k < report.bulk_residuals.size(); ++k)
        worst = std::max(worst, report.bulk_residuals[k] - report.bulk_residuals[k - 1]);
    return std::max(worst, 0.0);
}

double fold_roundtrip_check(unsigned seed) {
    const auto circle = make_circle_grid(128);
    const auto map = fold_index_map(circle);
    double worst = 0.0;
    for (unsigned trial = 0; trial < 20; ++trial) {
        const auto psi = seeded_state(circle, seed + trial);
        const auto s = fold(psi, circle);
        worst = std::max(worst, std::abs(spinor_norm(s, map.folded) - 1.0));
        const auto back = unfold(s, circle);
        for (std::size_t j = 0; j < psi.size(); ++j)
            worst = std::max(worst, std::abs(back[j] - psi[j]));
    }
    return worst;
}

double dirac_spectrum_check(const Tolerances& tol, const PhysicalConstants& c) {
    const auto circle = make_circle_grid(64);
    const auto dirac = build_dirac(circle, make_interval_grid(32), c);
    const auto levels = hermitian_eigenvalues(dirac, tol);
    double worst = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k)
        worst = std::max(worst, std::abs(levels[k] - c.hbar * (static_cast<double>(k) - 31.0)));
    return worst;
}

double dirac_joint_check(const Tolerances& tol, const PhysicalConstants& c) {
    const auto circle = make_circle_grid(64);
    const auto folded = make_interval_grid(32);
    const auto dirac = build_dirac(circle, folded, c);
    const auto eig = hermitian_eigen(dirac, tol);
    double worst = 0.0;
    for (const auto& v : eig.eigenvectors) {
        const auto s = spinor_from_dirac_coords(v, circle);
        worst = std::max(worst, std::abs(s.phi_plus.front() - s.phi_minus.front()));
        worst = std::max(worst, std::abs(s.phi_plus.back() - s.phi_minus.back()));
    }
    return worst;
}

double evolve_unitarity_check(unsigned seed, const PhysicalConstants& c) {
    const auto circle = make_circle_grid(128);
    const auto map = fold_index_map(circle);
    const auto s = fold(seeded_state(circle, seed + 101), circle);
    return std::abs(spinor_norm(evolve(s, 0.7, circle, c), map.folded) - 1.0);
}

double entropy_closed_form_check(const PhysicalConstants& c) {
    const auto line = make_line_grid(256, 10.0);
    const auto map = fold_index_map(line);
    const auto phi = normalized_gaussian(map.folded, 2.0, 0.3);
    SpinorState s0{phi, phi};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (auto& z : s0.phi_plus) z *= inv_sqrt2;
    for (auto& z : s0.phi_minus) z *= inv_sqrt2;
    const auto st = evolve(s0, 0.6, line, c);
    const double entropy = entanglement_entropy(spin_density(st, map.folded));
    return std::abs(entropy - gaussian_entropy(0.6, 0.3));
}

int cmd_verify(const json&, const Tolerances& tol, const PhysicalConstants& c,
               const fs::path& dir, json& meta, unsigned seed, double tol_scale,
               std::ostream& out, std::ostream& err) {
    std::vector<VerifyCheck> checks;
    auto add = [&checks](std::string name, double bound, std::function<double()> fn) {
        checks.push_back({std::move(name), bound, std::move(fn), 0.0, false, {}});
    };

    add("reduction-union", 1e-10, [&] { return union_residual_check(256, tol, c); });
    add("reduction-interval-blocks", 1e-10, [&] { return block_match_check(tol, c); });
    add("spinor-reduction-blocks", 1e-10, [&] { return spinor_block_check(tol, c); });
    add("neumann-oracle-agreement", 1e-3, [&] {
        return oracle_agreement_check(BoundarySpec::neumann(), SpectrumOracle::neumann(10), 800,
                                      tol, c);
    });
    add("robin-oracle-agreement", 1e-3, [&] {
        return oracle_agreement_check(BoundarySpec::robin(1.0, 1.0),
                                      SpectrumOracle::robin(8, 1.0, 1.0), 800, tol, c);
    });
    add("twisted-oracle-agreement", 1e-3, [&] {
        return oracle_agreement_check(BoundarySpec::twisted(1.3), SpectrumOracle::twisted(8, 1.3),
                                      300, tol, c);
    });
    add("connection-projectability", 0.0, [] { return projectability_check(); });
    add("momentum-reduction-rejection", 0.0, [&] { return momentum_rejection_check(tol, c); });
    add("mass-ratio-identity", 1e-10, [&] { return mass_ratio_check(c); });
    add("robin-limit-monotonicity", 0.0, [&] { return limit_monotonicity_check(c); });
    add("fold-roundtrip", 1e-12, [&, seed] { return fold_roundtrip_check(seed); });
    add("dirac-integer-spectrum", 1e-10, [&] { return dirac_spectrum_check(tol, c); });
    add("dirac-joint-match", 1e-8, [&] { return dirac_joint_check(tol, c); });
    add("evolution-unitarity", 1e-12, [&, seed] { return evolve_unitarity_check(seed, c); });
    add("entropy-closed-form", 1e-3, [&] { return entropy_closed_form_check(c); });

    run_checks(checks);

    CsvFile csv(dir / "verify.csv", "check,residual,bound,status");
    std::size_t failures = 0;
    for (const auto& check : checks) {
        const double bound = check.bound * tol_scale;
        const bool pass = !check.threw && check.residual <= bound;
        if (!pass) {
            ++failures;
            err << "verify: " << check.name << " failed";
            if (check.threw) err << " (" << check.message << ")";
            err << '\n';
        }
        csv.row({check.name, g17(check.residual), g17(bound), pass ? "pass" : "fail"});
    }
    out << "verify: " << (checks.size() - failures) << "/" << checks.size() << " checks passed\n";
    meta["failures"] = failures;
    return failures == 0 ? 0 : 1;
}

}  // namespace

int run_experiment(const RunOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        std::ifstream config_stream(opt.config_path, std::ios::binary);
        if (!config_stream) throw ConfigError("cannot read config " + opt.config_path);
        std::string raw((std::istreambuf_iterator<char>(config_stream)),
                        std::istreambuf_iterator<char>());

        json cfg;
        try {
            cfg = json::parse(raw);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!cfg.is_object()) throw ConfigError("config must be a JSON object");

        const std::string command = need_string(cfg, "command", "config");
        std::string out_dir = opt.out_dir.empty() ? cfg.value("out", "") : opt.out_dir;
        if (out_dir.empty())
            throw ConfigError("no output directory: pass --out or set \"out\" in the config");
        const fs::path dir(out_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw ConfigError("cannot create output directory " + dir.string());

        const Tolerances tol = tolerances_from(cfg).scaled(opt.tol_scale);
        const PhysicalConstants constants = constants_from(cfg);

        char hash[24];
        std::snprintf(hash, sizeof hash, "%016llx",
                      static_cast<unsigned long long>(fnv1a(raw)));

        json meta = json::object();
        meta["command"] = command;
        meta["config_hash"] = hash;
        meta["seed"] = opt.seed;
        meta["tol_scale"] = opt.tol_scale;
        meta["workers"] = worker_cap();
        meta["tolerances"] = {{"hermiticity", tol.hermiticity},
                              {"orthonormality", tol.orthonormality},
                              {"residual", tol.residual},
                              {"unitarity", tol.unitarity},
                              {"commutator", tol.commutator},
                              {"sector", tol.sector}};

        int status = 0;
        if (command == "spectrum")
            status = cmd_spectrum(cfg, tol, constants, dir, meta);
        else if (command == "reduce")
            status = cmd_reduce(cfg, tol, constants, dir, meta);
        else if (command == "deform")
            status = cmd_deform(cfg, tol, constants, dir, meta);
        else if (command == "fold-evolve")
            status = cmd_fold_evolve(cfg, tol, constants, dir, meta);
        else if (command == "verify")
            status = cmd_verify(cfg, tol, constants, dir, meta, opt.seed, opt.tol_scale, out, err);
        else
            throw ConfigError("unknown command " + command);

        std::ofstream meta_stream(dir / "meta.json", std::ios::binary);
        if (!meta_stream) throw ConfigError("cannot write meta.json");
        meta_stream << meta.dump(2) << '\n';
        out << "wrote " << (dir / "meta.json").string() << '\n';
        return status;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericsError& e) {
        err << e.what() << '\n';
        return 1;
    }
}

}  // namespace qbc
