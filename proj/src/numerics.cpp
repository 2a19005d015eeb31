#include "qbc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qbc {

Tolerances Tolerances::scaled(double factor) const {
    Tolerances t = *this;
    t.hermiticity *= factor;
    t.orthonormality *= factor;
    t.residual *= factor;
    t.unitarity *= factor;
    t.commutator *= factor;
    t.sector *= factor;
    return t;
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.at(j, i) = std::conj(at(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::multiply(const ComplexMatrix& rhs) const {
    if (cols != rhs.rows) throw NumericsError("matrix product dimension mismatch");
    ComplexMatrix out(rows, rhs.cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = 0; k < cols; ++k) {
            const Complex aik = at(i, k);
            if (aik == Complex(0.0, 0.0)) continue;
            const Complex* rrow = &rhs.data[k * rhs.cols];
            Complex* orow = &out.data[i * out.cols];
            for (std::size_t j = 0; j < rhs.cols; ++j) orow[j] += aik * rrow[j];
        }
    }
    return out;
}

ComplexVector ComplexMatrix::apply(const ComplexVector& x) const {
    if (x.size() != cols) throw NumericsError("matrix-vector dimension mismatch");
    ComplexVector y(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        Complex acc = 0.0;
        const Complex* row = &data[i * cols];
        for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

double row_orthonormality_error(const ComplexMatrix& u) {
    double worst = 0.0;
    for (std::size_t i = 0; i < u.rows; ++i) {
        for (std::size_t j = i; j < u.rows; ++j) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < u.cols; ++k) acc += u.at(i, k) * std::conj(u.at(j, k));
            if (i == j) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

void HermitianOperator::set(std::size_t i, std::size_t j, Complex value) {
    at(i, j) = value;
    at(j, i) = std::conj(value);
    if (i == j) at(i, i) = Complex(value.real(), 0.0);
}

ComplexVector HermitianOperator::apply(const ComplexVector& x) const {
    if (x.size() != dim) throw NumericsError("operator-state dimension mismatch");
    ComplexVector y(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        Complex acc = 0.0;
        const Complex* row = &entries[i * dim];
        for (std::size_t j = 0; j < dim; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

double HermitianOperator::max_abs() const {
    double m = 0.0;
    for (const Complex& z : entries) m = std::max(m, std::abs(z));
    return m;
}

double HermitianOperator::hermiticity_error() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j)
            worst = std::max(worst, std::abs(at(i, j) - std::conj(at(j, i))));
    return worst;
}

void HermitianOperator::hermitize() {
    for (std::size_t i = 0; i < dim; ++i) {
        at(i, i) = Complex(at(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < dim; ++j) {
            Complex avg = 0.5 * (at(i, j) + std::conj(at(j, i)));
            at(i, j) = avg;
            at(j, i) = std::conj(avg);
        }
    }
}

void require_hermitian(const HermitianOperator& op, const Tolerances& tol) {
    if (op.dim == 0) throw NumericsError("empty operator");
    if (op.entries.size() != op.dim * op.dim) throw NumericsError("operator storage size mismatch");
    for (const Complex& z : op.entries)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw NumericsError("operator has non-finite entries");
    for (std::size_t i = 0; i < op.dim; ++i) {
        for (std::size_t j = i; j < op.dim; ++j) {
            double dev = std::abs(op.at(i, j) - std::conj(op.at(j, i)));
            if (dev > tol.hermiticity) {
                std::ostringstream msg;
                msg << "operator '" << op.label << "' not Hermitian: entries (" << i << "," << j
                    << ") and (" << j << "," << i << ") differ by " << dev;
                throw NumericsError(msg.str());
            }
        }
    }
}

namespace {

// Householder reduction of a symmetric matrix (row-major, lower triangle
// authoritative) to tridiagonal form. Rows of `a` end up holding the
// reflector vectors; `hcoef[i]` the corresponding 1/2 |u|^2.
void householder_reduce(std::vector<double>& a, std::size_t n, std::vector<double>& d,
                        std::vector<double>& e, std::vector<double>& hcoef) {
    auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    for (std::size_t i = n - 1; i >= 1; --i) {
        const std::size_t l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (std::size_t k = 0; k <= l; ++k) scale += std::fabs(A(i, k));
            if (scale == 0.0) {
                e[i] = A(i, l);
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    A(i, k) /= scale;
                    h += A(i, k) * A(i, k);
                }
                double f = A(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                A(i, l) = f - g;
                f = 0.0;
                for (std::size_t j = 0; j <= l; ++j) {
                    double p = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) p += A(j, k) * A(i, k);
                    for (std::size_t k = j + 1; k <= l; ++k) p += A(k, j) * A(i, k);
                    e[j] = p / h;
                    f += e[j] * A(i, j);
                }
                const double hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) {
                    const double fj = A(i, j);
                    const double qj = e[j] - hh * fj;
                    e[j] = qj;
                    double* arow = &a[j * n];
                    const double* urow = &a[i * n];
                    for (std::size_t k = 0; k <= j; ++k) arow[k] -= fj * e[k] + qj * urow[k];
                }
            }
        } else {
            e[i] = A(i, l);
        }
        hcoef[i] = h;
        if (i == 1) break;
    }
    hcoef[0] = 0.0;
    e[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) d[i] = A(i, i);
}

// Builds Q^T (rows are the tridiagonalizing basis) from the stored reflectors.
void accumulate_basis(const std::vector<double>& a, std::size_t n,
                      const std::vector<double>& hcoef, std::vector<double>& qt) {
    qt.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) qt[i * n + i] = 1.0;
    std::vector<double> mu(n);
    for (std::size_t i = 2; i < n; ++i) {
        const double h = hcoef[i];
        if (h == 0.0) continue;
        const double* u = &a[i * n];  // reflector support 0..i-1
        for (std::size_t r = 0; r < i; ++r) {
            const double* row = &qt[r * n];
            double acc = 0.0;
            for (std::size_t k = 0; k < i; ++k) acc += row[k] * u[k];
            mu[r] = acc / h;
        }
        for (std::size_t r = 0; r < i; ++r) {
            double* row = &qt[r * n];
            const double m = mu[r];
            if (m == 0.0) continue;
            for (std::size_t k = 0; k < i; ++k) row[k] -= m * u[k];
        }
    }
}

// Implicit-shift QL on the tridiagonal (d, e). When qt is non-null the
// rotations act on its rows, so rows of qt become the eigenvectors.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, std::vector<double>* qt,
                 std::size_t n) {
    if (n == 1) return;
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m = l;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw NumericsError("eigensolver failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (qt) {
                        double* ri = &(*qt)[i * n];
                        double* ri1 = &(*qt)[(i + 1) * n];
                        for (std::size_t k = 0; k < n; ++k) {
                            const double t = ri1[k];
                            ri1[k] = s * ri[k] + c * t;
                            ri[k] = c * ri[k] - s * t;
                        }
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

// eigenvalue count of the tridiagonal (d, e) strictly below x; e[i] couples
// nodes i-1 and i, e[0] unused
std::size_t sturm_count_below(const std::vector<double>& d, const std::vector<double>& e2,
                              std::size_t n, double x) {
    std::size_t count = 0;
    double q = d[0] - x;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        double denom = q;
        if (std::fabs(denom) < 1e-300) denom = (denom < 0.0 ? -1e-300 : 1e-300);
        q = d[i] - x - e2[i] / denom;
        if (q < 0.0) ++count;
    }
    return count;
}

// Polishes sorted QL eigenvalues to a few ulp by bisection on the Sturm
// count. Keeps large-norm spectra accurate in an absolute sense, which the
// sector-union identities rely on.
void refine_tridiagonal_values(const std::vector<double>& d, const std::vector<double>& e,
                               std::size_t n, std::vector<double>& values) {
    if (n < 2) return;
    std::vector<double> e2(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) e2[i] = e[i] * e[i];
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        scale = std::max({scale, std::fabs(d[i]), std::fabs(e[i])});
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t i = 0; i < n; ++i) {
        double delta = 1e-9 * scale;
        double lo = values[i] - delta;
        double hi = values[i] + delta;
        while (sturm_count_below(d, e2, n, lo) > i && delta < scale) {
            delta *= 8.0;
            lo = values[i] - delta;
        }
        delta = 1e-9 * scale;
        while (sturm_count_below(d, e2, n, hi) < i + 1 && delta < scale) {
            delta *= 8.0;
            hi = values[i] + delta;
        }
        for (int pass = 0; pass < 200; ++pass) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (sturm_count_below(d, e2, n, mid) >= i + 1) hi = mid;
            else lo = mid;
            if (hi - lo <= eps * (std::fabs(lo) + std::fabs(hi)) + 1e-300) break;
        }
        values[i] = 0.5 * (lo + hi);
    }
}

struct RealEigenResult {
    std::vector<double> values;      // ascending
    std::vector<double> vectors;     // row k is the eigenvector of values[k]
    std::vector<std::size_t> order;  // pre-sort positions (for reproducibility checks)
};

RealEigenResult solve_real_symmetric(std::vector<double> a, std::size_t n, bool want_vectors) {
    std::vector<double> d(n, 0.0), e(n, 0.0), hcoef(n, 0.0);
    if (n > 1) householder_reduce(a, n, d, e, hcoef);
    else d[0] = a[0];
    RealEigenResult res;
    std::vector<double> qt;
    std::vector<double> d0, e0;
    if (want_vectors) {
        accumulate_basis(a, n, hcoef, qt);
        ql_implicit(d, e, &qt, n);
    } else {
        d0 = d;
        e0 = e;
        ql_implicit(d, e, nullptr, n);
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
    res.values.resize(n);
    res.order = idx;
    for (std::size_t k = 0; k < n; ++k) res.values[k] = d[idx[k]];
    if (want_vectors) {
        res.vectors.resize(n * n);
        for (std::size_t k = 0; k < n; ++k)
            std::copy(&qt[idx[k] * n], &qt[idx[k] * n] + n, &res.vectors[k * n]);
    } else if (n > 1) {
        refine_tridiagonal_values(d0, e0, n, res.values);
    }
    return res;
}

bool strictly_real(const HermitianOperator& op) {
    for (const Complex& z : op.entries)
        if (z.imag() != 0.0) return false;
    return true;
}

bool real_tridiagonal(const HermitianOperator& op) {
    if (!strictly_real(op)) return false;
    for (std::size_t i = 0; i < op.dim; ++i)
        for (std::size_t j = i + 2; j < op.dim; ++j)
            if (op.at(i, j) != Complex(0.0, 0.0) || op.at(j, i) != Complex(0.0, 0.0)) return false;
    return true;
}

void extract_tridiagonal(const HermitianOperator& op, std::vector<double>& d,
                         std::vector<double>& e) {
    const std::size_t n = op.dim;
    d.resize(n);
    e.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = op.at(i, i).real();
        if (i > 0) e[i] = op.at(i, i - 1).real();
    }
}

double spectral_scale(const std::vector<double>& values) {
    double s = 1.0;
    for (double v : values) s = std::max(s, std::fabs(v));
    return s;
}

void normalize_phase(ComplexVector& v) {
    std::size_t imax = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double m = std::norm(v[i]);
        if (m > best * (1.0 + 1e-14)) {
            best = m;
            imax = i;
        }
    }
    const Complex z = v[imax];
    const double mag = std::abs(z);
    if (mag == 0.0) return;
    const Complex phase = std::conj(z) / mag;
    for (Complex& c : v) c *= phase;
}

// In-place modified Gram-Schmidt over a degenerate cluster, index order.
void orthonormalize_cluster(std::vector<ComplexVector>& vecs, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
        for (std::size_t j = lo; j < i; ++j) {
            Complex ov = 0.0;
            for (std::size_t k = 0; k < vecs[i].size(); ++k) ov += std::conj(vecs[j][k]) * vecs[i][k];
            for (std::size_t k = 0; k < vecs[i].size(); ++k) vecs[i][k] -= ov * vecs[j][k];
        }
        double nrm = 0.0;
        for (const Complex& z : vecs[i]) nrm += std::norm(z);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-8) throw NumericsError("degenerate cluster orthonormalization collapsed");
        for (Complex& z : vecs[i]) z /= nrm;
    }
}

}  // namespace

EigenDecomposition hermitian_eigen(const HermitianOperator& op, const Tolerances& tol) {
    require_hermitian(op, tol);
    const std::size_t n = op.dim;
    EigenDecomposition out;
    if (real_tridiagonal(op)) {
        std::vector<double> d, e;
        extract_tridiagonal(op, d, e);
        std::vector<double> qt(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) qt[i * n + i] = 1.0;
        ql_implicit(d, e, &qt, n);
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
        out.eigenvalues.resize(n);
        out.eigenvectors.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            out.eigenvalues[k] = d[idx[k]];
            out.eigenvectors[k].resize(n);
            for (std::size_t j = 0; j < n; ++j) out.eigenvectors[k][j] = qt[idx[k] * n + j];
        }
    } else if (strictly_real(op)) {
        std::vector<double> a(n * n);
        for (std::size_t i = 0; i < n * n; ++i) a[i] = op.entries[i].real();
        RealEigenResult r = solve_real_symmetric(std::move(a), n, true);
        out.eigenvalues = r.values;
        out.eigenvectors.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            out.eigenvectors[k].resize(n);
            for (std::size_t j = 0; j < n; ++j) out.eigenvectors[k][j] = r.vectors[k * n + j];
        }
    } else {
        // doubled real symmetric embedding [[A,-B],[B,A]] for H = A + iB
        const std::size_t N = 2 * n;
        std::vector<double> a(N * N);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const Complex z = op.at(i, j);
                a[i * N + j] = z.real();
                a[(i + n) * N + (j + n)] = z.real();
                a[i * N + (j + n)] = -z.imag();
                a[(i + n) * N + j] = z.imag();
            }
        }
        RealEigenResult r = solve_real_symmetric(std::move(a), N, true);
        const double gap = 1e-9 * spectral_scale(r.values);
        out.eigenvalues.reserve(n);
        out.eigenvectors.reserve(n);
        std::size_t lo = 0;
        while (lo < N) {
            std::size_t hi = lo + 1;
            while (hi < N && r.values[hi] - r.values[hi - 1] < gap) ++hi;
            const std::size_t size = hi - lo;
            if (size % 2 != 0)
                throw NumericsError("doubled-embedding spectrum failed to pair");
            const std::size_t keep = size / 2;
            // pair consecutive duplicates into single eigenvalues
            for (std::size_t k = 0; k < keep; ++k)
                out.eigenvalues.push_back(0.5 * (r.values[lo + 2 * k] + r.values[lo + 2 * k + 1]));
            // candidates (u + i w) from the real eigenrows span the complex
            // eigenspace; keep the first `keep` independent ones, index order
            std::size_t kept = 0;
            std::vector<ComplexVector> chosen;
            for (std::size_t m = lo; m < hi && kept < keep; ++m) {
                ComplexVector v(n);
                const double* row = &r.vectors[m * N];
                for (std::size_t j = 0; j < n; ++j) v[j] = Complex(row[j], row[j + n]);
                for (const ComplexVector& prev : chosen) {
                    Complex ov = 0.0;
                    for (std::size_t j = 0; j < n; ++j) ov += std::conj(prev[j]) * v[j];
                    for (std::size_t j = 0; j < n; ++j) v[j] -= ov * prev[j];
                }
                double nrm = 0.0;
                for (const Complex& z : v) nrm += std::norm(z);
                nrm = std::sqrt(nrm);
                if (nrm < 1e-6) continue;
                for (Complex& z : v) z /= nrm;
                chosen.push_back(std::move(v));
                ++kept;
            }
            if (kept < keep)
                throw NumericsError("doubled-embedding eigenvector extraction deficient");
            for (ComplexVector& v : chosen) out.eigenvectors.push_back(std::move(v));
            lo = hi;
        }
    }
    // deterministic re-orthonormalization inside degenerate clusters
    const double gap = 1e-9 * spectral_scale(out.eigenvalues);
    std::size_t lo = 0;
    while (lo < out.eigenvalues.size()) {
        std::size_t hi = lo + 1;
        while (hi < out.eigenvalues.size() && out.eigenvalues[hi] - out.eigenvalues[hi - 1] < gap)
            ++hi;
        if (hi - lo > 1) orthonormalize_cluster(out.eigenvectors, lo, hi);
        lo = hi;
    }
    for (ComplexVector& v : out.eigenvectors) normalize_phase(v);
    return out;
}

std::vector<double> hermitian_eigenvalues(const HermitianOperator& op, const Tolerances& tol) {
    require_hermitian(op, tol);
    const std::size_t n = op.dim;
    if (real_tridiagonal(op)) {
        std::vector<double> d, e;
        extract_tridiagonal(op, d, e);
        const std::vector<double> d0 = d, e0 = e;
        ql_implicit(d, e, nullptr, n);
        std::sort(d.begin(), d.end());
        refine_tridiagonal_values(d0, e0, n, d);
        return d;
    }
    if (strictly_real(op)) {
        std::vector<double> a(n * n);
        for (std::size_t i = 0; i < n * n; ++i) a[i] = op.entries[i].real();
        return solve_real_symmetric(std::move(a), n, false).values;
    }
    const std::size_t N = 2 * n;
    std::vector<double> a(N * N);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Complex z = op.at(i, j);
            a[i * N + j] = z.real();
            a[(i + n) * N + (j + n)] = z.real();
            a[i * N + (j + n)] = -z.imag();
            a[(i + n) * N + j] = z.imag();
        }
    }
    std::vector<double> all = solve_real_symmetric(std::move(a), N, false).values;
    std::vector<double> merged(n);
    for (std::size_t k = 0; k < n; ++k) merged[k] = 0.5 * (all[2 * k] + all[2 * k + 1]);
    return merged;
}

ComplexVector tridiagonal_eigenvector(const HermitianOperator& op, double eigenvalue,
                                      const Tolerances& tol) {
    require_hermitian(op, tol);
    if (!real_tridiagonal(op))
        throw NumericsError("inverse iteration path requires a real tridiagonal operator");
    const std::size_t n = op.dim;
    std::vector<double> diag, sub;
    extract_tridiagonal(op, diag, sub);
    const double scale = std::max(1.0, op.max_abs());
    const double tiny = 1e-30 + std::numeric_limits<double>::epsilon() * scale;

    // LU of (T - eigenvalue) with partial pivoting; du2 holds the second
    // superdiagonal fill-in, swap[] the pivot choices.
    std::vector<double> d(n), dl(n, 0.0), du(n, 0.0), du2(n, 0.0);
    std::vector<char> swapped(n, 0);
    for (std::size_t i = 0; i < n; ++i) d[i] = diag[i] - eigenvalue;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        dl[i] = sub[i + 1];
        du[i] = sub[i + 1];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::fabs(d[i]) >= std::fabs(dl[i])) {
            if (std::fabs(d[i]) < tiny) d[i] = (d[i] < 0.0) ? -tiny : tiny;
            const double fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
        } else {
            const double fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            const double temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            swapped[i] = 1;
        }
    }
    if (std::fabs(d[n - 1]) < tiny) d[n - 1] = (d[n - 1] < 0.0) ? -tiny : tiny;

    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double residual = std::numeric_limits<double>::infinity();
    for (int pass = 0; pass < 8 && residual > 1e-11 * scale; ++pass) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!swapped[i]) {
                x[i + 1] -= dl[i] * x[i];
            } else {
                const double temp = x[i];
                x[i] = x[i + 1];
                x[i + 1] = temp - dl[i] * x[i];
            }
        }
        x[n - 1] /= d[n - 1];
        if (n >= 2) x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
        if (n >= 3)
            for (std::size_t i = n - 2; i-- > 0;)
                x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
        double nrm = 0.0;
        for (double v : x) nrm += v * v;
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw NumericsError("inverse iteration produced a degenerate vector");
        for (double& v : x) v /= nrm;
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = (diag[i] - eigenvalue) * x[i];
            if (i > 0) r += sub[i] * x[i - 1];
            if (i + 1 < n) r += sub[i + 1] * x[i + 1];
            residual = std::max(residual, std::fabs(r));
        }
    }
    if (residual > 1e-8 * scale)
        throw NumericsError("inverse iteration did not converge; eigenvalue estimate too coarse");
    ComplexVector out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i];
    normalize_phase(out);
    return out;
}

DecompositionCheck verify_decomposition(const HermitianOperator& op, const EigenDecomposition& eig) {
    DecompositionCheck chk;
    const std::size_t levels = eig.eigenvalues.size();
    for (std::size_t k = 0; k < levels; ++k) {
        ComplexVector r = op.apply(eig.eigenvectors[k]);
        for (std::size_t j = 0; j < op.dim; ++j)
            chk.max_residual =
                std::max(chk.max_residual, std::abs(r[j] - eig.eigenvalues[k] * eig.eigenvectors[k][j]));
    }
    for (std::size_t i = 0; i < levels; ++i) {
        for (std::size_t j = i; j < levels; ++j) {
            Complex ov = 0.0;
            for (std::size_t k = 0; k < op.dim; ++k)
                ov += std::conj(eig.eigenvectors[i][k]) * eig.eigenvectors[j][k];
            if (i == j) ov -= 1.0;
            chk.max_orthonormality = std::max(chk.max_orthonormality, std::abs(ov));
        }
    }
    return chk;
}

HermitianOperator conjugate(const HermitianOperator& op, const ComplexMatrix& u,
                            const Tolerances& tol) {
    require_hermitian(op, tol);
    if (u.rows != u.cols || u.rows != op.dim)
        throw NumericsError("conjugation requires a square unitary of matching dimension");
    const double defect = row_orthonormality_error(u);
    if (defect > tol.unitarity) {
        std::ostringstream msg;
        msg << "conjugation matrix not unitary: |u u^dagger - 1| = " << defect;
        throw NumericsError(msg.str());
    }
    ComplexMatrix m(op.dim, op.dim);
    m.data = op.entries;
    ComplexMatrix res = u.multiply(m).multiply(u.adjoint());
    HermitianOperator out(op.dim, op.label + "~conjugated");
    out.entries = std::move(res.data);
    out.hermitize();
    return out;
}

HermitianOperator compress(const HermitianOperator& op, const ComplexMatrix& v,
                           const Tolerances& tol) {
    require_hermitian(op, tol);
    if (v.cols != op.dim || v.rows > v.cols)
        throw NumericsError("compression requires a wide co-isometry matching the operator");
    const double defect = row_orthonormality_error(v);
    if (defect > tol.unitarity) {
        std::ostringstream msg;
        msg << "compression matrix rows not orthonormal: defect " << defect;
        throw NumericsError(msg.str());
    }
    ComplexMatrix m(op.dim, op.dim);
    m.data = op.entries;
    ComplexMatrix res = v.multiply(m).multiply(v.adjoint());
    HermitianOperator out(v.rows, op.label + "~compressed");
    out.entries = std::move(res.data);
    out.hermitize();
    return out;
}

double bisection_root(const std::function<double(double)>& fn, double lo, double hi, double tol) {
    if (!(lo < hi)) throw NumericsError("bisection bracket is empty");
    if (!(tol > 0.0)) throw NumericsError("bisection tolerance must be positive");
    double flo = fn(lo);
    double fhi = fn(hi);
    if (!std::isfinite(flo) || !std::isfinite(fhi))
        throw NumericsError("bisection endpoint evaluation not finite");
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw NumericsError("bisection bracket does not change sign");
    for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fn(mid);
        if (!std::isfinite(fm)) throw NumericsError("bisection midpoint evaluation not finite");
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace qbc
