#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace qbc {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// Absolute tolerances used by runtime validity checks. tol-scale on the CLI
// multiplies all of them uniformly.
struct Tolerances {
    double hermiticity = 1e-12;
    double orthonormality = 1e-10;
    double residual = 1e-9;
    double unitarity = 1e-10;
    double commutator = 1e-10;
    double sector = 1e-8;

    Tolerances scaled(double factor) const;
};

struct NumericsError : std::runtime_error {
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

// Dense row-major complex matrix, also used for unitaries and isometries.
struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    ComplexVector data;

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    Complex& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const Complex& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static ComplexMatrix identity(std::size_t n);
    ComplexMatrix adjoint() const;
    ComplexMatrix multiply(const ComplexMatrix& rhs) const;
    ComplexVector apply(const ComplexVector& x) const;
};

// max |u u^dagger - 1|; for a wide matrix this is the co-isometry defect.
double row_orthonormality_error(const ComplexMatrix& u);

// Square Hermitian matrix. Builders keep entries conjugate-symmetric exactly;
// hermitize() repairs the rounding drift after matrix products.
struct HermitianOperator {
    std::size_t dim = 0;
    ComplexVector entries;  // row-major dim x dim
    std::string label;

    HermitianOperator() = default;
    HermitianOperator(std::size_t n, std::string name)
        : dim(n), entries(n * n), label(std::move(name)) {}

    Complex& at(std::size_t i, std::size_t j) { return entries[i * dim + j]; }
    const Complex& at(std::size_t i, std::size_t j) const { return entries[i * dim + j]; }

    // writes value at (i,j) and its conjugate at (j,i)
    void set(std::size_t i, std::size_t j, Complex value);

    ComplexVector apply(const ComplexVector& x) const;
    double max_abs() const;
    double hermiticity_error() const;
    void hermitize();
};

// Throws NumericsError naming the worst entry pair if the matrix is not
// conjugate-symmetric within tol.hermiticity (absolute).
void require_hermitian(const HermitianOperator& op, const Tolerances& tol = {});

struct EigenDecomposition {
    std::vector<double> eigenvalues;           // ascending
    std::vector<ComplexVector> eigenvectors;   // eigenvectors[k] <-> eigenvalues[k]
};

// Full Hermitian eigendecomposition. Complex input is embedded as the doubled
// real symmetric matrix [[Re,-Im],[Im,Re]]; the duplicated spectrum is merged
// pairwise and degenerate clusters (gap < 1e-9 * scale) are re-orthonormalized
// in index order, so output is deterministic for a fixed input.
EigenDecomposition hermitian_eigen(const HermitianOperator& op, const Tolerances& tol = {});

// Eigenvalues only; considerably cheaper for the big grids. Real tridiagonal
// input skips the Householder stage entirely.
std::vector<double> hermitian_eigenvalues(const HermitianOperator& op, const Tolerances& tol = {});

// Single eigenvector by shifted inverse iteration. Requires a real tridiagonal
// operator and a simple eigenvalue (use hermitian_eigenvalues first); this is
// the cheap path for ground states of the large boundary Hamiltonians.
ComplexVector tridiagonal_eigenvector(const HermitianOperator& op, double eigenvalue,
                                      const Tolerances& tol = {});

// max residual / orthonormality defect of a computed decomposition
struct DecompositionCheck {
    double max_residual = 0.0;        // max_k |A v_k - lambda_k v_k|_inf
    double max_orthonormality = 0.0;  // max |<v_i,v_j> - delta_ij|
};
DecompositionCheck verify_decomposition(const HermitianOperator& op, const EigenDecomposition& eig);

// u must be square with u u^dagger = 1 within tol.unitarity. Result is
// re-hermitized so downstream validity checks see an exact Hermitian matrix.
HermitianOperator conjugate(const HermitianOperator& op, const ComplexMatrix& u,
                            const Tolerances& tol = {});

// v is wide (rows <= cols) with v v^dagger = 1; returns v op v^dagger.
HermitianOperator compress(const HermitianOperator& op, const ComplexMatrix& v,
                           const Tolerances& tol = {});

// Plain bisection on a bracketing interval; fn(lo) and fn(hi) must have
// opposite signs and every evaluation must be finite.
double bisection_root(const std::function<double(double)>& fn, double lo, double hi,
                      double tol = 1e-12);

}  // namespace qbc
