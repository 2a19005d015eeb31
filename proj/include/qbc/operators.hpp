#pragma once

#include <array>

#include "qbc/grids.hpp"

namespace qbc {

struct PhysicalConstants {
    double hbar = 1.0;
    double mass = 1.0;
};

void require_constants(const PhysicalConstants& c);

// One self-adjoint realization of the kinetic operator on the interval.
struct BoundarySpec {
    enum class Kind { Dirichlet, Neumann, Robin, TwistedPeriodic };
    Kind kind = Kind::Neumann;
    double mu0 = 0.0;    // Robin strength at 0, >= 0
    double mupi = 0.0;   // Robin strength at pi, >= 0
    double alpha = 0.0;  // twist angle, stored in [0, 2pi)

    static BoundarySpec dirichlet();
    static BoundarySpec neumann();
    static BoundarySpec robin(double mu0, double mupi);
    static BoundarySpec twisted(double alpha);

    std::string describe() const;
};

// (hbar^2/2m) second-difference with periodic wrap; real symmetric circulant.
HermitianOperator build_circle_laplacian(const Grid& g, const PhysicalConstants& c);

// Spectral momentum: eigenvalues exactly hbar*k, k in {-N/2+1, ..., N/2}.
// Dense complex Hermitian Toeplitz; exact on resolved Fourier modes.
HermitianOperator build_circle_momentum(const Grid& g, const PhysicalConstants& c);

// Interval kinetic matrix in half-weight endpoint coordinates. Dimensions:
// Dirichlet drops both endpoints (n-2); Neumann/Robin keep all nodes (n);
// TwistedPeriodic identifies the endpoints up to a phase (n-1, complex).
HermitianOperator build_interval_hamiltonian(const Grid& g, const BoundarySpec& bc,
                                             const PhysicalConstants& c);

// Reflection permutation as a matrix; involutive, Hermitian, unitary.
HermitianOperator build_parity_operator(const Grid& g);

// (n.sigma) tensor reflection on the doubled circle space; upper component
// occupies indices 0..N-1, lower N..2N-1.
HermitianOperator build_spinor_parity(const Grid& g, const std::array<double, 3>& axis);

// Probability current (hbar/m) Im(conj(psi) psi'), central differences with
// periodic wrap on the circle and one-sided second-order stencils at ends.
std::vector<double> compute_current(const ComplexVector& state, const Grid& g,
                                    const PhysicalConstants& c);

struct ConnectionSpec {
    std::vector<double> alpha_samples;  // values of alpha(x) on circle nodes
};

struct ConnectionCheck {
    bool projectable = false;
    double max_violation = 0.0;  // max of |alpha(x)+alpha(-x)| and |alpha(0)|
};

// A connection descends to the quotient only if alpha is odd and vanishes at
// the fixed points; threshold 1e-10.
ConnectionCheck check_connection_projectable(const ConnectionSpec& conn, const Grid& g);

}  // namespace qbc
