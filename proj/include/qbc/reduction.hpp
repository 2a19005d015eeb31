#pragma once

#include "qbc/operators.hpp"

namespace qbc {

// Reflection eigenspace of the circle, together with the matrix that carries
// it onto the matched half-domain grid. The matched grid has one segment per
// circle node pair, so circle spacing and interval spacing coincide.
struct ParitySector {
    int sign = +1;
    ComplexMatrix projector;  // (1 + sign P)/2 on circle samples
    ComplexMatrix isometry;   // rows map sector states to interval coordinates
};

ParitySector parity_sector(const Grid& circle, int sign);

// Interval grid matched to the circle grid (same spacing, length pi).
Grid matched_interval_grid(const Grid& circle);

struct ParitySplit {
    ComplexVector even;
    ComplexVector odd;
};

ParitySplit split_even_odd(const ComplexVector& state, const Grid& circle);

// Half-domain images of definite-parity states, in node samples. The factor
// sqrt(2) keeps the weighted norms equal; adjoints rebuild the symmetric or
// antisymmetric extension. Inputs are checked for the claimed symmetry and
// rejected with the measured asymmetry norm.
ComplexVector u_plus(const ComplexVector& state, const Grid& circle);
ComplexVector u_plus_adjoint(const ComplexVector& interval_state, const Grid& circle);
ComplexVector u_minus(const ComplexVector& state, const Grid& circle);
ComplexVector u_minus_adjoint(const ComplexVector& interval_state, const Grid& circle);

// Projects a reflection-symmetric circle operator onto one parity sector,
// expressed on the matched interval grid. sign +1 lands on the Neumann-type
// block, sign -1 on the Dirichlet-type block. Operators that fail to commute
// with the reflection are rejected, reporting the commutator size.
HermitianOperator reduce_hamiltonian(const HermitianOperator& circle_op, const Grid& circle,
                                     int sign, const Tolerances& tol = {});

// Spin-carrying variant: the doubled operator (spatial block per spin
// component) is projected onto one eigensector of the spinor reflection
// (axis . sigma) tensor parity. Each sector splits into two interval blocks;
// coupling_max reports the largest cross-block entry left behind.
struct SpinorReduction {
    HermitianOperator upper;  // spin-aligned component
    HermitianOperator lower;  // spin-antialigned component
    double coupling_max = 0.0;
};

SpinorReduction reduce_spinor(const HermitianOperator& doubled_op, const Grid& circle, int sign,
                              const std::array<double, 3>& axis = {0.0, 0.0, 1.0},
                              const Tolerances& tol = {});

}  // namespace qbc
