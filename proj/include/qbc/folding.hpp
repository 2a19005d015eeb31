#pragma once

#include <array>

#include "qbc/operators.hpp"

namespace qbc {

// Two-component state over the folded half domain. phi_plus carries the +y
// sheet, phi_minus the -y sheet; at fold points both sheets see the same
// source node.
struct SpinorState {
    ComplexVector phi_plus;
    ComplexVector phi_minus;
};

SpinorState fold(const ComplexVector& psi, const Grid& source);

// Exact inverse of fold on its range; disagreeing sheet values at fold points
// are averaged.
ComplexVector unfold(const SpinorState& s, const Grid& source);

double spinor_norm(const SpinorState& s, const Grid& folded);

// First-order spin-carrying operator on the identified node set, obtained by
// conjugating the spectral momentum of the source with the folding
// permutation. Dimension is the source size for a circle; a truncated line
// wraps its far ends onto each other first.
HermitianOperator build_dirac(const Grid& source, const Grid& folded, const PhysicalConstants& c);

// Non-redundant operator coordinates: slot 0 is the y = 0 joint, slots
// 1..M-1 the + sheet, slot M the far joint, slots M+1..2M-1 the - sheet.
ComplexVector dirac_coords_from_spinor(const SpinorState& s, const Grid& source);
SpinorState spinor_from_dirac_coords(const ComplexVector& coords, const Grid& source);

// Evolution by exact unfolding: unfold, translate spectrally by t on the
// source manifold, fold back. Unitary for every real t.
SpinorState evolve(const SpinorState& s, double t, const Grid& source, const PhysicalConstants& c);

// Cross-check path: rational stepping in the eigenbasis of the matrix above.
SpinorState evolve_crank_nicolson(const SpinorState& s, double t, std::size_t steps,
                                  const HermitianOperator& dirac, const Grid& source,
                                  const PhysicalConstants& c);

struct SpinDensityMatrix {
    std::array<Complex, 4> entries{};  // row-major 2x2
    Complex at(std::size_t i, std::size_t j) const { return entries[2 * i + j]; }
};

// Position-traced density matrix of a normalized spinor state.
SpinDensityMatrix spin_density(const SpinorState& s, const Grid& folded);

std::array<double, 2> spin_eigenvalues(const SpinDensityMatrix& rho);  // descending

double entanglement_entropy(const SpinDensityMatrix& rho);  // nats, in [0, ln 2]

}  // namespace qbc
