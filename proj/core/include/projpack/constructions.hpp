#pragma once

#include <string>
#include <utility>
#include <vector>

#include "projpack/frame.hpp"

namespace projpack::constructions {

enum class ConstructionKind { Simplex, MubMaximal, NaimarkComplement, ConjectureC3N5, Removal };

// Identifies how a packing was produced; note follows the catalog
// creator-note conventions ("etf", "mub", "AUTO", ...).
struct ConstructionLabel {
  ConstructionKind kind;
  std::vector<int> params;
  std::string note;
};

std::string default_note(ConstructionKind kind);

// d+1 unit vectors in F^d from the vertices of a regular simplex centered at
// the origin: the top-d eigenspace of I - J/(d+1), rows renormalized. Pairwise
// |<phi_j, phi_k>| = 1/d; equiangular and tight.
UnitFrame simplex(int d, Field field);

// Maximal set of mutually unbiased bases in C^d for prime d: the standard
// basis plus d quadratic-phase Fourier bases (entries w^(a k^2 + b k)/sqrt(d),
// w = exp(2 pi i / d)), n = d(d+1) vectors, coherence 1/sqrt(d). d = 2 uses
// the hardcoded Pauli eigenbases since the quadratic-phase formula needs a
// half-integer convention there. Non-prime d is rejected.
UnitFrame mub_maximal(int d);

// Completes sqrt(d/n) Phi to a unitary and returns the complementary block:
// n unit vectors in F^(n-d) whose rows span the orthogonal complement of the
// rows of sqrt(d/n) Phi. Requires a tight input (is_tight at 1e-8) with
// n > d. Column phases are normalized so the first nonzero entry of each
// column is positive real, making the output reproducible. Maps equiangular
// tight frames to equiangular tight frames.
UnitFrame naimark_complement(const UnitFrame& frame);

// The closed-form 5-vector packing in C^3 with entries built from
// a = (sqrt(13) + sqrt(2 + sqrt(13)) - 1)/(3 sqrt(3)), b = sqrt((1 - a^2)/2),
// c = 1/sqrt(3) and w = exp(2 pi i/3). Constants are computed at runtime from
// these radicals, never from stored decimals.
UnitFrame conjecture_c3n5();

// Drops column j (1-based). Coherence never increases.
UnitFrame remove_vector(const UnitFrame& frame, int j);

// Exhaustively tries all n single-vector removals and returns one attaining
// the minimum coherence (smallest index on ties) together with that 1-based
// index. Requires n >= 3.
std::pair<UnitFrame, int> best_removal(const UnitFrame& frame);

}  // namespace projpack::constructions
