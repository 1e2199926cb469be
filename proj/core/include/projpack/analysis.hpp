#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "projpack/frame.hpp"

namespace projpack {

// Hermitian matrix of pairwise inner products. Convention: the inner product
// is conjugate-linear in its second slot, so entries(j,k) = <phi_k, phi_j>
// = phi_j^H phi_k and the whole matrix is Phi^H Phi. Built symmetrized
// (entries(k,j) assigned as conj(entries(j,k))) with the diagonal set to
// exactly 1.
struct GramMatrix {
  Eigen::MatrixXcd entries;

  int n() const { return static_cast<int>(entries.rows()); }
};

GramMatrix gram(const UnitFrame& frame);

// max_{j<k} |<phi_j, phi_k>|; requires n >= 2.
double coherence(const UnitFrame& frame);
double coherence(const GramMatrix& g);  // same, from a precomputed Gram

// Distinct squared moduli |<phi_j,phi_k>|^2 (j < k) after single-linkage
// clustering: sorted values, a new cluster opens where the gap between
// consecutive raw values exceeds cluster_tol. values[i] is the cluster mean,
// counts[i] its multiplicity; counts sum to n(n-1)/2.
struct AngleProfile {
  std::vector<double> values;
  std::vector<std::int64_t> counts;
  double cluster_tol = 0.0;
};

AngleProfile angle_profile(const UnitFrame& frame, double cluster_tol = 1e-6);

// residual = max_i |lambda_i(Phi Phi^H) - n/d| / (n/d), the relative
// spectral-norm distance of the frame operator from (n/d) I. n < d can never
// be tight: returns {false, +inf}.
struct TightnessResult {
  bool tight = false;
  double residual = 0.0;
};

TightnessResult is_tight(const UnitFrame& frame, double tol);

// true iff max - min of the off-diagonal |Gram| entries is <= tol; n >= 2.
bool is_equiangular(const UnitFrame& frame, double tol);

// true iff the d-th singular value of Phi exceeds tol * (largest singular
// value), i.e. the columns span F^d with margin.
bool spans(const UnitFrame& frame, double tol);

}  // namespace projpack
