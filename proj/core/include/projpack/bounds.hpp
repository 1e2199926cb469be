#pragma once

#include <optional>
#include <string>
#include <vector>

#include "projpack/certificate.hpp"
#include "projpack/field.hpp"

namespace projpack::bounds {

// Gerzon's bound Z(d,F): d^2 over C, d(d+1)/2 over R. Caps the number of
// equiangular lines and gates the orthoplex/Levenstein regimes.
long long gerzon(int d, Field field);

// Coherence lower bounds. Each throws ApplicabilityError outside its range:
//   bukh_cox    requires n > d >= 2
//   welch       requires n > d >= 1 (field-independent)
//   orthoplex   requires d >= 2 (value 1/sqrt(d); caller gates n > Z(d,F))
//   levenstein  requires n >= Z(d,F); the boundary n = Z(d,F) evaluates the
//               formula outside Theorem gating (reported as such by
//               best_lower_bound), n < Z(d,F) throws
double bukh_cox(int d, int n, Field field);
double welch(int d, int n);
double orthoplex(int d);
double levenstein(int d, int n, Field field);

// 2t-th root of max(0, (1/(n-1)) (n / binom(d+t-1, t) - 1)); t = 1 reduces to
// welch. Clamps to 0 instead of throwing when the bound is nonpositive.
double generalized_welch(int d, int n, int t);

enum class BoundName { None, BukhCox, Welch, Orthoplex, Levenstein };
std::string bound_name_str(BoundName name);

struct BoundValue {
  std::optional<double> value;  // set iff the formula was evaluated
  bool applicable = false;      // Theorem gating satisfied
  bool boundary = false;        // evaluated at n = Z(d,F) exactly (levenstein only)
  std::string reason;           // why not applicable, empty otherwise
};

// All applicable bounds at one (d, n, field), their max, and which bound
// attains it. Ties within 1e-12 go to the first of
// BukhCox < Welch < Orthoplex < Levenstein. For n <= d best = 0 and
// best_name = None (orthonormal configurations reach coherence 0).
struct BoundReport {
  int d = 0;
  int n = 0;
  Field field;
  BoundValue bukh_cox;
  BoundValue welch;
  BoundValue orthoplex;
  BoundValue levenstein;
  double best = 0.0;
  BoundName best_name = BoundName::None;
};

BoundReport best_lower_bound(int d, int n, Field field);

// Bound-dominance analysis with n treated as continuous. bukh_cox_welch holds
// every root of bukh_cox(d, x) = welch(d, x) on [d+1, n_max] (x = d+1 is
// always one; interior roots located by bisection to 1e-6).
// levenstein_exceeds_orthoplex_at is the first integer n where the Levenstein
// bound strictly exceeds 1/sqrt(d), if that happens by n_max.
struct CrossoverReport {
  std::vector<double> bukh_cox_welch;
  std::optional<int> levenstein_exceeds_orthoplex_at;
};

CrossoverReport dominance_crossovers(int d, Field field, int n_max);

enum class SaturationKind { None, ETF, OrthoplexSaturating, LevensteinTightTwoDistance };
std::string saturation_kind_str(SaturationKind kind);

// kind = what the certificate saturates; contradiction is nonempty when the
// numerics match an equality case whose necessary side condition fails
// (ETF needs n <= Z(d,F), and n <= Z(n-d,F) when n - d >= 2; orthoplex
// equality needs n <= 2 (Z(d,F) - 1)).
struct SaturationResult {
  SaturationKind kind = SaturationKind::None;
  std::string contradiction;
};

SaturationResult classify_saturation(const Certificate& cert, double tol);

// CSV rows for every (d, n) with d_min <= d <= d_max, d < n <= n_max.
// Columns: d,n,field,bukh_cox,welch,orthoplex,levenstein,best,best_name;
// inapplicable bounds are empty cells; 12 significant digits.
std::string bounds_table_csv(int d_min, int d_max, int n_max, Field field);

}  // namespace projpack::bounds
