#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "projpack/certificate.hpp"
#include "projpack/frame.hpp"

namespace projpack::optimizer {

// Search schedule. Defaults target an additive surrogate-to-coherence gap
// below 1e-4 for n <= 49 by the final beta round; exact coherence of the best
// iterate is tracked on the side, so the surrogate gap only has to get the
// iterates into the right basin.
struct SolverConfig {
  int d = 2;
  int n = 3;
  Field field = Field::complex();
  int restarts = 32;
  std::uint64_t seed = 0;
  double beta_init = 50.0;
  double beta_growth = 2.0;
  int beta_rounds = 12;
  int max_iters_per_round = 2000;
  double step_init = 0.1;
  double grad_tol = 1e-12;
  bool ap_enabled = true;
  double ap_shrink = 0.995;
  bool require_tight = false;
  std::optional<int> phase_quantize_q;
  bool perturb_escape_enabled = false;
};

// Throws ValidationError when a field is out of range (restarts < 1,
// beta_growth <= 1, ap_shrink outside (0,1), ...).
void validate(const SolverConfig& cfg);

// Flat `key = value` text, one pair per line, keys exactly the SolverConfig
// field names; '#' starts a comment. Unknown keys are rejected.
SolverConfig parse_config_text(std::string_view text);
SolverConfig load_config_file(const std::string& path);

struct SolveResult {
  UnitFrame best_frame;
  double best_coherence = 0.0;
  Certificate certificate;
  std::vector<double> per_restart_coherences;
  long long iterations_used = 0;
  double gap_to_bound = 0.0;  // best_coherence - best_lower_bound(d,n,field)
};

// sqrt((1/beta) log sum_{j<k} exp(beta |<phi_j,phi_k>|^2)). Tends to the
// coherence from above as beta grows:
//   mu^2 <= smoothed^2 <= mu^2 + log(n(n-1)/2)/beta.
double smoothed_coherence(const UnitFrame& frame, double beta);

// Ambient Euclidean gradient of smoothed_coherence at the frame, under the
// real pairing df = Re tr(grad^H V). Zero where the surrogate vanishes.
Eigen::MatrixXcd smoothed_coherence_grad(const UnitFrame& frame, double beta);

// Projected gradient descent on the smoothed objective at fixed beta: column
// gradients projected to the sphere tangent spaces, backtracking line search,
// renormalization retraction. Stops at cfg.max_iters_per_round iterations or
// tangent gradient norm <= cfg.grad_tol. Output surrogate <= input surrogate.
UnitFrame descent_round(const UnitFrame& frame, double beta, const SolverConfig& cfg);

// Multi-restart beta-continuation search. Per restart: Gaussian init
// (deterministic per (seed, restart index)), beta_rounds descent rounds with
// beta *= beta_growth between them, alternating-projection polish after each
// round when ap_enabled, exact-coherence tracking of the best iterate.
// n <= d short-circuits to an orthonormal section. A warm-start frame, when
// given, replaces the random init of restart 0.
SolveResult anneal(const SolverConfig& cfg);
SolveResult anneal(const SolverConfig& cfg, const std::optional<UnitFrame>& warm_start);

// Alternate (a) Gram clip: unit diagonal, off-diagonal moduli clamped to
// target_mu preserving phase, and (b) spectral projection to rank d (with all
// d retained eigenvalues replaced by n/d when require_tight), then column
// renormalization. Returns the best-coherence iterate; in require_tight mode
// only iterates with tightness residual <= 1e-6 qualify (final iterate if
// none do). Stops early after 20 iterations without improving on the best
// qualified iterate; stall counting starts once one qualifies.
UnitFrame alternating_projection(const UnitFrame& frame, double target_mu, int iters,
                                 bool require_tight);

// Snap every off-diagonal Gram phase to the nearest q-th root of unity, then
// spectral-project back to rank d and renormalize. No improvement contract;
// callers compare coherence themselves. Complex frames only.
UnitFrame phase_quantize(const UnitFrame& frame, int q);

// For each vector attaining the coherence whose max-angle neighbor set fails
// to span F^d: nudge it by t * v, v a unit vector orthogonal to the neighbor
// span (random in that null space, sign-aligned with the vector), over a
// geometric grid of t from `step` down, keeping the first t that strictly
// lowers that vector's own largest inner-product modulus. Coherence is
// non-increasing; returns the best frame seen (possibly the input).
UnitFrame perturb_escape(const UnitFrame& frame, int trials, double step,
                         std::uint64_t rng_seed);

}  // namespace projpack::optimizer
