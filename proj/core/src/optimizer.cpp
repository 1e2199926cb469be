#include "projpack/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "projpack/bounds.hpp"
#include "projpack/errors.hpp"

namespace projpack::optimizer {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using std::complex;

std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic Gaussian stream. Box-Muller on explicitly constructed
// uniforms instead of std::normal_distribution, whose output sequence is
// implementation-defined; this keeps (seed, restart) -> init exact per
// platform and stable across standard libraries.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

  double next() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    const double u1 = uniform01();  // in (0, 1], log is safe
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    have_ = true;
    return r * std::cos(th);
  }

 private:
  double uniform01() {
    return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 eng_;
  bool have_ = false;
  double spare_ = 0.0;
};

std::uint64_t restart_seed(std::uint64_t seed, int restart) {
  std::uint64_t s = seed;
  std::uint64_t z = splitmix64(s);
  s = z ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(restart + 1));
  return splitmix64(s);
}

MatrixXcd random_init(int d, int n, bool real_field, std::uint64_t seed) {
  GaussianStream g(seed);
  MatrixXcd x(d, n);
  for (int j = 0; j < n; ++j) {
    double nrm = 0.0;
    do {
      for (int i = 0; i < d; ++i) {
        const double re = g.next();
        const double im = real_field ? 0.0 : g.next();
        x(i, j) = complex<double>(re, im);
      }
      nrm = x.col(j).norm();
    } while (nrm < 1e-12);
    x.col(j) /= nrm;
  }
  return x;
}

double mu_of(const MatrixXcd& x) {
  const int n = static_cast<int>(x.cols());
  if (n < 2) return 0.0;
  const MatrixXcd g = x.adjoint() * x;
  double mu = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) mu = std::max(mu, std::abs(g(j, k)));
  return mu;
}

struct Surrogate {
  double f = 0.0;   // sqrt of the log-sum-exp value
  double mu = 0.0;  // exact coherence, free by-product of the same Gram
};

Surrogate eval_surrogate(const MatrixXcd& x, double beta) {
  const int n = static_cast<int>(x.cols());
  const MatrixXcd g = x.adjoint() * x;
  double maxsq = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) maxsq = std::max(maxsq, std::norm(g(j, k)));
  double s = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) s += std::exp(beta * (std::norm(g(j, k)) - maxsq));
  const double fsq = maxsq + std::log(s) / beta;  // s >= 1, so fsq >= maxsq >= 0
  return {std::sqrt(fsq), std::sqrt(maxsq)};
}

// ambient gradient of the sqrt-log-sum-exp surrogate: X (W o G) / f with
// softmax pair weights W (zero diagonal); zero when the surrogate vanishes
MatrixXcd surrogate_grad(const MatrixXcd& x, double beta) {
  const int n = static_cast<int>(x.cols());
  const MatrixXcd g = x.adjoint() * x;
  double maxsq = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) maxsq = std::max(maxsq, std::norm(g(j, k)));
  double s = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) s += std::exp(beta * (std::norm(g(j, k)) - maxsq));
  const double fsq = maxsq + std::log(s) / beta;
  const double f = std::sqrt(fsq);
  if (!(f > 1e-150)) return MatrixXcd::Zero(x.rows(), n);
  MatrixXcd m = MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      const double w = std::exp(beta * (std::norm(g(j, k)) - maxsq)) / s;
      m(j, k) = w * g(j, k);
    }
  return x * m / f;
}

void project_to_tangent(const MatrixXcd& x, MatrixXcd& grad) {
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    grad.col(j) -= x.col(j) * x.col(j).dot(grad.col(j)).real();
}

void renormalize_columns(MatrixXcd& x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j) x.col(j) /= x.col(j).norm();
}

struct BestIterate {
  double mu = std::numeric_limits<double>::infinity();
  MatrixXcd x;

  void offer(double candidate_mu, const MatrixXcd& candidate) {
    if (candidate_mu < mu) {
      mu = candidate_mu;
      x = candidate;
    }
  }
};

// one fixed-beta round of projected gradient descent with backtracking;
// returns iterations spent, sets aborted on non-finite arithmetic (x keeps
// its last finite value in that case)
int descent_inner(MatrixXcd& x, double beta, const SolverConfig& cfg,
                  BestIterate& best, bool& aborted) {
  Surrogate cur = eval_surrogate(x, beta);
  if (!std::isfinite(cur.f)) {
    aborted = true;
    return 0;
  }
  best.offer(cur.mu, x);
  double step = cfg.step_init;
  int it = 0;
  for (; it < cfg.max_iters_per_round; ++it) {
    MatrixXcd t = surrogate_grad(x, beta);
    if (!t.allFinite()) {
      aborted = true;
      break;
    }
    project_to_tangent(x, t);
    const double gn = t.norm();
    if (gn <= cfg.grad_tol) break;

    bool moved = false;
    double s = step;
    while (s > 1e-18) {
      MatrixXcd cand = x - s * t;
      renormalize_columns(cand);  // column norms >= 1 before renorm: t _|_ x
      const Surrogate cev = eval_surrogate(cand, beta);
      if (std::isfinite(cev.f) && cev.f < cur.f) {
        x = std::move(cand);
        cur = cev;
        best.offer(cev.mu, x);
        step = 2.0 * s;
        moved = true;
        break;
      }
      s *= 0.5;
    }
    if (!moved) break;  // stationary at this beta
  }
  return it;
}

double tight_residual(const MatrixXcd& x, int d) {
  const int n = static_cast<int>(x.cols());
  if (n < d) return std::numeric_limits<double>::infinity();
  const double target = static_cast<double>(n) / d;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(x * x.adjoint(), Eigen::EigenvaluesOnly);
  return (es.eigenvalues().array() - target).abs().maxCoeff() / target;
}

// shared spectral step: top-d eigenpairs of a Hermitian Gram, eigenvalues
// replaced by n/d when tight is requested, factor re-extracted row-exactly
// real for Real frames
MatrixXcd spectral_factor(const MatrixXcd& g, int d, int n, bool real_field,
                          bool force_tight) {
  const int keep = std::min(d, n);
  Eigen::VectorXd lam(keep);
  MatrixXcd v(n, keep);
  if (real_field) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(g.real());
    lam = es.eigenvalues().tail(keep);
    v.real() = es.eigenvectors().rightCols(keep);
    v.imag().setZero();
  } else {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(g);
    lam = es.eigenvalues().tail(keep);
    v = es.eigenvectors().rightCols(keep);
  }
  MatrixXcd x = MatrixXcd::Zero(d, n);
  for (int i = 0; i < keep; ++i) {
    const double l = force_tight ? static_cast<double>(n) / d : std::max(lam(i), 0.0);
    x.row(i) = std::sqrt(l) * v.col(i).adjoint();
  }
  return x;
}

struct ApOutcome {
  MatrixXcd x;
  double mu = std::numeric_limits<double>::infinity();
};

ApOutcome ap_matrix(const MatrixXcd& start, int d, bool real_field, double target_mu,
                    int iters, bool require_tight) {
  const int n = static_cast<int>(start.cols());
  MatrixXcd cur = start;
  BestIterate best;
  bool have_qualified = false;
  if (!require_tight || tight_residual(start, d) <= 1e-6) {
    best.offer(mu_of(start), start);
    have_qualified = true;
  }
  int since_improve = 0;
  for (int it = 0; it < iters; ++it) {
    MatrixXcd g = cur.adjoint() * cur;
    for (int j = 0; j < n; ++j) {
      g(j, j) = 1.0;
      for (int k = j + 1; k < n; ++k) {
        const double m = std::abs(g(j, k));
        if (m > target_mu) {
          g(j, k) *= target_mu / m;
          g(k, j) = std::conj(g(j, k));
        }
      }
    }
    MatrixXcd next = spectral_factor(g, d, n, real_field, require_tight);
    bool degenerate = false;
    for (int j = 0; j < n; ++j) {
      const double nrm = next.col(j).norm();
      if (nrm < 1e-12) {
        degenerate = true;
        break;
      }
      next.col(j) /= nrm;
    }
    if (degenerate || !next.allFinite()) break;

    const double mu = mu_of(next);
    const bool qualifies = !require_tight || tight_residual(next, d) <= 1e-6;
    bool improved = false;
    if (qualifies && (!have_qualified || mu < best.mu)) {
      best.offer(mu, next);  // accepts: best.mu is +inf until first qualified iterate
      have_qualified = true;
      improved = true;
    }
    // stall counting starts once a qualified iterate exists; before that the
    // sweep is still searching for feasibility and must not stop early
    since_improve = improved ? 0 : (have_qualified ? since_improve + 1 : 0);
    cur = std::move(next);
    if (since_improve >= 20) break;
  }
  if (!have_qualified) return {cur, mu_of(cur)};
  return {best.x, best.mu};
}

// nearest-FUNTF polish: scale by the inverse square root of the frame
// operator (making Phi Phi^H exactly (n/d) I), renormalize columns, repeat
MatrixXcd funtf_project(MatrixXcd x, int d, double target_residual, int max_iters) {
  const int n = static_cast<int>(x.cols());
  if (n < d) return x;
  const double ratio = static_cast<double>(n) / d;
  const bool real_field = x.imag().isZero(0.0);
  for (int it = 0; it < max_iters; ++it) {
    if (tight_residual(x, d) <= target_residual) break;
    if (real_field) {
      Eigen::SelfAdjointEigenSolver<MatrixXd> es((x * x.adjoint()).real());
      Eigen::VectorXd lam = es.eigenvalues().cwiseMax(1e-12);
      const MatrixXd q = es.eigenvectors();
      const MatrixXd scale =
          q * (ratio * lam.array().inverse()).sqrt().matrix().asDiagonal() * q.transpose();
      MatrixXcd nx(d, n);
      nx.real() = scale * x.real();
      nx.imag().setZero();
      x = std::move(nx);
    } else {
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(x * x.adjoint());
      Eigen::VectorXd lam = es.eigenvalues().cwiseMax(1e-12);
      const MatrixXcd q = es.eigenvectors();
      x = q * (ratio * lam.array().inverse()).sqrt().matrix().asDiagonal().toDenseMatrix().cast<complex<double>>() *
          q.adjoint() * x;
    }
    renormalize_columns(x);
  }
  return x;
}

MatrixXcd perturb_matrix(MatrixXcd x, int d, bool real_field, int trials, double step,
                         std::uint64_t rng_seed) {
  const int n = static_cast<int>(x.cols());
  std::uint64_t s0 = rng_seed;
  for (int j = 0; j < n; ++j) {
    const MatrixXcd g = x.adjoint() * x;
    double mu = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) mu = std::max(mu, std::abs(g(a, b)));

    std::vector<int> neighbors;
    double cur_max = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double a = std::abs(g(j, k));
      cur_max = std::max(cur_max, a);
      if (a >= mu - 1e-8) neighbors.push_back(k);
    }
    if (neighbors.empty()) continue;

    MatrixXcd m(d, static_cast<int>(neighbors.size()));
    for (std::size_t c = 0; c < neighbors.size(); ++c) m.col(c) = x.col(neighbors[c]);

    // orthonormal basis of the orthogonal complement of the neighbor span
    MatrixXcd nullbasis;
    if (real_field) {
      Eigen::JacobiSVD<MatrixXd> svd(m.real(), Eigen::ComputeFullU);
      const auto& sv = svd.singularValues();
      int rank = 0;
      for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-8 * sv(0)) ++rank;
      if (rank >= d) continue;  // neighbors span F^d, no escape direction
      nullbasis = MatrixXcd::Zero(d, d - rank);
      nullbasis.real() = svd.matrixU().rightCols(d - rank);
    } else {
      Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeFullU);
      const auto& sv = svd.singularValues();
      int rank = 0;
      for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-8 * sv(0)) ++rank;
      if (rank >= d) continue;
      nullbasis = svd.matrixU().rightCols(d - rank);
    }

    GaussianStream rng(splitmix64(s0) ^ static_cast<std::uint64_t>(j + 1));
    Eigen::VectorXcd coeff(nullbasis.cols());
    for (Eigen::Index i = 0; i < coeff.size(); ++i) {
      const double re = rng.next();
      const double im = real_field ? 0.0 : rng.next();
      coeff(i) = complex<double>(re, im);
    }
    Eigen::VectorXcd v = nullbasis * coeff;
    const double vn = v.norm();
    if (vn < 1e-12) continue;
    v /= vn;
    if (v.dot(x.col(j)).real() < 0.0) v = -v;  // grow the norm along +t

    for (int tr = 0; tr < trials; ++tr) {
      const double t = step * std::pow(0.5, tr);
      Eigen::VectorXcd psi = x.col(j) + t * v;
      psi /= psi.norm();
      double new_max = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        new_max = std::max(new_max, std::abs(x.col(k).dot(psi)));
      }
      if (new_max < cur_max) {
        x.col(j) = psi;
        break;
      }
    }
  }
  return x;
}

struct RestartOutcome {
  double mu = std::numeric_limits<double>::infinity();
  MatrixXcd x;
  long long iters = 0;
  bool aborted = false;
};

RestartOutcome run_restart(const SolverConfig& cfg, int index, const MatrixXcd* warm) {
  const bool real_field = cfg.field.is_real();
  MatrixXcd x =
      warm ? *warm : random_init(cfg.d, cfg.n, real_field, restart_seed(cfg.seed, index));
  RestartOutcome out;
  BestIterate best;
  best.offer(mu_of(x), x);

  double beta = cfg.beta_init;
  bool aborted = false;
  for (int round = 0; round < cfg.beta_rounds; ++round) {
    out.iters += descent_inner(x, beta, cfg, best, aborted);
    if (aborted) break;

    if (cfg.ap_enabled && cfg.n > cfg.d) {
      for (int attempt = 0; attempt < 8; ++attempt) {
        const double cur_mu = mu_of(x);
        if (cur_mu <= 1e-12) break;
        const double target = std::min(std::max(cur_mu * cfg.ap_shrink, 1e-12), 1.0 - 1e-12);
        const ApOutcome ap = ap_matrix(x, cfg.d, real_field, target, 60, cfg.require_tight);
        if (ap.mu < cur_mu - 1e-15 && ap.x.allFinite()) {
          x = ap.x;
          best.offer(ap.mu, x);
        } else {
          break;
        }
      }
    }
    beta *= cfg.beta_growth;
  }

  if (cfg.perturb_escape_enabled && !aborted) {
    MatrixXcd escaped = perturb_matrix(best.x, cfg.d, real_field, 8,
                                       std::min(0.1, cfg.step_init),
                                       restart_seed(cfg.seed ^ 0x5bf0'3635ULL, index));
    best.offer(mu_of(escaped), escaped);
  }

  out.aborted = aborted;
  if (cfg.require_tight) {
    MatrixXcd tight = funtf_project(best.x, cfg.d, 1e-9, 4000);
    renormalize_columns(tight);
    out.x = std::move(tight);
    out.mu = mu_of(out.x);
  } else {
    out.x = best.x;
    out.mu = best.mu;
  }
  return out;
}

}  // namespace

void validate(const SolverConfig& cfg) {
  if (cfg.d < 1) throw ValidationError("solver config: d must be >= 1");
  if (cfg.n < 1) throw ValidationError("solver config: n must be >= 1");
  if (cfg.restarts < 1) throw ValidationError("solver config: restarts must be >= 1");
  if (!(cfg.beta_init > 0.0)) throw ValidationError("solver config: beta_init must be > 0");
  if (!(cfg.beta_growth > 1.0))
    throw ValidationError("solver config: beta_growth must be > 1");
  if (cfg.beta_rounds < 1) throw ValidationError("solver config: beta_rounds must be >= 1");
  if (cfg.max_iters_per_round < 1)
    throw ValidationError("solver config: max_iters_per_round must be >= 1");
  if (!(cfg.step_init > 0.0)) throw ValidationError("solver config: step_init must be > 0");
  if (!(cfg.grad_tol >= 0.0)) throw ValidationError("solver config: grad_tol must be >= 0");
  if (!(cfg.ap_shrink > 0.0 && cfg.ap_shrink < 1.0))
    throw ValidationError("solver config: ap_shrink must lie in (0, 1)");
  if (cfg.phase_quantize_q) {
    if (*cfg.phase_quantize_q < 1)
      throw ValidationError("solver config: phase_quantize_q must be >= 1");
    if (cfg.field.is_real())
      throw ValidationError("solver config: phase quantization needs a Complex field");
  }
}

double smoothed_coherence(const UnitFrame& frame, double beta) {
  if (!(beta > 0.0)) throw ValidationError("smoothed_coherence requires beta > 0");
  if (frame.n() < 2) throw ValidationError("smoothed_coherence requires n >= 2");
  return eval_surrogate(frame.vectors(), beta).f;
}

Eigen::MatrixXcd smoothed_coherence_grad(const UnitFrame& frame, double beta) {
  if (!(beta > 0.0)) throw ValidationError("smoothed_coherence requires beta > 0");
  if (frame.n() < 2) throw ValidationError("smoothed_coherence requires n >= 2");
  return surrogate_grad(frame.vectors(), beta);
}

UnitFrame descent_round(const UnitFrame& frame, double beta, const SolverConfig& cfg) {
  validate(cfg);
  if (!(beta > 0.0)) throw ValidationError("descent_round requires beta > 0");
  if (frame.n() < 2) return frame;
  MatrixXcd x = frame.vectors();
  BestIterate best;
  bool aborted = false;
  descent_inner(x, beta, cfg, best, aborted);
  renormalize_columns(x);
  return UnitFrame(frame.field(), std::move(x), frame.norm_tol());
}

UnitFrame alternating_projection(const UnitFrame& frame, double target_mu, int iters,
                                 bool require_tight) {
  if (!(target_mu > 0.0 && target_mu < 1.0))
    throw ValidationError("alternating_projection requires target_mu in (0, 1)");
  if (iters < 1) throw ValidationError("alternating_projection requires iters >= 1");
  ApOutcome out = ap_matrix(frame.vectors(), frame.d(), frame.field().is_real(),
                            target_mu, iters, require_tight);
  renormalize_columns(out.x);
  return UnitFrame(frame.field(), std::move(out.x), frame.norm_tol());
}

UnitFrame phase_quantize(const UnitFrame& frame, int q) {
  if (q < 1) throw ValidationError("phase_quantize requires q >= 1");
  if (frame.field().is_real())
    throw ValidationError(
        "phase_quantize supports Complex frames only; re-tag a real frame as Complex "
        "to quantize signs (q = 2)");
  const int n = frame.n();
  if (n < 2) return frame;
  MatrixXcd g = frame.vectors().adjoint() * frame.vectors();
  const double tau = 2.0 * std::numbers::pi;
  for (int j = 0; j < n; ++j) {
    g(j, j) = 1.0;
    for (int k = j + 1; k < n; ++k) {
      const double m = std::abs(g(j, k));
      if (m > 0.0) {
        const double theta = std::arg(g(j, k));
        const double snapped = std::round(theta * q / tau) * (tau / q);
        g(j, k) = std::polar(m, snapped);
        g(k, j) = std::conj(g(j, k));
      }
    }
  }
  MatrixXcd x = spectral_factor(g, frame.d(), n, false, false);
  for (int j = 0; j < n; ++j) {
    const double nrm = x.col(j).norm();
    if (nrm < 1e-12)
      throw ValidationError("phase_quantize produced a rank-deficient configuration");
    x.col(j) /= nrm;
  }
  return UnitFrame(frame.field(), std::move(x));
}

UnitFrame perturb_escape(const UnitFrame& frame, int trials, double step,
                         std::uint64_t rng_seed) {
  if (frame.n() < 2) throw ValidationError("perturb_escape requires n >= 2");
  if (trials < 1) throw ValidationError("perturb_escape requires trials >= 1");
  if (!(step > 0.0)) throw ValidationError("perturb_escape requires step > 0");
  // accepted columns are renormalized inside perturb_matrix; untouched
  // columns keep their exact bits so a no-op escape returns the input frame
  MatrixXcd x = perturb_matrix(frame.vectors(), frame.d(), frame.field().is_real(),
                               trials, step, rng_seed);
  return UnitFrame(frame.field(), std::move(x), frame.norm_tol());
}

SolveResult anneal(const SolverConfig& cfg) { return anneal(cfg, std::nullopt); }

SolveResult anneal(const SolverConfig& cfg, const std::optional<UnitFrame>& warm_start) {
  validate(cfg);
  if (cfg.n < 2) throw ValidationError("anneal requires n >= 2");
  if (warm_start) {
    if (warm_start->d() != cfg.d || warm_start->n() != cfg.n ||
        warm_start->field() != cfg.field)
      throw ValidationError("warm start frame does not match the configured (d, n, field)");
  }

  const auto finish = [&cfg](UnitFrame frame, std::vector<double> per_restart,
                             long long iters) {
    SolveResult res{std::move(frame), 0.0, Certificate{}, std::move(per_restart), iters, 0.0};
    res.best_coherence = coherence(res.best_frame);
    res.certificate = certify(res.best_frame, CertifyProfile::numerical());
    const double bound =
        cfg.d >= 2 ? bounds::best_lower_bound(cfg.d, cfg.n, cfg.field).best : 0.0;
    res.gap_to_bound = res.best_coherence - bound;
    return res;
  };

  if (cfg.n <= cfg.d) {
    // orthonormal section, globally optimal; no search needed
    MatrixXcd x = MatrixXcd::Identity(cfg.d, cfg.n);
    return finish(UnitFrame(cfg.field, std::move(x)),
                  std::vector<double>(cfg.restarts, 0.0), 0);
  }

  std::vector<RestartOutcome> outcomes(cfg.restarts);
  const MatrixXcd* warm = warm_start ? &warm_start->vectors() : nullptr;
  std::atomic<int> next{0};
  const unsigned hw = std::thread::hardware_concurrency();
  const int nthreads =
      std::min(cfg.restarts, static_cast<int>(std::max(1u, hw ? hw : 1u)));
  const auto worker = [&]() {
    for (int i = next.fetch_add(1); i < cfg.restarts; i = next.fetch_add(1))
      outcomes[i] = run_restart(cfg, i, i == 0 ? warm : nullptr);
  };
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  int winner = 0;
  long long iters = 0;
  std::vector<double> per_restart(cfg.restarts);
  for (int i = 0; i < cfg.restarts; ++i) {
    per_restart[i] = outcomes[i].mu;
    iters += outcomes[i].iters;
    if (outcomes[i].mu < outcomes[winner].mu) winner = i;
  }

  MatrixXcd bx = outcomes[winner].x;
  double bmu = outcomes[winner].mu;
  if (cfg.phase_quantize_q) {
    renormalize_columns(bx);
    UnitFrame candidate =
        phase_quantize(UnitFrame(cfg.field, bx), *cfg.phase_quantize_q);
    MatrixXcd qx = candidate.vectors();
    if (cfg.require_tight) qx = funtf_project(qx, cfg.d, 1e-9, 4000);
    renormalize_columns(qx);
    const double qmu = mu_of(qx);
    const bool tight_ok = !cfg.require_tight || tight_residual(qx, cfg.d) <= 1e-6;
    if (qmu < bmu && tight_ok) {
      bx = std::move(qx);
      bmu = qmu;
    }
  }
  renormalize_columns(bx);
  return finish(UnitFrame(cfg.field, std::move(bx)), std::move(per_restart), iters);
}

namespace {

std::string trim(std::string s) {
  const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && issp(s.front())) s.erase(s.begin());
  while (!s.empty() && issp(s.back())) s.pop_back();
  return s;
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError(line, "expected a boolean (true/false/1/0), got '" + v + "'");
}

}  // namespace

SolverConfig parse_config_text(std::string_view text) {
  SolverConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(lineno, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ParseError(lineno, "expected 'key = value', got '" + line + "'");
    try {
      if (key == "d") cfg.d = std::stoi(val);
      else if (key == "n") cfg.n = std::stoi(val);
      else if (key == "field") {
        if (val == "Real" || val == "R") cfg.field = Field::real();
        else if (val == "Complex" || val == "C") cfg.field = Field::complex();
        else throw ParseError(lineno, "unknown field '" + val + "' (use R or C)");
      }
      else if (key == "restarts") cfg.restarts = std::stoi(val);
      else if (key == "seed") cfg.seed = std::stoull(val);
      else if (key == "beta_init") cfg.beta_init = std::stod(val);
      else if (key == "beta_growth") cfg.beta_growth = std::stod(val);
      else if (key == "beta_rounds") cfg.beta_rounds = std::stoi(val);
      else if (key == "max_iters_per_round") cfg.max_iters_per_round = std::stoi(val);
      else if (key == "step_init") cfg.step_init = std::stod(val);
      else if (key == "grad_tol") cfg.grad_tol = std::stod(val);
      else if (key == "ap_enabled") cfg.ap_enabled = parse_bool(val, lineno);
      else if (key == "ap_shrink") cfg.ap_shrink = std::stod(val);
      else if (key == "require_tight") cfg.require_tight = parse_bool(val, lineno);
      else if (key == "phase_quantize_q") cfg.phase_quantize_q = std::stoi(val);
      else if (key == "perturb_escape_enabled")
        cfg.perturb_escape_enabled = parse_bool(val, lineno);
      else throw ParseError(lineno, "unknown solver config key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw ParseError(lineno, "cannot parse value '" + val + "' for key '" + key + "'");
    } catch (const std::out_of_range&) {
      throw ParseError(lineno, "value '" + val + "' out of range for key '" + key + "'");
    }
  }
  validate(cfg);
  return cfg;
}

SolverConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open solver config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace projpack::optimizer
