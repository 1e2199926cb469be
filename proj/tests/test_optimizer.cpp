#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "projpack/analysis.hpp"
#include "projpack/constructions.hpp"
#include "projpack/errors.hpp"
#include "projpack/frame.hpp"
#include "projpack/optimizer.hpp"
#include "projpack/packing_io.hpp"

using namespace projpack;
using namespace projpack::optimizer;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;

namespace {

UnitFrame random_frame(int d, int n, Field field, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> gauss;
  MatrixXcd x(d, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < d; ++i)
      x(i, j) = std::complex<double>(gauss(eng), field.is_real() ? 0.0 : gauss(eng));
  return UnitFrame(field, std::move(x), UnitFrame::kDefaultNormTol, true);
}

// tangent direction at the frame: random ambient matrix minus its radial part
MatrixXcd random_tangent(const UnitFrame& f, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> gauss;
  MatrixXcd v(f.d(), f.n());
  for (int j = 0; j < f.n(); ++j)
    for (int i = 0; i < f.d(); ++i)
      v(i, j) =
          std::complex<double>(gauss(eng), f.field().is_real() ? 0.0 : gauss(eng));
  const MatrixXcd& x = f.vectors();
  for (int j = 0; j < f.n(); ++j)
    v.col(j) -= x.col(j) * x.col(j).dot(v.col(j)).real();
  return v / v.norm();
}

// central difference of the ambient surrogate; the loose norm tolerance lets
// the probe leave the sphere by O(h)
double directional_fd(const UnitFrame& f, const MatrixXcd& v, double beta, double h) {
  const auto at = [&](double t) {
    MatrixXcd y = f.vectors() + t * v;
    return smoothed_coherence(UnitFrame(f.field(), std::move(y), 1e-2), beta);
  };
  return (at(h) - at(-h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("smoothed coherence closed form on an orthonormal basis") {
  const UnitFrame eye(Field::complex(), MatrixXcd::Identity(3, 3));
  // all pairs vanish: value reduces to sqrt(log(#pairs)/beta)
  for (const double beta : {10.0, 100.0, 5000.0})
    CHECK(smoothed_coherence(eye, beta) ==
          doctest::Approx(std::sqrt(std::log(3.0) / beta)).epsilon(1e-12));
}

TEST_CASE("smoothed coherence sandwiches the true coherence") {
  for (int trial = 0; trial < 6; ++trial) {
    const Field field = trial % 2 ? Field::real() : Field::complex();
    const UnitFrame f = random_frame(3, 8, field, 100 + trial);
    const double mu = coherence(f);
    const double pairs = 8.0 * 7.0 / 2.0;
    for (const double beta : {10.0, 1000.0}) {
      const double s = smoothed_coherence(f, beta);
      CHECK(s >= mu - 1e-12);
      CHECK(s * s <= mu * mu + std::log(pairs) / beta + 1e-12);
    }
  }
}

TEST_CASE("smoothed coherence approaches the coherence as beta grows") {
  const UnitFrame s3 = constructions::simplex(3, Field::complex());
  CHECK(smoothed_coherence(s3, 1e6) == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("analytic gradient matches central finite differences") {
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Field field = trial % 2 ? Field::real() : Field::complex();
    const int d = 2 + trial % 3;
    const int n = d + 2 + trial % 5;
    const UnitFrame f = random_frame(d, n, field, 7000 + trial);
    for (const double beta : {10.0, 1000.0}) {
      const MatrixXcd grad = smoothed_coherence_grad(f, beta);
      const MatrixXcd v = random_tangent(f, 9000 + trial);
      const double analytic = (grad.adjoint() * v).trace().real();
      const double fd = directional_fd(f, v, beta, 1e-6);
      const double denom = std::max(std::abs(analytic), 1e-10);
      CHECK(std::abs(fd - analytic) / denom < 1e-5);
      ++checked;
    }
  }
  CHECK(checked == 40);
}

TEST_CASE("descent round does not increase the surrogate") {
  SolverConfig cfg;
  cfg.d = 3;
  cfg.n = 8;
  cfg.max_iters_per_round = 50;
  for (int trial = 0; trial < 4; ++trial) {
    const Field field = trial % 2 ? Field::real() : Field::complex();
    cfg.field = field;
    const UnitFrame f = random_frame(3, 8, field, 42 + trial);
    const double before = smoothed_coherence(f, 200.0);
    const UnitFrame g = descent_round(f, 200.0, cfg);
    CHECK(smoothed_coherence(g, 200.0) <= before + 1e-15);
    CHECK(g.field() == field);
    if (field.is_real()) CHECK(g.vectors().imag().isZero(0.0));
  }
}

TEST_CASE("alternating projection recovers a slightly perturbed simplex") {
  const UnitFrame s3 = constructions::simplex(3, Field::complex());
  std::mt19937_64 eng(5);
  std::normal_distribution<double> gauss;
  MatrixXcd x = s3.vectors();
  for (int j = 0; j < x.cols(); ++j)
    for (int i = 0; i < x.rows(); ++i)
      x(i, j) += 1e-3 * std::complex<double>(gauss(eng), gauss(eng));
  const UnitFrame start(Field::complex(), std::move(x), 1e-2, true);
  // the clip target 1/3 is approached linearly, so allow a loose landing zone
  const UnitFrame out = alternating_projection(start, 1.0 / 3.0, 500, false);
  CHECK(coherence(out) <= 1.0 / 3.0 + 1e-6);
}

TEST_CASE("alternating projection with require_tight outputs a tight frame") {
  const UnitFrame start = random_frame(3, 6, Field::complex(), 17);
  const UnitFrame out = alternating_projection(start, 0.5, 300, true);
  const TightnessResult t = is_tight(out, 1e-6);
  CHECK(t.tight);
  CHECK(t.residual <= 1e-6);
}

TEST_CASE("alternating projection validates its arguments") {
  const UnitFrame f = random_frame(2, 4, Field::complex(), 3);
  CHECK_THROWS_AS(alternating_projection(f, 0.0, 10, false), ValidationError);
  CHECK_THROWS_AS(alternating_projection(f, 1.5, 10, false), ValidationError);
  CHECK_THROWS_AS(alternating_projection(f, 0.5, 0, false), ValidationError);
}

TEST_CASE("anneal reaches the simplex optimum at (2,3) over R") {
  SolverConfig cfg;
  cfg.d = 2;
  cfg.n = 3;
  cfg.field = Field::real();
  cfg.restarts = 8;
  cfg.seed = 1;
  const SolveResult res = anneal(cfg);
  CHECK(res.best_coherence <= 0.5 + 1e-5);
  CHECK(res.gap_to_bound >= -1e-10);
  CHECK(res.per_restart_coherences.size() == 8);
  CHECK(res.best_frame.field() == Field::real());
  CHECK(res.certificate.coherence == doctest::Approx(res.best_coherence));
}

TEST_CASE("anneal with identical seeds is bit-for-bit deterministic") {
  SolverConfig cfg;
  cfg.d = 2;
  cfg.n = 4;
  cfg.field = Field::complex();
  cfg.restarts = 6;
  cfg.seed = 99;
  cfg.beta_rounds = 6;
  cfg.max_iters_per_round = 300;
  const SolveResult a = anneal(cfg);
  const SolveResult b = anneal(cfg);
  REQUIRE(a.per_restart_coherences.size() == b.per_restart_coherences.size());
  for (std::size_t i = 0; i < a.per_restart_coherences.size(); ++i)
    CHECK(a.per_restart_coherences[i] == b.per_restart_coherences[i]);
  CHECK(a.best_coherence == b.best_coherence);
  CHECK(a.iterations_used == b.iterations_used);
  CHECK(a.best_coherence <= std::sqrt(1.0 / 3.0) + 1e-3);
}

TEST_CASE("anneal short-circuits n <= d to an orthonormal section") {
  SolverConfig cfg;
  cfg.d = 4;
  cfg.n = 3;
  cfg.restarts = 5;
  const SolveResult res = anneal(cfg);
  CHECK(res.best_coherence == 0.0);
  CHECK(res.iterations_used == 0);
  CHECK(res.per_restart_coherences == std::vector<double>(5, 0.0));
  CHECK(res.gap_to_bound == 0.0);
}

TEST_CASE("anneal honors require_tight") {
  SolverConfig cfg;
  cfg.d = 3;
  cfg.n = 5;
  cfg.field = Field::complex();
  cfg.restarts = 4;
  cfg.seed = 11;
  cfg.beta_rounds = 8;
  cfg.require_tight = true;
  const SolveResult res = anneal(cfg);
  CHECK(is_tight(res.best_frame, 1e-6).tight);
}

TEST_CASE("warm start seeds restart zero") {
  const UnitFrame etf =
      io::load_packing_file(std::string(PROJPACK_DATA_DIR) + "/etf-3-9.txt");
  SolverConfig cfg;
  cfg.d = 3;
  cfg.n = 9;
  cfg.field = Field::complex();
  cfg.restarts = 1;
  cfg.seed = 2;
  cfg.beta_rounds = 4;
  cfg.max_iters_per_round = 200;
  const SolveResult res = anneal(cfg, etf);
  // the warm start is already optimal; the search must not lose it
  CHECK(res.best_coherence <= 0.5 + 1e-6);

  SolverConfig other = cfg;
  other.n = 8;
  CHECK_THROWS_AS(anneal(other, etf), ValidationError);
}

TEST_CASE("phase quantization is the identity on matching gram phases") {
  // the shipped (3,9) packing has gram phases at sixth roots of unity
  const UnitFrame etf =
      io::load_packing_file(std::string(PROJPACK_DATA_DIR) + "/etf-3-9.txt");
  const UnitFrame q = phase_quantize(etf, 6);
  CHECK(coherence(q) == doctest::Approx(coherence(etf)).epsilon(1e-10));

  CHECK_THROWS_AS(phase_quantize(etf, 0), ValidationError);
  CHECK_THROWS_AS(phase_quantize(constructions::simplex(3, Field::real()), 2),
                  ValidationError);
}

TEST_CASE("perturbation escape lowers a non-spanning max pair") {
  // e1, e2, (e1+e2)/sqrt(2) sitting inside R^3: every neighbor set misses e3
  MatrixXd x(3, 3);
  const double s = 1.0 / std::sqrt(2.0);
  x << 1, 0, s, 0, 1, s, 0, 0, 0;
  const UnitFrame f = UnitFrame::from_real(x);
  const UnitFrame out = perturb_escape(f, 8, 0.2, 123);
  CHECK(coherence(out) < s - 1e-4);

  // duplicated vector in R^2
  MatrixXd dup(2, 2);
  dup << 1, 1, 0, 0;
  const UnitFrame out2 = perturb_escape(UnitFrame::from_real(dup), 8, 0.2, 5);
  CHECK(coherence(out2) < 1.0 - 1e-6);
}

TEST_CASE("perturbation escape leaves spanning neighbor sets alone") {
  const UnitFrame s2 = constructions::simplex(2, Field::real());
  const UnitFrame out = perturb_escape(s2, 8, 0.2, 7);
  CHECK(out.vectors() == s2.vectors());
}

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.restarts = 0;
  CHECK_THROWS_AS(validate(cfg), ValidationError);
  cfg = SolverConfig{};
  cfg.beta_growth = 1.0;
  CHECK_THROWS_AS(validate(cfg), ValidationError);
  cfg = SolverConfig{};
  cfg.ap_shrink = 1.0;
  CHECK_THROWS_AS(validate(cfg), ValidationError);
  cfg = SolverConfig{};
  cfg.phase_quantize_q = 3;
  cfg.field = Field::real();
  CHECK_THROWS_AS(validate(cfg), ValidationError);
}

TEST_CASE("config text round-trips every key") {
  const SolverConfig cfg = parse_config_text(
      "# solver schedule\n"
      "d = 5\n"
      "n = 7\n"
      "field = C\n"
      "restarts = 16\n"
      "seed = 42\n"
      "beta_init = 25.0\n"
      "beta_growth = 3.0\n"
      "beta_rounds = 9\n"
      "max_iters_per_round = 500\n"
      "step_init = 0.05\n"
      "grad_tol = 1e-10\n"
      "ap_enabled = false\n"
      "ap_shrink = 0.9\n"
      "require_tight = true\n"
      "phase_quantize_q = 4\n"
      "perturb_escape_enabled = 1\n");
  CHECK(cfg.d == 5);
  CHECK(cfg.n == 7);
  CHECK(cfg.field == Field::complex());
  CHECK(cfg.restarts == 16);
  CHECK(cfg.seed == 42);
  CHECK(cfg.beta_init == 25.0);
  CHECK(cfg.beta_growth == 3.0);
  CHECK(cfg.beta_rounds == 9);
  CHECK(cfg.max_iters_per_round == 500);
  CHECK(cfg.step_init == 0.05);
  CHECK(cfg.grad_tol == 1e-10);
  CHECK_FALSE(cfg.ap_enabled);
  CHECK(cfg.ap_shrink == 0.9);
  CHECK(cfg.require_tight);
  REQUIRE(cfg.phase_quantize_q.has_value());
  CHECK(*cfg.phase_quantize_q == 4);
  CHECK(cfg.perturb_escape_enabled);
}

TEST_CASE("config parser rejects malformed input with line numbers") {
  const auto line_of = [](const std::string& text) {
    try {
      parse_config_text(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("d = 2\nwhat = 3\n") == 2);       // unknown key
  CHECK(line_of("d two\n") == 1);                 // no '='
  CHECK(line_of("\n\nn = x\n") == 3);             // bad value
  CHECK(line_of("field = H\n") == 1);             // bad field
  CHECK(line_of("ap_enabled = maybe\n") == 1);    // bad bool
  // out-of-range values fail the post-parse validation instead
  CHECK_THROWS_AS(parse_config_text("restarts = 0\n"), ValidationError);
  CHECK_THROWS_AS(load_config_file("/nonexistent/projpack.conf"), IoError);
}
