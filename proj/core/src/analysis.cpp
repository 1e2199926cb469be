#include "projpack/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "projpack/errors.hpp"

namespace projpack {

GramMatrix gram(const UnitFrame& frame) {
  const Eigen::MatrixXcd& v = frame.vectors();
  const int n = frame.n();
  Eigen::MatrixXcd g(n, n);
  for (int j = 0; j < n; ++j) {
    g(j, j) = 1.0;
    for (int k = j + 1; k < n; ++k) {
      const std::complex<double> ip = v.col(j).adjoint() * v.col(k);
      g(j, k) = ip;
      g(k, j) = std::conj(ip);
    }
  }
  return GramMatrix{std::move(g)};
}

double coherence(const GramMatrix& g) {
  const int n = g.n();
  if (n < 2) throw ValidationError("coherence requires n >= 2, got n=" + std::to_string(n));
  double mu = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) mu = std::max(mu, std::abs(g.entries(j, k)));
  return mu;
}

double coherence(const UnitFrame& frame) {
  if (frame.n() < 2)
    throw ValidationError("coherence requires n >= 2, got n=" + std::to_string(frame.n()));
  return coherence(gram(frame));
}

AngleProfile angle_profile(const UnitFrame& frame, double cluster_tol) {
  if (frame.n() < 2) throw ValidationError("angle_profile requires n >= 2");
  if (cluster_tol < 0.0) throw ValidationError("cluster_tol must be nonnegative");
  const GramMatrix g = gram(frame);
  const int n = g.n();
  std::vector<double> sq;
  sq.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) sq.push_back(std::norm(g.entries(j, k)));
  std::sort(sq.begin(), sq.end());

  AngleProfile p;
  p.cluster_tol = cluster_tol;
  std::size_t i = 0;
  while (i < sq.size()) {
    std::size_t begin = i;
    double sum = sq[i];
    while (i + 1 < sq.size() && sq[i + 1] - sq[i] <= cluster_tol) {
      ++i;
      sum += sq[i];
    }
    ++i;
    p.values.push_back(sum / static_cast<double>(i - begin));
    p.counts.push_back(static_cast<std::int64_t>(i - begin));
  }
  return p;
}

TightnessResult is_tight(const UnitFrame& frame, double tol) {
  const int d = frame.d();
  const int n = frame.n();
  if (n < d) return {false, std::numeric_limits<double>::infinity()};
  const double target = static_cast<double>(n) / d;
  Eigen::VectorXd evs;
  if (frame.field().is_real()) {
    const Eigen::MatrixXd v = frame.real_vectors();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v * v.transpose(),
                                                      Eigen::EigenvaluesOnly);
    evs = es.eigenvalues();
  } else {
    const Eigen::MatrixXcd& v = frame.vectors();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(v * v.adjoint(),
                                                       Eigen::EigenvaluesOnly);
    evs = es.eigenvalues();
  }
  const double residual = (evs.array() - target).abs().maxCoeff() / target;
  return {residual <= tol, residual};
}

bool is_equiangular(const UnitFrame& frame, double tol) {
  if (frame.n() < 2) throw ValidationError("is_equiangular requires n >= 2");
  const GramMatrix g = gram(frame);
  const int n = g.n();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      const double a = std::abs(g.entries(j, k));
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  return hi - lo <= tol;
}

bool spans(const UnitFrame& frame, double tol) {
  if (frame.n() < frame.d()) return false;
  Eigen::VectorXd sv;
  if (frame.field().is_real()) {
    sv = frame.real_vectors().jacobiSvd().singularValues();
  } else {
    sv = frame.vectors().jacobiSvd().singularValues();
  }
  // singularValues() is sorted descending; sv has min(d,n) = d entries here
  return sv(frame.d() - 1) > tol * sv(0);
}

}  // namespace projpack
