#include "projpack/constructions.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "projpack/analysis.hpp"
#include "projpack/errors.hpp"

namespace projpack::constructions {

namespace {

bool is_prime(int d) {
  if (d < 2) return false;
  for (int p = 2; static_cast<long long>(p) * p <= d; ++p)
    if (d % p == 0) return false;
  return true;
}

// phase-normalize each column so its first non-negligible entry is positive
// real; entries below the threshold are treated as zero
void normalize_column_phases(Eigen::MatrixXcd& m, double zero_tol = 1e-9) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const std::complex<double> v = m(i, j);
      if (std::abs(v) > zero_tol) {
        m.col(j) *= std::conj(v) / std::abs(v);
        break;
      }
    }
  }
}

}  // namespace

std::string default_note(ConstructionKind kind) {
  switch (kind) {
    case ConstructionKind::Simplex: return "etf";
    case ConstructionKind::MubMaximal: return "mub";
    case ConstructionKind::NaimarkComplement: return "naimark";
    case ConstructionKind::ConjectureC3N5: return "c3n5";
    case ConstructionKind::Removal: return "AUTO";
  }
  return "etf";
}

UnitFrame simplex(int d, Field field) {
  if (d < 1) throw ValidationError("simplex requires d >= 1");
  const int n = d + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  m.array() -= 1.0 / n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  // eigenvalues ascending: one 0 (the all-ones direction), then d ones
  const Eigen::MatrixXd u = es.eigenvectors().rightCols(d);
  Eigen::MatrixXd phi(d, n);
  for (int j = 0; j < n; ++j) phi.col(j) = u.row(j).transpose() / u.row(j).norm();
  if (field.is_real()) return UnitFrame::from_real(std::move(phi));
  Eigen::MatrixXcd z(d, n);
  z.real() = phi;
  z.imag().setZero();
  return UnitFrame(field, std::move(z));
}

UnitFrame mub_maximal(int d) {
  if (!is_prime(d))
    throw ValidationError("mub_maximal supports prime d only, got d=" + std::to_string(d));
  const int n = d * (d + 1);
  Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(d, n);

  if (d == 2) {
    const double s = 1.0 / std::sqrt(2.0);
    const std::complex<double> i1(0.0, 1.0);
    phi.col(0) << 1.0, 0.0;
    phi.col(1) << 0.0, 1.0;
    phi.col(2) << s, s;
    phi.col(3) << s, -s;
    phi.col(4) << s, s * i1;
    phi.col(5) << s, -s * i1;
    return UnitFrame(Field::complex(), std::move(phi));
  }

  phi.leftCols(d) = Eigen::MatrixXcd::Identity(d, d);
  const double invsq = 1.0 / std::sqrt(static_cast<double>(d));
  const double step = 2.0 * std::numbers::pi / d;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const int col = d + a * d + b;
      for (int k = 0; k < d; ++k) {
        const long long e = (static_cast<long long>(a) * k * k + static_cast<long long>(b) * k) % d;
        phi(k, col) = std::polar(invsq, step * static_cast<double>(e));
      }
    }
  return UnitFrame(Field::complex(), std::move(phi));
}

UnitFrame naimark_complement(const UnitFrame& frame) {
  const int d = frame.d();
  const int n = frame.n();
  if (n == d)
    throw ValidationError("naimark_complement of a basis is empty (n = d)");
  if (n < d) throw ApplicabilityError("naimark_complement requires n > d");
  const TightnessResult t = is_tight(frame, 1e-8);
  if (!t.tight)
    throw ApplicabilityError("naimark_complement requires a tight frame; residual = " +
                             std::to_string(t.residual));
  const double scale = std::sqrt(static_cast<double>(d) / n);

  if (frame.field().is_real()) {
    const Eigen::MatrixXd a = scale * frame.real_vectors();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    // right singular vectors beyond the d-th span the null space of a
    Eigen::MatrixXd b = svd.matrixV().rightCols(n - d).transpose();
    for (int j = 0; j < n; ++j) {
      b.col(j) /= b.col(j).norm();
      for (int i = 0; i < n - d; ++i) {
        if (std::abs(b(i, j)) > 1e-9) {
          if (b(i, j) < 0.0) b.col(j) = -b.col(j);
          break;
        }
      }
    }
    return UnitFrame::from_real(std::move(b));
  }

  const Eigen::MatrixXcd a = scale * frame.vectors();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
  Eigen::MatrixXcd b = svd.matrixV().rightCols(n - d).adjoint();
  for (int j = 0; j < n; ++j) b.col(j) /= b.col(j).norm();
  normalize_column_phases(b);
  return UnitFrame(frame.field(), std::move(b));
}

UnitFrame conjecture_c3n5() {
  const double r13 = std::sqrt(13.0);
  const double a = (r13 + std::sqrt(2.0 + r13) - 1.0) / (3.0 * std::sqrt(3.0));
  const double b = std::sqrt((1.0 - a * a) / 2.0);
  const double c = 1.0 / std::sqrt(3.0);
  const std::complex<double> w(-0.5, std::sqrt(3.0) / 2.0);
  const std::complex<double> w2 = std::conj(w);

  Eigen::MatrixXcd phi(3, 5);
  phi << a, b, b, c, c,
         b, a, b, c * w, c * w2,
         b, b, a, c * w2, c * w;
  return UnitFrame(Field::complex(), std::move(phi), 1e-14);
}

UnitFrame remove_vector(const UnitFrame& frame, int j) {
  const int n = frame.n();
  if (n < 2) throw ValidationError("remove_vector requires n >= 2");
  if (j < 1 || j > n)
    throw ValidationError("remove_vector index " + std::to_string(j) +
                          " out of range 1.." + std::to_string(n));
  Eigen::MatrixXcd m(frame.d(), n - 1);
  m.leftCols(j - 1) = frame.vectors().leftCols(j - 1);
  m.rightCols(n - j) = frame.vectors().rightCols(n - j);
  return UnitFrame(frame.field(), std::move(m), frame.norm_tol());
}

std::pair<UnitFrame, int> best_removal(const UnitFrame& frame) {
  const int n = frame.n();
  if (n < 3) throw ValidationError("best_removal requires n >= 3");
  const GramMatrix g = gram(frame);
  int best_j = 1;
  double best_mu = std::numeric_limits<double>::infinity();
  for (int r = 0; r < n; ++r) {
    double mu = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == r) continue;
      for (int k = j + 1; k < n; ++k) {
        if (k == r) continue;
        mu = std::max(mu, std::abs(g.entries(j, k)));
      }
    }
    if (mu < best_mu) {
      best_mu = mu;
      best_j = r + 1;
    }
  }
  return {remove_vector(frame, best_j), best_j};
}

}  // namespace projpack::constructions
