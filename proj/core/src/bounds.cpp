#include "projpack/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "num_format.hpp"
#include "projpack/errors.hpp"

namespace projpack::bounds {

namespace {

// continuous extensions used by the crossover search (x plays the role of n)
double gerzon_x(double x, Field field) {
  return field.is_real() ? x * (x + 1.0) / 2.0 : x * x;
}

double welch_x(int d, double x) { return std::sqrt((x - d) / (d * (x - 1.0))); }

double bukh_cox_x(int d, double x, Field field) {
  const double m = field.m();
  const double z = gerzon_x(x - d, field);
  const double denom = x * (1.0 + m * (x - d - 1.0) * std::sqrt(1.0 / m + x - d)) - z;
  return z / denom;
}

double levenstein_value(int d, int n, Field field) {
  const double m = field.m();
  return std::sqrt((n * (m + 1.0) - d * (m * d + 1.0)) / ((n - d) * (m * d + 1.0)));
}

constexpr double kTieTol = 1e-12;

}  // namespace

long long gerzon(int d, Field field) {
  if (d < 1) throw ValidationError("gerzon requires d >= 1");
  const long long dd = d;
  return field.is_real() ? dd * (dd + 1) / 2 : dd * dd;
}

double bukh_cox(int d, int n, Field field) {
  if (d < 2 || n <= d)
    throw ApplicabilityError("bukh_cox requires n > d >= 2, got d=" + std::to_string(d) +
                             " n=" + std::to_string(n));
  return bukh_cox_x(d, static_cast<double>(n), field);
}

double welch(int d, int n) {
  if (d < 1 || n <= d)
    throw ApplicabilityError("welch requires n > d >= 1, got d=" + std::to_string(d) +
                             " n=" + std::to_string(n));
  return welch_x(d, static_cast<double>(n));
}

double orthoplex(int d) {
  if (d < 2) throw ApplicabilityError("orthoplex requires d >= 2");
  return 1.0 / std::sqrt(static_cast<double>(d));
}

double levenstein(int d, int n, Field field) {
  if (d < 2) throw ApplicabilityError("levenstein requires d >= 2");
  const long long z = gerzon(d, field);
  if (n < z)
    throw ApplicabilityError("levenstein requires n >= Z(d,F) = " + std::to_string(z) +
                             ", got n=" + std::to_string(n));
  return levenstein_value(d, n, field);
}

double generalized_welch(int d, int n, int t) {
  if (d < 1 || n < 1 || t < 1)
    throw ValidationError("generalized_welch requires d, n, t >= 1");
  if (n < 2) return 0.0;
  double binom = 1.0;  // binom(d+t-1, t)
  for (int i = 1; i <= t; ++i) binom *= static_cast<double>(d - 1 + i) / i;
  const double val = (n / binom - 1.0) / (n - 1.0);
  if (val <= 0.0) return 0.0;
  return std::pow(val, 1.0 / (2.0 * t));
}

std::string bound_name_str(BoundName name) {
  switch (name) {
    case BoundName::BukhCox: return "BukhCox";
    case BoundName::Welch: return "Welch";
    case BoundName::Orthoplex: return "Orthoplex";
    case BoundName::Levenstein: return "Levenstein";
    case BoundName::None: return "None";
  }
  return "None";
}

BoundReport best_lower_bound(int d, int n, Field field) {
  if (d < 2 || n < 2)
    throw ValidationError("best_lower_bound requires d >= 2 and n >= 2");
  BoundReport r;
  r.d = d;
  r.n = n;
  r.field = field;

  if (n <= d) {
    const std::string why = "n <= d: orthonormal configurations attain coherence 0";
    r.bukh_cox.reason = r.welch.reason = why;
    r.orthoplex.reason = r.levenstein.reason = why;
    r.best = 0.0;
    r.best_name = BoundName::None;
    return r;
  }

  r.bukh_cox.value = bukh_cox(d, n, field);
  r.bukh_cox.applicable = true;
  r.welch.value = welch(d, n);
  r.welch.applicable = true;

  const long long z = gerzon(d, field);
  if (n > z) {
    r.orthoplex.value = orthoplex(d);
    r.orthoplex.applicable = true;
    r.levenstein.value = levenstein(d, n, field);
    r.levenstein.applicable = true;
  } else if (n == z) {
    r.orthoplex.reason = "requires n > Z(d,F) = " + std::to_string(z);
    // boundary case: formula evaluated for reference, excluded from gating
    r.levenstein.value = levenstein(d, n, field);
    r.levenstein.boundary = true;
    r.levenstein.reason = "boundary: n = Z(d,F) = " + std::to_string(z) +
                          "; evaluated outside Theorem gating";
  } else {
    const std::string why = "requires n > Z(d,F) = " + std::to_string(z);
    r.orthoplex.reason = why;
    r.levenstein.reason = why;
  }

  r.best = 0.0;
  const BoundValue* ordered[] = {&r.bukh_cox, &r.welch, &r.orthoplex, &r.levenstein};
  for (const BoundValue* b : ordered)
    if (b->applicable) r.best = std::max(r.best, *b->value);
  const BoundName names[] = {BoundName::BukhCox, BoundName::Welch, BoundName::Orthoplex,
                             BoundName::Levenstein};
  r.best_name = BoundName::None;
  for (int i = 0; i < 4; ++i) {
    if (ordered[i]->applicable && *ordered[i]->value >= r.best - kTieTol) {
      r.best_name = names[i];
      break;
    }
  }
  return r;
}

CrossoverReport dominance_crossovers(int d, Field field, int n_max) {
  if (d < 2) throw ValidationError("dominance_crossovers requires d >= 2");
  if (n_max <= d) throw ValidationError("dominance_crossovers requires n_max > d");
  CrossoverReport rep;

  // x = d+1 is always a root: both bounds equal 1/d at the simplex point.
  rep.bukh_cox_welch.push_back(static_cast<double>(d + 1));

  const auto f = [&](double x) { return bukh_cox_x(d, x, field) - welch_x(d, x); };
  const double lo = d + 1.0;
  const double hi = static_cast<double>(n_max);
  const double grid = 0.25;
  double a = lo + grid;
  double fa = f(a);
  for (double b = a + grid; a < hi; a = b, fa = f(a), b = std::min(b + grid, hi)) {
    if (b <= a) break;
    const double fb = f(b);
    if (fa == 0.0) {
      rep.bukh_cox_welch.push_back(a);
    } else if (fa * fb < 0.0) {
      double xa = a, xb = b;
      while (xb - xa > 1e-6) {
        const double mid = 0.5 * (xa + xb);
        const double fm = f(mid);
        if (fm == 0.0) { xa = xb = mid; break; }
        if (fa * fm < 0.0) xb = mid; else { xa = mid; fa = fm; }
      }
      rep.bukh_cox_welch.push_back(0.5 * (xa + xb));
    }
    if (b >= hi) break;
  }
  // drop duplicates from roots landing on grid points
  std::sort(rep.bukh_cox_welch.begin(), rep.bukh_cox_welch.end());
  rep.bukh_cox_welch.erase(
      std::unique(rep.bukh_cox_welch.begin(), rep.bukh_cox_welch.end(),
                  [](double x, double y) { return std::abs(x - y) < 1e-5; }),
      rep.bukh_cox_welch.end());

  const long long z = gerzon(d, field);
  const double orth = orthoplex(d);
  for (long long n = z + 1; n <= n_max; ++n) {
    if (levenstein_value(d, static_cast<int>(n), field) > orth) {
      rep.levenstein_exceeds_orthoplex_at = static_cast<int>(n);
      break;
    }
  }
  return rep;
}

std::string saturation_kind_str(SaturationKind kind) {
  switch (kind) {
    case SaturationKind::ETF: return "ETF";
    case SaturationKind::OrthoplexSaturating: return "OrthoplexSaturating";
    case SaturationKind::LevensteinTightTwoDistance: return "LevensteinTightTwoDistance";
    case SaturationKind::None: return "None";
  }
  return "None";
}

SaturationResult classify_saturation(const Certificate& cert, double tol) {
  SaturationResult res;
  if (!cert.coherence_defined) return res;
  const int d = cert.d;
  const int n = cert.n;
  const double mu = cert.coherence;

  // Welch equality: exactly the equiangular tight frames.
  if (n > d && d >= 1 && std::abs(mu - welch(d, n)) <= tol && cert.equiangular &&
      cert.tight) {
    res.kind = SaturationKind::ETF;
    // Gerzon caps the count of distinct equiangular lines. The complement
    // side applies only for n - d >= 2: at n = d + 1 the Naimark complement
    // lives in F^1 where all lines coincide and the bound says nothing
    // (simplexes exist in every dimension).
    long long cap = gerzon(d, cert.field);
    if (n - d >= 2) cap = std::min(cap, gerzon(n - d, cert.field));
    if (n > cap)
      res.contradiction = "ETF numerics but n = " + std::to_string(n) +
                          " exceeds the Gerzon cap " + std::to_string(cap) +
                          "; no such equiangular tight frame exists";
    return res;
  }

  if (d < 2) return res;
  const long long z = gerzon(d, cert.field);

  if (n > z && std::abs(mu - orthoplex(d)) <= tol) {
    res.kind = SaturationKind::OrthoplexSaturating;
    const long long cap = 2 * (z - 1);
    if (n > cap)
      res.contradiction = "orthoplex saturation but n = " + std::to_string(n) +
                          " exceeds 2(Z(d,F) - 1) = " + std::to_string(cap) +
                          "; equality cannot hold";
    return res;
  }

  if (n > z && std::abs(mu - levenstein(d, n, cert.field)) <= tol && cert.tight) {
    bool two_distance = true;
    const double musq = mu * mu;
    for (double v : cert.profile.values)
      if (std::min(v, std::abs(v - musq)) > tol) { two_distance = false; break; }
    if (two_distance) {
      res.kind = SaturationKind::LevensteinTightTwoDistance;
      return res;
    }
  }
  return res;
}

std::string bounds_table_csv(int d_min, int d_max, int n_max, Field field) {
  if (d_min < 2 || d_min > d_max)
    throw ValidationError("bounds_table requires 2 <= d_min <= d_max");
  if (n_max <= d_max) throw ValidationError("bounds_table requires n_max > d_max");
  std::ostringstream out;
  out << "d,n,field,bukh_cox,welch,orthoplex,levenstein,best,best_name\n";
  const auto cell = [](const BoundValue& b) {
    return b.applicable ? detail::fmt_sig(*b.value, 12) : std::string();
  };
  for (int d = d_min; d <= d_max; ++d) {
    for (int n = d + 1; n <= n_max; ++n) {
      const BoundReport r = best_lower_bound(d, n, field);
      out << d << ',' << n << ',' << field.letter() << ',' << cell(r.bukh_cox) << ','
          << cell(r.welch) << ',' << cell(r.orthoplex) << ',' << cell(r.levenstein)
          << ',' << detail::fmt_sig(r.best, 12) << ',' << bound_name_str(r.best_name)
          << '\n';
    }
  }
  return out.str();
}

}  // namespace projpack::bounds
