#pragma once

#include <string>

#include "projpack/analysis.hpp"
#include "projpack/frame.hpp"

namespace projpack {

// Which lower bound (if any) the certified coherence saturates. BukhCox is a
// member for completeness but is never assigned: no equality condition is
// implemented for it, so classification cannot claim it.
enum class SaturatedBound { None, Welch, Orthoplex, Levenstein, BukhCox };

std::string saturated_bound_str(SaturatedBound b);

// Tolerance profile for certification. `exact` is meant for closed-form
// constructions, `numerical` for optimizer output (looser saturation and
// tightness thresholds).
struct CertifyProfile {
  double cluster_tol = 1e-6;
  double tight_tol = 1e-8;
  double equiangular_tol = 1e-8;
  double saturation_tol = 1e-8;
  double spans_tol = 1e-9;

  static CertifyProfile exact() { return {1e-6, 1e-8, 1e-8, 1e-8, 1e-9}; }
  static CertifyProfile numerical() { return {1e-6, 1e-6, 1e-5, 1e-5, 1e-9}; }
};

// Everything certification-grade analysis knows about one frame. A frame with
// n < 2 has no pairwise inner products: coherence_defined is false and the
// coherence field holds 0.
struct Certificate {
  Field field;
  int d = 0;
  int n = 0;
  double coherence = 0.0;
  bool coherence_defined = false;
  AngleProfile profile;
  bool tight = false;
  double tightness_residual = 0.0;
  bool equiangular = false;
  bool spans = false;
  SaturatedBound saturated = SaturatedBound::None;
  std::string contradiction;  // nonempty when saturation contradicts a necessary condition
};

Certificate certify(const UnitFrame& frame,
                    const CertifyProfile& profile = CertifyProfile::exact());

}  // namespace projpack
