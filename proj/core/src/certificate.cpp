#include "projpack/certificate.hpp"

#include "projpack/bounds.hpp"

namespace projpack {

std::string saturated_bound_str(SaturatedBound b) {
  switch (b) {
    case SaturatedBound::Welch: return "Welch";
    case SaturatedBound::Orthoplex: return "Orthoplex";
    case SaturatedBound::Levenstein: return "Levenstein";
    case SaturatedBound::BukhCox: return "BukhCox";
    case SaturatedBound::None: return "None";
  }
  return "None";
}

Certificate certify(const UnitFrame& frame, const CertifyProfile& profile) {
  Certificate cert;
  cert.field = frame.field();
  cert.d = frame.d();
  cert.n = frame.n();

  if (cert.n >= 2) {
    cert.coherence = coherence(frame);
    cert.coherence_defined = true;
    cert.profile = angle_profile(frame, profile.cluster_tol);
    cert.equiangular = is_equiangular(frame, profile.equiangular_tol);
  }

  const TightnessResult t = is_tight(frame, profile.tight_tol);
  cert.tight = t.tight;
  cert.tightness_residual = t.residual;
  cert.spans = spans(frame, profile.spans_tol);

  const bounds::SaturationResult sat =
      bounds::classify_saturation(cert, profile.saturation_tol);
  cert.contradiction = sat.contradiction;
  switch (sat.kind) {
    case bounds::SaturationKind::ETF:
      cert.saturated = SaturatedBound::Welch;
      break;
    case bounds::SaturationKind::OrthoplexSaturating:
      cert.saturated = SaturatedBound::Orthoplex;
      break;
    case bounds::SaturationKind::LevensteinTightTwoDistance:
      cert.saturated = SaturatedBound::Levenstein;
      break;
    case bounds::SaturationKind::None:
      cert.saturated = SaturatedBound::None;
      break;
  }
  return cert;
}

}  // namespace projpack
