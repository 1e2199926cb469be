#pragma once

#include <Eigen/Dense>

#include "projpack/field.hpp"

namespace projpack {

// n unit-norm column vectors in F^d. Storage is always complex; a Real frame
// has exactly zero imaginary parts (enforced at construction, preserved by
// every operation that branches on the field tag).
//
// Immutable value type: validated once, then only read.
class UnitFrame {
 public:
  static constexpr double kDefaultNormTol = 1e-10;

  // Validates dimensions, column norms (within norm_tol of 1) and, for Real,
  // that imaginary parts are exactly zero. With normalize = true columns are
  // rescaled to unit norm first (zero columns still rejected).
  UnitFrame(Field field, Eigen::MatrixXcd vectors,
            double norm_tol = kDefaultNormTol, bool normalize = false);

  // Real-field convenience: embeds a real matrix with zero imaginary parts.
  static UnitFrame from_real(Eigen::MatrixXd vectors,
                             double norm_tol = kDefaultNormTol,
                             bool normalize = false);

  Field field() const { return field_; }
  int d() const { return static_cast<int>(vectors_.rows()); }
  int n() const { return static_cast<int>(vectors_.cols()); }
  double norm_tol() const { return norm_tol_; }

  const Eigen::MatrixXcd& vectors() const { return vectors_; }
  Eigen::MatrixXcd::ConstColXpr column(int j) const { return vectors_.col(j); }

  // Real view of the storage; only valid when field is Real.
  Eigen::MatrixXd real_vectors() const;

 private:
  Field field_;
  Eigen::MatrixXcd vectors_;
  double norm_tol_;
};

}  // namespace projpack
