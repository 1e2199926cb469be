#include "projpack/frame.hpp"

#include <cmath>
#include <string>

#include "projpack/errors.hpp"

namespace projpack {

UnitFrame::UnitFrame(Field field, Eigen::MatrixXcd vectors, double norm_tol,
                     bool normalize)
    : field_(field), vectors_(std::move(vectors)), norm_tol_(norm_tol) {
  if (vectors_.rows() < 1 || vectors_.cols() < 1)
    throw ValidationError("frame must have d >= 1 and n >= 1, got d=" +
                          std::to_string(vectors_.rows()) +
                          " n=" + std::to_string(vectors_.cols()));
  if (norm_tol_ < 0.0) throw ValidationError("norm_tol must be nonnegative");
  if (!vectors_.allFinite()) throw ValidationError("frame contains non-finite entries");
  if (field_.is_real()) {
    for (Eigen::Index j = 0; j < vectors_.cols(); ++j)
      for (Eigen::Index i = 0; i < vectors_.rows(); ++i)
        if (vectors_(i, j).imag() != 0.0)
          throw ValidationError("Real frame has nonzero imaginary part at entry (" +
                                std::to_string(i) + "," + std::to_string(j) + ")");
  }
  for (Eigen::Index j = 0; j < vectors_.cols(); ++j) {
    const double nrm = vectors_.col(j).norm();
    if (normalize) {
      if (nrm == 0.0)
        throw ValidationError("column " + std::to_string(j) + " is zero; cannot normalize");
      vectors_.col(j) /= nrm;
    } else if (std::abs(nrm - 1.0) > norm_tol_) {
      throw ValidationError("column " + std::to_string(j) + " has norm " +
                            std::to_string(nrm) + ", outside tolerance " +
                            std::to_string(norm_tol_) + " of 1");
    }
  }
}

UnitFrame UnitFrame::from_real(Eigen::MatrixXd vectors, double norm_tol,
                               bool normalize) {
  Eigen::MatrixXcd z(vectors.rows(), vectors.cols());
  z.real() = vectors;
  z.imag().setZero();
  return UnitFrame(Field::real(), std::move(z), norm_tol, normalize);
}

Eigen::MatrixXd UnitFrame::real_vectors() const {
  if (!field_.is_real())
    throw ValidationError("real_vectors() requires a Real frame");
  return vectors_.real();
}

}  // namespace projpack
