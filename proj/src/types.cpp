#include "vclust/types.hpp"

#include "vclust/error.hpp"
#include "vclust/linalg.hpp"

namespace vclust {

SpdMatrix::SpdMatrix(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw InvalidArgument("SpdMatrix: matrix is not square");
  }
  value_ = symmetrized(m);
  if (!is_spd(value_)) {
    throw InvalidArgument("SpdMatrix: matrix is not positive definite");
  }
}

SpdMatrix SpdMatrix::identity(Eigen::Index dim) {
  return SpdMatrix(Matrix::Identity(dim, dim));
}

Matrix SpdMatrix::inverse() const { return inverse_spd(value_); }

double SpdMatrix::logdet() const { return logdet_spd(value_); }

double relative_asymmetry(const Matrix& a) {
  const double norm = a.norm();
  if (norm == 0.0) {
    return 0.0;
  }
  return (a - a.transpose()).norm() / norm;
}

}  // namespace vclust
