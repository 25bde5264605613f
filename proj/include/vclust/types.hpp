#pragma once

#include <Eigen/Dense>

#include <vector>

namespace vclust {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetric positive-definite matrix. Construction validates by Cholesky
/// factorization; the wrapped value is immutable afterwards.
class SpdMatrix {
 public:
  SpdMatrix() = default;

  /// Symmetrizes `m` as (m + mᵀ)/2 and throws InvalidArgument unless the
  /// result factors.
  explicit SpdMatrix(const Matrix& m);

  static SpdMatrix identity(Eigen::Index dim);

  [[nodiscard]] Eigen::Index dim() const { return value_.rows(); }
  [[nodiscard]] const Matrix& matrix() const { return value_; }
  operator const Matrix&() const { return value_; }  // NOLINT

  [[nodiscard]] Matrix inverse() const;
  [[nodiscard]] double logdet() const;

 private:
  Matrix value_;
};

/// Frobenius norm of A − Aᵀ relative to ‖A‖_F (0 for the zero matrix).
double relative_asymmetry(const Matrix& a);

/// (A + Aᵀ)/2.
inline Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }

}  // namespace vclust
