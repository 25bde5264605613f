#pragma once

#include "vclust/clustering.hpp"
#include "vclust/types.hpp"

#include <cstdint>

namespace vclust {

/// Sample size, dimension and the ML-normalized sample covariance S = (1/n)·Σ xᵢxᵢᵀ
/// of mean-zero observations.
class SampleStats {
 public:
  SampleStats() = default;

  /// Validates symmetry (1e-12 relative) and PSD-ness (λ_min ≥ −1e-8·‖S‖).
  SampleStats(std::int64_t n, Matrix covariance);

  /// S from an n×p data matrix whose rows are observations; the data are
  /// assumed centered and are not re-centered.
  static SampleStats from_data(const Matrix& rows);

  [[nodiscard]] std::int64_t n() const { return n_; }
  [[nodiscard]] Eigen::Index p() const { return cov_.rows(); }
  [[nodiscard]] const Matrix& covariance() const { return cov_; }

 private:
  std::int64_t n_ = 0;
  Matrix cov_;
};

/// Submatrix of `m` on the rows/columns of cluster `j`, in within-cluster
/// variable order.
Matrix extract_block(const Matrix& m, const Clustering& clustering, int j);

/// S_j, the block of the sample covariance for cluster `j`.
Matrix extract_block_cov(const SampleStats& stats, const Clustering& clustering, int j);

/// Block-diagonal embedding of per-cluster blocks back into p×p variable order.
Matrix embed_blocks(const std::vector<Matrix>& blocks, const Clustering& clustering);

/// Accumulates Σ xxᵀ one observation (or batch) at a time.
class CovarianceAccumulator {
 public:
  explicit CovarianceAccumulator(Eigen::Index p) : sum_(Matrix::Zero(p, p)) {}

  void add(const Vector& x);
  /// Rows of `batch` are observations.
  void add_batch(const Matrix& batch);

  [[nodiscard]] std::int64_t count() const { return n_; }
  /// Throws DataError if no observation was added.
  [[nodiscard]] SampleStats finish() const;

 private:
  Matrix sum_;
  std::int64_t n_ = 0;
};

}  // namespace vclust
