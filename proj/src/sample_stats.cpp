#include "vclust/sample_stats.hpp"

#include "vclust/error.hpp"

#include <Eigen/Eigenvalues>

namespace vclust {

SampleStats::SampleStats(std::int64_t n, Matrix covariance) : n_(n), cov_(std::move(covariance)) {
  if (n_ < 1) {
    throw InvalidArgument("sample stats: n must be at least 1");
  }
  if (cov_.rows() != cov_.cols() || cov_.rows() == 0) {
    throw InvalidArgument("sample stats: covariance must be a non-empty square matrix");
  }
  if (!cov_.allFinite()) {
    throw DataError("sample stats: covariance has non-finite entries");
  }
  if (relative_asymmetry(cov_) > 1e-12) {
    throw InvalidArgument("sample stats: covariance is not symmetric");
  }
  cov_ = symmetrized(cov_);
  const double min_eig =
      Eigen::SelfAdjointEigenSolver<Matrix>(cov_, Eigen::EigenvaluesOnly).eigenvalues()(0);
  if (min_eig < -1e-8 * cov_.norm()) {
    throw InvalidArgument("sample stats: covariance is not positive semi-definite");
  }
}

SampleStats SampleStats::from_data(const Matrix& rows) {
  if (rows.rows() == 0 || rows.cols() == 0) {
    throw DataError("sample stats: empty data matrix");
  }
  CovarianceAccumulator acc(rows.cols());
  acc.add_batch(rows);
  return acc.finish();
}

Matrix extract_block(const Matrix& m, const Clustering& clustering, int j) {
  if (static_cast<std::size_t>(m.rows()) != clustering.size()) {
    throw InvalidArgument("extract_block: matrix and clustering dimensions differ");
  }
  const auto& idx = clustering.members(j);
  return m(idx, idx);
}

Matrix extract_block_cov(const SampleStats& stats, const Clustering& clustering, int j) {
  return extract_block(stats.covariance(), clustering, j);
}

Matrix embed_blocks(const std::vector<Matrix>& blocks, const Clustering& clustering) {
  const auto p = static_cast<Eigen::Index>(clustering.size());
  if (blocks.size() != static_cast<std::size_t>(clustering.num_clusters())) {
    throw InvalidArgument("embed_blocks: block count differs from cluster count");
  }
  Matrix out = Matrix::Zero(p, p);
  for (int j = 0; j < clustering.num_clusters(); ++j) {
    const auto& idx = clustering.members(j);
    if (blocks[j].rows() != static_cast<Eigen::Index>(idx.size())) {
      throw InvalidArgument("embed_blocks: block size differs from cluster size");
    }
    out(idx, idx) = blocks[j];
  }
  return out;
}

void CovarianceAccumulator::add(const Vector& x) {
  sum_.selfadjointView<Eigen::Lower>().rankUpdate(x);
  ++n_;
}

void CovarianceAccumulator::add_batch(const Matrix& batch) {
  if (batch.cols() != sum_.cols()) {
    throw InvalidArgument("covariance accumulator: batch width differs from p");
  }
  sum_.selfadjointView<Eigen::Lower>().rankUpdate(batch.transpose());
  n_ += batch.rows();
}

SampleStats CovarianceAccumulator::finish() const {
  if (n_ == 0) {
    throw DataError("covariance accumulator: no observations");
  }
  Matrix s = sum_.selfadjointView<Eigen::Lower>();
  s /= static_cast<double>(n_);
  return {n_, symmetrized(s)};
}

}  // namespace vclust
