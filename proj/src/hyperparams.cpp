#include "vclust/hyperparams.hpp"

#include "vclust/error.hpp"
#include "vclust/linalg.hpp"

#include <string>

namespace vclust {

Hyperparams Hyperparams::defaults(const Clustering& clustering, double beta) {
  Hyperparams h;
  const auto p = static_cast<Eigen::Index>(clustering.size());
  h.beta = beta;
  h.nu_eps = static_cast<double>(p) + 1.0;
  h.scale_eps = Matrix::Identity(p, p);
  for (std::size_t size : clustering.cluster_sizes()) {
    const auto d = static_cast<Eigen::Index>(size);
    h.nu_blocks.push_back(static_cast<double>(d) + 1.0);
    h.scale_blocks.push_back(Matrix::Identity(d, d));
  }
  h.validate(clustering);
  return h;
}

void Hyperparams::validate(const Clustering& clustering) const {
  const auto p = static_cast<Eigen::Index>(clustering.size());
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw InvalidArgument("hyperparams: beta must lie in [0, 1)");
  }
  if (scale_eps.rows() != p || scale_eps.cols() != p || !is_spd(scale_eps)) {
    throw InvalidArgument("hyperparams: noise scale must be a p x p SPD matrix");
  }
  if (!(nu_eps > static_cast<double>(p) - 1.0)) {
    throw InvalidArgument("hyperparams: nu_eps must exceed p - 1");
  }
  const auto sizes = clustering.cluster_sizes();
  if (nu_blocks.size() != sizes.size() || scale_blocks.size() != sizes.size()) {
    throw InvalidArgument("hyperparams: need one prior per cluster");
  }
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    const auto d = static_cast<Eigen::Index>(sizes[j]);
    if (scale_blocks[j].rows() != d || scale_blocks[j].cols() != d || !is_spd(scale_blocks[j])) {
      throw InvalidArgument("hyperparams: scale of cluster " + std::to_string(j) +
                            " must be an SPD matrix of the cluster's size");
    }
    if (!(nu_blocks[j] > static_cast<double>(d) - 1.0)) {
      throw InvalidArgument("hyperparams: nu of cluster " + std::to_string(j) +
                            " must exceed its size - 1");
    }
  }
}

}  // namespace vclust
