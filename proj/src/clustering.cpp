#include "vclust/clustering.hpp"

#include "vclust/error.hpp"

#include <map>
#include <string>

namespace vclust {

Clustering Clustering::canonicalize(std::span<const int> labels) {
  if (labels.empty()) {
    throw InvalidArgument("clustering: empty label sequence");
  }
  Clustering c;
  std::map<int, int> relabel;
  c.labels_.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = relabel.try_emplace(labels[i], static_cast<int>(relabel.size()));
    if (inserted) {
      c.members_.emplace_back();
    }
    c.labels_.push_back(it->second);
    c.members_[it->second].push_back(static_cast<int>(i));
  }
  c.k_ = static_cast<int>(relabel.size());
  return c;
}

Clustering Clustering::single(std::size_t p) {
  return canonicalize(std::vector<int>(p, 0));
}

const std::vector<int>& Clustering::members(int j) const {
  if (j < 0 || j >= k_) {
    throw InvalidArgument("clustering: cluster index " + std::to_string(j) + " out of range (k=" +
                          std::to_string(k_) + ")");
  }
  return members_[j];
}

std::vector<std::size_t> Clustering::cluster_sizes() const {
  std::vector<std::size_t> sizes;
  sizes.reserve(members_.size());
  for (const auto& m : members_) {
    sizes.push_back(m.size());
  }
  return sizes;
}

Clustering Clustering::permuted(std::span<const int> perm) const {
  if (perm.size() != labels_.size()) {
    throw InvalidArgument("clustering: permutation length mismatch");
  }
  std::vector<int> out(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    out[i] = labels_.at(static_cast<std::size_t>(perm[i]));
  }
  return canonicalize(out);
}

}  // namespace vclust
