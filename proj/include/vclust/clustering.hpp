#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vclust {

/// A partition of p variables into k non-empty groups, stored canonically:
/// labels are numbered by first appearance, so two partitions are equal iff
/// their label sequences are equal.
class Clustering {
 public:
  Clustering() = default;

  /// Relabels by first appearance. Throws InvalidArgument on empty input.
  static Clustering canonicalize(std::span<const int> labels);
  static Clustering canonicalize(const std::vector<int>& labels) {
    return canonicalize(std::span<const int>(labels));
  }

  /// Single cluster holding all `p` variables.
  static Clustering single(std::size_t p);

  [[nodiscard]] std::size_t size() const { return labels_.size(); }
  [[nodiscard]] int num_clusters() const { return k_; }
  [[nodiscard]] const std::vector<int>& labels() const { return labels_; }
  [[nodiscard]] int label(std::size_t variable) const { return labels_[variable]; }

  /// Variable indices of cluster `j`, ascending. Throws on out-of-range `j`.
  [[nodiscard]] const std::vector<int>& members(int j) const;
  [[nodiscard]] std::vector<std::size_t> cluster_sizes() const;

  /// Same partition with variables reordered: result.label(i) = label(perm[i]).
  [[nodiscard]] Clustering permuted(std::span<const int> perm) const;

  friend bool operator==(const Clustering& a, const Clustering& b) {
    return a.labels_ == b.labels_;
  }
  friend auto operator<=>(const Clustering& a, const Clustering& b) {
    return a.labels_ <=> b.labels_;
  }

 private:
  std::vector<int> labels_;
  std::vector<std::vector<int>> members_;
  int k_ = 0;
};

}  // namespace vclust
