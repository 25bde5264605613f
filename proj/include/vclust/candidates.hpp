#pragma once

#include "vclust/clustering.hpp"
#include "vclust/glasso.hpp"
#include "vclust/linkage.hpp"
#include "vclust/sample_stats.hpp"
#include "vclust/spectral.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vclust {

struct Candidate {
  Clustering clustering;
  std::string method;
  std::optional<double> lambda;
  int k = 0;
};

/// Candidates in insertion order, deduplicated by canonical partition; the
/// first provenance of a partition is kept.
class CandidateSet {
 public:
  /// Returns false when the partition is already present.
  bool add(Candidate c);
  void merge(const CandidateSet& other);
  [[nodiscard]] const std::vector<Candidate>& items() const { return items_; }
  [[nodiscard]] std::size_t size() const { return items_.size(); }
  [[nodiscard]] bool empty() const { return items_.empty(); }
  [[nodiscard]] bool contains(const Clustering& c) const { return index_.count(c) > 0; }

 private:
  std::vector<Candidate> items_;
  std::map<Clustering, std::size_t> index_;
};

struct SpectralConfig {
  std::vector<double> lambda_grid{0.0001, 0.0005, 0.001, 0.002, 0.003, 0.004,
                                  0.005,  0.006,  0.007, 0.008, 0.009, 0.01};
  int k_max = 15;
  double q = 1.0;
  GlassoConfig glasso;
  KMeansConfig kmeans;
  std::uint64_t seed = 0;

  void validate() const;
};

/// S unchanged when positive definite, otherwise S + 0.001·I.
Matrix ridge_repaired(const Matrix& s);

/// For each λ: graphical lasso, eigenvectors of the k_max smallest
/// Laplacian eigenvalues, then k-means on the first k of them for
/// k = 2…k_max. A λ whose solve fails is skipped with a message in `warnings`.
CandidateSet spectral_candidates(const SampleStats& stats, const SpectralConfig& cfg = {},
                                 std::vector<std::string>* warnings = nullptr);

/// One candidate per k = 2…min(k_max, p) from cutting the dendrogram on
/// 1 − |corr|.
CandidateSet linkage_candidates(const SampleStats& stats, Linkage method, int k_max = 15);

}  // namespace vclust
