#pragma once

#include "vclust/random.hpp"
#include "vclust/types.hpp"

#include <optional>
#include <vector>

namespace vclust {

/// L_ij = −|X_ij|^q (i ≠ j), L_ii = Σ_{k≠i} |X_ik|^q. Rows sum to zero.
Matrix build_laplacian(const Matrix& x, double q = 1.0);

struct KMeansConfig {
  int restarts = 10;
  int max_iters = 300;
};

struct KMeansResult {
  std::vector<int> labels;
  double inertia = 0.0;
};

/// Lloyd's algorithm on the rows of `points` with k-means++ seeding; the
/// restart with the smallest inertia wins. Clusters that empty out are
/// re-seeded at the point farthest from its centre. Returns nullopt when
/// fewer than k distinct points exist.
std::optional<KMeansResult> kmeans(const Matrix& points, int k, Rng& rng,
                                   const KMeansConfig& cfg = {});

}  // namespace vclust
