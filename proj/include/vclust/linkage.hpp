#pragma once

#include "vclust/types.hpp"

#include <string>
#include <vector>

namespace vclust {

enum class Linkage { Single, Average };

std::string to_string(Linkage l);
/// Accepts "single" and "average".
Linkage parse_linkage(const std::string& s);

/// d_ij = 1 − |corr(i, j)| from a covariance matrix. Zero-variance
/// variables are maximally dissimilar to every other variable.
Matrix correlation_dissimilarity(const Matrix& cov);

/// Agglomerative clustering of the p objects of `dissimilarity`. Element
/// k − 1 of the result holds the labels when k clusters remain, for
/// k = 1…p. Ties merge the lowest-indexed pair first.
std::vector<std::vector<int>> hierarchical_cuts(const Matrix& dissimilarity, Linkage method);

}  // namespace vclust
