#pragma once

#include "vclust/clustering.hpp"

#include <string>
#include <vector>

namespace vclust {

/// Cross-tabulation of two labelings of the same items.
struct Contingency {
  std::vector<std::vector<long>> counts;
  std::vector<long> row_sums;
  std::vector<long> col_sums;
  long total = 0;

  static Contingency of(const Clustering& a, const Clustering& b);
};

/// Mutual information in nats.
double mutual_information(const Contingency& t);

/// E[MI] under the hypergeometric permutation model, by the exact sum over
/// admissible cell counts with log-factorial weights.
double expected_mutual_information(const Contingency& t);

/// Adjusted mutual information with the max(H(a), H(b)) normalizer. Equals 1
/// for identical partitions, including the case of two single clusters.
/// Throws InvalidArgument on a length mismatch.
double anmi(const Clustering& a, const Clustering& b);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

/// Sample mean and (n−1)-denominator standard deviation; std 0 for one value.
MeanStd aggregate(const std::vector<double>& runs);

/// "mean (std)" with two decimals and trailing zeros dropped down to one,
/// e.g. "0.95 (0.06)", "1.0 (0.0)", "112.8 (5.64)".
std::string format_mean_std(const MeanStd& m);

}  // namespace vclust
