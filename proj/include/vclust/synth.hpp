#pragma once

#include "vclust/clustering.hpp"
#include "vclust/random.hpp"
#include "vclust/sample_stats.hpp"
#include "vclust/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vclust {

enum class CovDist { InvWishart, Uniform, None };

std::string to_string(CovDist d);
/// Accepts "invw", "uniform", "none". Throws InvalidArgument otherwise.
CovDist parse_cov_dist(const std::string& s);

/// One simulated regime: block sizes, block and noise covariance families,
/// noise level η and sample size.
struct SynthSpec {
  std::vector<int> cluster_sizes{10, 10, 10, 10};
  CovDist block_dist = CovDist::InvWishart;
  CovDist noise_dist = CovDist::None;
  double eta = 0.0;
  std::int64_t n = 400;
  std::uint64_t seed = 0;

  [[nodiscard]] int p() const;
  /// Throws InvalidArgument on empty/non-positive sizes, η < 0, n < 1, or when
  /// η = 0 and a noise family disagree.
  void validate() const;
};

/// Σ ~ InvW(dim + 1, I).
Matrix sample_invw_cov(int dim, Rng& rng);

/// A + (0.001 − λ_min(A))·I where A is symmetric with zero diagonal and
/// Uniform(−1, 1) off-diagonal entries.
Matrix sample_uniform_cov(int dim, Rng& rng);

struct Dataset {
  SampleStats stats;
  Clustering truth;
  Matrix sigma;      // block-diagonal Σ
  Matrix sigma_eps;  // empty when there is no noise
  Matrix data;       // n×p observations, only when requested
};

/// Draws Σ (block-diagonal), Σ_ε, then n samples of N(0, (Σ⁻¹ + ηΣ_ε⁻¹)⁻¹),
/// accumulating S in batches. `keep_data` retains the raw observations.
Dataset generate_dataset(const SynthSpec& spec, bool keep_data = false);

}  // namespace vclust
