#pragma once

#include "vclust/candidates.hpp"
#include "vclust/criteria.hpp"

#include <map>
#include <vector>

namespace vclust {

/// P(k | 𝒳) ∝ Σ_{𝒞 with k clusters} exp(score(𝒞)), by log-sum-exp.
/// Throws InvalidArgument for criteria whose scores are not log likelihoods,
/// on size mismatch, or when no score is finite.
std::map<int, double> posterior_over_k(const std::vector<double>& scores,
                                       const std::vector<Clustering>& candidates,
                                       const Criterion& criterion);

/// Index of the maximal score among entries with `eligible` set. Ties go to
/// fewer clusters, then to the lexicographically smaller canonical labels.
/// Throws InvalidArgument when nothing is eligible.
std::size_t argmax_candidate(const std::vector<double>& scores,
                             const std::vector<Clustering>& candidates,
                             const std::vector<bool>& eligible);

struct SelectionResult {
  Clustering best;
  std::size_t best_index = 0;
  std::vector<ScoreRecord> scores;
  /// Candidates removed by the one-cluster exclusion.
  std::vector<bool> excluded;
  /// Empty for criteria whose scores are not log likelihoods.
  std::map<int, double> posterior_k;
};

/// Scores every candidate and returns the argmax under a uniform prior.
SelectionResult select(const SampleStats& stats, const CandidateSet& candidates,
                       const Criterion& criterion, const ScoreConfigs& cfgs = {});

}  // namespace vclust
