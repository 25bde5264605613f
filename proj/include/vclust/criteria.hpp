#pragma once

#include "vclust/chib.hpp"
#include "vclust/clustering.hpp"
#include "vclust/map_solver.hpp"
#include "vclust/sample_stats.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vclust {

enum class CriterionKind { ProposedVi, ProposedMcmc, BasicIw, Ebic, Aic, Chi };

struct Criterion {
  CriterionKind kind = CriterionKind::ProposedVi;
  double beta = 0.02;
  double gamma = 0.0;
  bool exclude_one_cluster = false;

  /// "proposed-vi", "proposed-mcmc", "basic-iw", "ebic:<γ>", "aic" or "chi".
  /// The one-cluster exclusion defaults on for ebic and aic.
  static Criterion parse(const std::string& spec);
  [[nodiscard]] std::string name() const;
  /// Scores are log marginal likelihoods.
  [[nodiscard]] bool is_likelihood() const;
  void validate() const;
};

/// Per-block ridge MLE Θ̂_j = (S_j + 0.001·I)⁻¹ embedded block-diagonally.
Matrix ridge_block_precision(const SampleStats& stats, const Clustering& clustering);

/// |E| = Σ_j p_j(p_j − 1)/2.
long within_block_edges(const Clustering& clustering);

/// −(−2ℓ(Θ̂) + |E| log n + 4γ|E| log p).
double ebic_score(const SampleStats& stats, const Clustering& clustering, double gamma);

/// −(−2ℓ(Θ̂) + 2(p + |E|)).
double aic_score(const SampleStats& stats, const Clustering& clustering);

/// Rows are variables, features their column of the correlation matrix.
Matrix correlation_profile_embedding(const Matrix& cov);

/// Calinski–Harabasz index (B/(k−1)) / (W/(p−k)) of the embedding rows.
/// −∞ for k = 1 or k = p, and when both dispersions vanish; +∞ when only W does.
double chi_score(const Matrix& embedding, const Clustering& clustering);

struct ScoreConfigs {
  AdmmConfig admm;
  McmcConfig mcmc;
  /// CH feature rows; the correlation profile of S when empty.
  Matrix chi_embedding;
  /// Workers for scoring candidates (0 = hardware concurrency).
  unsigned threads = 0;
};

struct ScoreRecord {
  double value = 0.0;
  bool converged = true;
  std::optional<double> nu_g_eps;
  std::vector<double> nu_g_blocks;
  std::optional<double> std_error;
};

/// Dispatches to the estimator of `criterion`; higher is better throughout.
ScoreRecord score(const SampleStats& stats, const Clustering& candidate, const Criterion& criterion,
                  const ScoreConfigs& cfgs = {});

}  // namespace vclust
