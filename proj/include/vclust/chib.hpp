#pragma once

#include "vclust/clustering.hpp"
#include "vclust/hyperparams.hpp"
#include "vclust/invwishart.hpp"
#include "vclust/map_solver.hpp"
#include "vclust/sample_stats.hpp"
#include "vclust/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vclust {

struct McmcConfig {
  /// Post-burn-in iterations per reduced run.
  int samples = 10000;
  /// Burn-in length as a fraction of `samples`.
  double burn_in_frac = 0.10;
  double kappa = 10.0;
  std::uint64_t seed = 0;
  /// Batches for the batch-means standard error.
  int batches = 50;
  /// Keep the states of the first (unrestricted) run as vectorized lower triangles.
  bool record_chain = false;
  /// Unrestricted chains (distinct seeds) behind the multivariate PSRF; 1 skips it.
  int psrf_chains = 1;

  void validate() const;
};

/// min(1, p(θ')q(θ) / (p(θ)q(θ'))) computed in log space; returns log α ≤ 0.
/// Throws NumericalError when the proposed joint density is not finite.
double log_acceptance_prob(double log_joint_current, double log_joint_proposed,
                           double log_q_current, double log_q_proposed);

/// Independence proposals, stage order θ₁ = Σ_ε then Σ₁…Σ_k:
/// q₁ = InvW(βκn + ν_ε, (ν+p+1)Σ̂_ε), q_{j+1} = InvW((1−β)κn + ν_j, (ν+p_j+1)Σ̂_j).
std::vector<InvWishartDist> chib_proposals(const SampleStats& stats, const Clustering& clustering,
                                           const Hyperparams& hyper, const MapSolution& map,
                                           double kappa);

/// Output of one reduced run of the Metropolis-Hastings-within-Gibbs sampler.
struct GibbsChain {
  /// Row t holds the lower triangles of Σ_i…Σ_{k+1} after sweep t (burn-in dropped).
  Matrix states;
  /// Acceptance rate of each free component, in stage order.
  std::vector<double> acceptance_rates;
};

/// Runs the sampler with stages before `start_stage` (0-based, 0 = Σ_ε)
/// clamped at the MAP modes and the remaining ones updated in stage order.
GibbsChain mh_within_gibbs(const SampleStats& stats, const Clustering& clustering,
                           const Hyperparams& hyper, const MapSolution& map, int start_stage,
                           const McmcConfig& cfg);

struct ChibEstimate {
  double log_marginal = 0.0;
  /// Batch-means/delta-method standard error of `log_marginal`.
  double std_error = 0.0;
  double log_joint_at_mode = 0.0;
  /// log p̂(θ̂_i | 𝒳, θ̂_{<i}) per stage.
  std::vector<double> per_stage_log_ordinates;
  /// Acceptance rate of θ_i within its own reduced run.
  std::vector<double> acceptance_rates;
  /// Mean α(θ̂_i → θ') over proposal draws θ' ~ q_i, per stage.
  std::vector<double> mode_move_rates;
  std::optional<double> psrf;
  /// States of the unrestricted run when `record_chain` is set.
  Matrix chain;
  std::vector<std::string> warnings;
};

/// Chib–Jeliazkov estimate log p(𝒳 | 𝒞) = log p(θ̂, 𝒳) − Σ_i log p̂(θ̂_i | 𝒳, θ̂_{<i}).
/// Throws NumericalError when a denominator average vanishes (raise κ).
ChibEstimate chib_log_marginal(const SampleStats& stats, const Clustering& clustering,
                               const Hyperparams& hyper, const MapSolution& map,
                               const McmcConfig& cfg);

/// Brooks–Gelman multivariate potential scale reduction factor. Each chain
/// has one draw per row; all chains must share their shape with ≥ 10 rows.
/// Throws InvalidArgument for fewer than two chains or mismatched shapes and
/// NumericalError when the pooled within-chain covariance is singular.
double gelman_rubin_mpsrf(const std::vector<Matrix>& chains);

/// Lower triangle of a symmetric matrix, column by column.
Vector lower_triangle(const Matrix& m);

}  // namespace vclust
