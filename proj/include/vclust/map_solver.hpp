#pragma once

#include "vclust/clustering.hpp"
#include "vclust/hyperparams.hpp"
#include "vclust/sample_stats.hpp"
#include "vclust/types.hpp"

#include <functional>
#include <vector>

namespace vclust {

/// Penalty schedule and stopping rule of the 3-block ADMM.
///
/// With `balance_residuals` set, ρ is rescaled to keep the relative primal
/// and dual residuals within `balance_ratio` of each other and the geometric
/// growth schedule is unused. Anderson mixing starts once ρ has stayed put
/// for a balancing round after `anderson_start` iterations; ρ is frozen from
/// then on.
struct AdmmConfig {
  double rho_init = 1.0;
  double rho_growth = 1.1;
  int growth_every = 100;
  double rho_max = 1e6;
  double rho_min = 1e-6;
  bool balance_residuals = true;
  int balance_every = 10;
  double balance_ratio = 10.0;
  double balance_factor = 2.0;
  /// Start from the β = 0 closed form and its consistent multiplier.
  bool warm_start = true;
  int anderson_memory = 10;
  int anderson_start = 200;
  /// Mixing restarts when the fixed-point residual exceeds this multiple of the best seen.
  double anderson_safeguard = 10.0;
  int max_iters = 20000;
  double tol_primal = 1e-8;
  double tol_dual = 1e-8;

  void validate() const;
};

/// One row of the optional iteration trace.
struct AdmmTraceRow {
  int iter;
  double objective;
  double primal_residual;
  double dual_residual;
  double rho;
};

using AdmmTraceSink = std::function<void(const AdmmTraceRow&)>;

/// MAP estimate of the precisions X_ε = Σ_ε⁻¹ and X_j = Σ_j⁻¹.
struct MapSolution {
  Matrix x_eps;
  std::vector<Matrix> x_blocks;
  Matrix z;
  Matrix u;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective = 0.0;
  bool converged = false;

  /// Block-diagonal X assembled in variable order.
  [[nodiscard]] Matrix x_full(const Clustering& clustering) const;
  /// Σ̂_ε = X̂_ε⁻¹.
  [[nodiscard]] Matrix sigma_eps() const;
  /// Σ̂_j = X̂_j⁻¹.
  [[nodiscard]] Matrix sigma_block(int j) const;
};

/// Negative log posterior (up to constants, times 2) in precision form:
///   n·tr(S(X+βX_ε)) − n·log|X+βX_ε| + tr(A_εX_ε) − a_ε log|X_ε|
///   + Σ_j tr(A_jX_j) − a_j log|X_j|.
/// Throws InvalidArgument on dimension mismatch, NumericalError on non-SPD input.
double map_objective(const Matrix& x_eps, const std::vector<Matrix>& x_blocks,
                     const SampleStats& stats, const Clustering& clustering,
                     const Hyperparams& hyper);

/// Runs the 3-block ADMM (X blocks, then X_ε, then Z, then the multiplier).
/// On non-convergence the last iterate is returned with `converged == false`.
MapSolution solve_map(const SampleStats& stats, const Clustering& clustering,
                      const Hyperparams& hyper, const AdmmConfig& cfg = {},
                      const AdmmTraceSink& trace = {});

}  // namespace vclust
