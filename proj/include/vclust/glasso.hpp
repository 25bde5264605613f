#pragma once

#include "vclust/types.hpp"

namespace vclust {

struct GlassoConfig {
  double tol = 1e-5;
  int max_iters = 5000;
  double rho = 1.0;

  void validate() const;
};

struct GlassoResult {
  Matrix precision;
  double duality_gap = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// −log|X| + tr(SX) + λ Σ_{i≠j} |X_ij|.
double glasso_objective(const Matrix& x, const Matrix& s, double lambda);

/// Gap between the primal value at X and the dual value log|S+Γ| + p, with
/// Γ the projection of X⁻¹ − S onto {Γ_ii = 0, |Γ_ij| ≤ λ}. Returns +∞
/// when S + Γ is not positive definite.
double glasso_duality_gap(const Matrix& x, const Matrix& s, double lambda);

/// Graphical lasso with an unpenalized diagonal, by ADMM: the log-det block
/// is a stationarity solve, the penalized block an off-diagonal soft
/// threshold. The returned precision is the thresholded iterate, so exact
/// zeros are kept. `start`, when non-empty, warm-starts the thresholded block.
GlassoResult graphical_lasso(const Matrix& s, double lambda, const GlassoConfig& cfg = {},
                             const Matrix& start = Matrix());

}  // namespace vclust
