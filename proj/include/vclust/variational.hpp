#pragma once

#include "vclust/clustering.hpp"
#include "vclust/hyperparams.hpp"
#include "vclust/map_solver.hpp"
#include "vclust/sample_stats.hpp"
#include "vclust/types.hpp"

#include <vector>

namespace vclust {

/// (n/2)(log|P| − tr(SP)) − (np/2) log 2π for mean-zero Gaussian data with precision P.
double gaussian_log_likelihood(const SampleStats& stats, const Matrix& precision);

/// Exact log p(𝒳 | 𝒞) of the conjugate block model (β is ignored): the sum
/// over clusters of the normal–inverse-Wishart marginal of each block.
double analytic_log_marginal_basic(const SampleStats& stats, const Clustering& clustering,
                                   const Hyperparams& hyper);

/// The one-dimensional objective whose minimizer is ν̂ for a d-dimensional factor
///   f(ν) = ν/(ν+d+1)·T − 2 log Γ_d(ν/2) − νd + d·c·log(ν+d+1)
///          + (ν − c)·Σ_{i=1..d} ψ((ν − d + i)/2),
/// where T = tr(target scale · Σ̂⁻¹) and c is the target degrees of freedom.
struct NuObjective {
  int dim;
  double c;
  double trace;

  [[nodiscard]] double value(double nu) const;
  [[nodiscard]] double derivative(double nu) const;
  /// Smallest admissible ν plus a margin: dim − 1 + 1e-3.
  [[nodiscard]] double lower() const { return dim - 1.0 + 1e-3; }
};

/// Minimizes `f` on [f.lower(), upper] and refines the stationary point.
/// Throws NumericalError if f is non-finite across the bracket.
double minimize_nu(const NuObjective& f, double upper);

/// ν̂_{g,ε}: c = ν_ε, T = tr((Σ_{ε,0} + βnS) Σ̂_ε⁻¹), bracket upper end ν_ε + n + 10p.
double fit_nu_g_eps(const MapSolution& map, const SampleStats& stats, const Hyperparams& hyper);

/// ν̂_{g,j}: c = ν_j + n, T = tr((Σ_{j,0} + nS_j) Σ̂_j⁻¹), bracket upper end ν_j + n + 10p_j.
double fit_nu_g_block(const MapSolution& map, const SampleStats& stats, const Clustering& clustering,
                      const Hyperparams& hyper, int j);

struct VariationalFit {
  double nu_g_eps = 0.0;
  std::vector<double> nu_g_blocks;
  double log_marginal = 0.0;
  /// log p(θ̂, 𝒳): likelihood at the MAP plus both prior log densities.
  double log_joint = 0.0;
  /// log g(θ̂) of the fitted mode-matched product.
  double log_g = 0.0;
  MapSolution map;
};

/// log p(𝒳 | 𝒞) ≈ log p(θ̂, 𝒳) − log g(θ̂) with θ̂ the MAP and
/// g = InvW(ν̂_{g,ε}, (ν̂_{g,ε}+p+1)Σ̂_ε) · Π_j InvW(ν̂_{g,j}, (ν̂_{g,j}+p_j+1)Σ̂_j).
VariationalFit variational_log_marginal(const SampleStats& stats, const Clustering& clustering,
                                        const Hyperparams& hyper, const AdmmConfig& cfg = {});

/// Same estimate from an already computed MAP solution.
VariationalFit variational_from_map(const SampleStats& stats, const Clustering& clustering,
                                    const Hyperparams& hyper, MapSolution map);

/// log p(θ, 𝒳) of the noisy model at covariances given by their precisions.
double log_joint_density(const SampleStats& stats, const Clustering& clustering,
                         const Hyperparams& hyper, const Matrix& x_eps,
                         const std::vector<Matrix>& x_blocks);

}  // namespace vclust
