#pragma once

#include "vclust/clustering.hpp"
#include "vclust/types.hpp"

#include <vector>

namespace vclust {

/// β and the inverse-Wishart prior parameters of the noisy block model.
///
/// Σ_ε ~ InvW(nu_eps, scale_eps), Σ_j ~ InvW(nu_blocks[j], scale_blocks[j]),
/// and observations ~ N(0, (Σ⁻¹ + β Σ_ε⁻¹)⁻¹). With β = 0 this is the basic
/// conjugate block model.
struct Hyperparams {
  double beta = 0.0;
  double nu_eps = 0.0;
  Matrix scale_eps;
  std::vector<double> nu_blocks;
  std::vector<Matrix> scale_blocks;

  /// Non-informative defaults: ν_j = p_j + 1, Σ_{j,0} = I, ν_ε = p + 1, Σ_{ε,0} = I.
  static Hyperparams defaults(const Clustering& clustering, double beta);

  /// Throws InvalidArgument unless β ∈ [0,1), ν_ε > p − 1, ν_j > p_j − 1 and
  /// every scale is SPD with the size the clustering implies.
  void validate(const Clustering& clustering) const;

  // Constants of the MAP program: A_ε = Σ_{ε,0}, a_ε = ν_ε + p + 1,
  // A_j = Σ_{j,0}, a_j = ν_j + p_j + 1.
  [[nodiscard]] double a_eps() const { return nu_eps + static_cast<double>(scale_eps.rows()) + 1.0; }
  [[nodiscard]] double a_block(int j) const {
    return nu_blocks[j] + static_cast<double>(scale_blocks[j].rows()) + 1.0;
  }
};

}  // namespace vclust
