#pragma once

#include "vclust/random.hpp"
#include "vclust/types.hpp"

namespace vclust {

/// log InvW(Σ | ν, Ψ) = (ν/2)log|Ψ| − (νd/2)log 2 − log Γ_d(ν/2)
///                      − ((ν+d+1)/2)log|Σ| − tr(ΨΣ⁻¹)/2.
/// Requires ν > d − 1 and both matrices SPD.
double invwishart_logpdf(const Matrix& sigma, double nu, const Matrix& psi);

/// Same density, evaluated from the precision P = Σ⁻¹ and precomputed
/// log|Ψ|; this is the form the samplers use in their inner loops.
double invwishart_logpdf_precision(const Matrix& precision, double logdet_precision, double nu,
                                   const Matrix& psi, double logdet_psi);

/// Bartlett draw of W ~ Wishart(ν, V) given the lower Cholesky factor of V.
Matrix sample_wishart_chol(double nu, const Matrix& scale_chol, Rng& rng);

/// One draw Σ ~ InvW(ν, Ψ), returned together with its precision.
struct InvWishartDraw {
  Matrix sigma;
  Matrix precision;
};

/// Σ = W⁻¹ with W ~ Wishart(ν, Ψ⁻¹). Requires ν > d − 1 and Ψ SPD.
InvWishartDraw sample_invwishart(double nu, const Matrix& psi, Rng& rng);

/// Reusable sampler for a fixed (ν, Ψ): factors Ψ⁻¹ once and evaluates the
/// log density of its own draws cheaply.
class InvWishartDist {
 public:
  InvWishartDist(double nu, const Matrix& psi);

  [[nodiscard]] InvWishartDraw sample(Rng& rng) const;
  [[nodiscard]] double log_pdf_precision(const Matrix& precision, double logdet_precision) const;
  [[nodiscard]] double nu() const { return nu_; }
  [[nodiscard]] const Matrix& psi() const { return psi_; }

 private:
  double nu_;
  Matrix psi_;
  Matrix psi_inv_chol_;
  double logdet_psi_;
};

}  // namespace vclust
