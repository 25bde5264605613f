#include "vclust/invwishart.hpp"

#include "vclust/error.hpp"
#include "vclust/linalg.hpp"
#include "vclust/special.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <numbers>

namespace vclust {

namespace {

void check_nu(double nu, Eigen::Index dim) {
  if (!(nu > static_cast<double>(dim) - 1.0)) {
    throw InvalidArgument("inverse Wishart: degrees of freedom must exceed dim - 1");
  }
}

double log_normalizer(double nu, Eigen::Index d, double logdet_psi) {
  const double dd = static_cast<double>(d);
  return 0.5 * nu * logdet_psi - 0.5 * nu * dd * std::numbers::ln2 -
         multigamma_log(static_cast<int>(d), 0.5 * nu);
}

}  // namespace

double invwishart_logpdf(const Matrix& sigma, double nu, const Matrix& psi) {
  if (sigma.rows() != psi.rows() || sigma.cols() != psi.cols() || sigma.rows() != sigma.cols()) {
    throw InvalidArgument("invwishart_logpdf: dimension mismatch");
  }
  check_nu(nu, sigma.rows());
  if (!is_spd(sigma) || !is_spd(psi)) {
    throw InvalidArgument("invwishart_logpdf: arguments must be SPD");
  }
  const Matrix precision = inverse_spd(sigma);
  return invwishart_logpdf_precision(precision, -logdet_spd(sigma), nu, psi, logdet_spd(psi));
}

double invwishart_logpdf_precision(const Matrix& precision, double logdet_precision, double nu,
                                   const Matrix& psi, double logdet_psi) {
  const auto d = precision.rows();
  const double dd = static_cast<double>(d);
  return log_normalizer(nu, d, logdet_psi) + 0.5 * (nu + dd + 1.0) * logdet_precision -
         0.5 * (psi.cwiseProduct(precision)).sum();
}

Matrix sample_wishart_chol(double nu, const Matrix& scale_chol, Rng& rng) {
  const auto d = scale_chol.rows();
  check_nu(nu, d);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    // χ²(ν − i) with 0-based i, drawn as 2·Gamma((ν − i)/2).
    std::gamma_distribution<double> gamma(0.5 * (nu - static_cast<double>(i)), 2.0);
    a(i, i) = std::sqrt(gamma(rng));
    for (Eigen::Index j = 0; j < i; ++j) {
      a(i, j) = normal(rng);
    }
  }
  const Matrix la = scale_chol.triangularView<Eigen::Lower>() * a;
  Matrix w = la * la.transpose();
  return symmetrized(w);
}

InvWishartDraw sample_invwishart(double nu, const Matrix& psi, Rng& rng) {
  return InvWishartDist(nu, psi).sample(rng);
}

InvWishartDist::InvWishartDist(double nu, const Matrix& psi) : nu_(nu), psi_(symmetrized(psi)) {
  check_nu(nu, psi.rows());
  if (!is_spd(psi_)) {
    throw InvalidArgument("inverse Wishart: scale must be SPD");
  }
  psi_inv_chol_ = Eigen::LLT<Matrix>(inverse_spd(psi_)).matrixL();
  logdet_psi_ = logdet_spd(psi_);
}

InvWishartDraw InvWishartDist::sample(Rng& rng) const {
  InvWishartDraw draw;
  draw.precision = sample_wishart_chol(nu_, psi_inv_chol_, rng);
  draw.sigma = inverse_spd(draw.precision);
  return draw;
}

double InvWishartDist::log_pdf_precision(const Matrix& precision, double logdet_precision) const {
  return invwishart_logpdf_precision(precision, logdet_precision, nu_, psi_, logdet_psi_);
}

}  // namespace vclust
