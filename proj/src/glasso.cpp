#include "vclust/glasso.hpp"

#include "vclust/error.hpp"
#include "vclust/linalg.hpp"

#include <cmath>
#include <limits>

namespace vclust {

void GlassoConfig::validate() const {
  if (!(tol > 0.0) || max_iters < 1 || !(rho > 0.0)) {
    throw InvalidArgument("glasso: tol and rho must be positive, max_iters >= 1");
  }
}

namespace {

double off_diagonal_l1(const Matrix& x) {
  return x.cwiseAbs().sum() - x.diagonal().cwiseAbs().sum();
}

Matrix soft_threshold_off_diagonal(const Matrix& a, double t) {
  Matrix z = a;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (r != c) {
        const double v = a(r, c);
        z(r, c) = std::copysign(std::max(std::abs(v) - t, 0.0), v);
      }
    }
  }
  return z;
}

}  // namespace

double glasso_objective(const Matrix& x, const Matrix& s, double lambda) {
  return -logdet_spd(x) + s.cwiseProduct(x).sum() + lambda * off_diagonal_l1(x);
}

double glasso_duality_gap(const Matrix& x, const Matrix& s, double lambda) {
  Matrix gamma = inverse_spd(x) - s;
  for (Eigen::Index c = 0; c < gamma.cols(); ++c) {
    for (Eigen::Index r = 0; r < gamma.rows(); ++r) {
      gamma(r, c) = r == c ? 0.0 : std::clamp(gamma(r, c), -lambda, lambda);
    }
  }
  const Matrix dual_cov = symmetrized(s + gamma);
  if (!is_spd(dual_cov)) {
    return std::numeric_limits<double>::infinity();
  }
  const double dual = logdet_spd(dual_cov) + static_cast<double>(s.rows());
  return glasso_objective(x, s, lambda) - dual;
}

GlassoResult graphical_lasso(const Matrix& s, double lambda, const GlassoConfig& cfg,
                             const Matrix& start) {
  cfg.validate();
  if (s.rows() != s.cols() || s.rows() == 0) {
    throw InvalidArgument("glasso: S must be square and non-empty");
  }
  if (!(lambda >= 0.0)) {
    throw InvalidArgument("glasso: lambda must be non-negative");
  }
  const Eigen::Index p = s.rows();
  Matrix z;
  if (start.size() == 0) {
    z = (s.diagonal().array() + 1e-3).inverse().matrix().asDiagonal();
  } else {
    z = start;
  }
  Matrix u = Matrix::Zero(p, p);
  double rho = cfg.rho;

  GlassoResult result;
  result.precision = z;
  result.duality_gap = is_spd(z) ? glasso_duality_gap(z, s, lambda)
                                 : std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const Matrix x = solve_stationarity(rho * (z - u) - s, rho);
    const Matrix z_old = z;
    z = soft_threshold_off_diagonal(x + u, lambda / rho);
    u += x - z;
    result.iterations = iter;

    const double primal = (x - z).norm();
    const double dual = rho * (z - z_old).norm();
    if (iter % 10 == 0 || iter == cfg.max_iters) {
      // The thresholded iterate carries the sparsity pattern; it is certified
      // by its own gap and rejected while not positive definite.
      const double gap = is_spd(z) ? glasso_duality_gap(z, s, lambda)
                                   : std::numeric_limits<double>::infinity();
      if (gap < result.duality_gap) {
        result.precision = z;
        result.duality_gap = gap;
      }
      if (gap <= cfg.tol) {
        result.converged = true;
        break;
      }
      // Scaled dual U must be rescaled together with ρ.
      if (primal > 10.0 * dual) {
        rho *= 2.0;
        u /= 2.0;
      } else if (dual > 10.0 * primal) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }
  return result;
}

}  // namespace vclust
