#include "vclust/variational.hpp"

#include "vclust/error.hpp"
#include "vclust/invwishart.hpp"
#include "vclust/linalg.hpp"
#include "vclust/special.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace vclust {

double gaussian_log_likelihood(const SampleStats& stats, const Matrix& precision) {
  const double n = static_cast<double>(stats.n());
  const double p = static_cast<double>(stats.p());
  const double fit = logdet_spd(precision) - stats.covariance().cwiseProduct(precision).sum();
  return 0.5 * n * fit - 0.5 * n * p * std::log(2.0 * std::numbers::pi);
}

double analytic_log_marginal_basic(const SampleStats& stats, const Clustering& clustering,
                                   const Hyperparams& hyper) {
  if (static_cast<std::size_t>(stats.p()) != clustering.size()) {
    throw InvalidArgument("analytic marginal: clustering length differs from p");
  }
  hyper.validate(clustering);
  const double n = static_cast<double>(stats.n());
  double total = 0.0;
  for (int j = 0; j < clustering.num_clusters(); ++j) {
    const Matrix& psi = hyper.scale_blocks[j];
    const int d = static_cast<int>(psi.rows());
    const double nu = hyper.nu_blocks[j];
    const Matrix posterior_scale = psi + n * extract_block_cov(stats, clustering, j);
    total += -0.5 * n * d * std::log(std::numbers::pi) + multigamma_log(d, 0.5 * (nu + n)) -
             multigamma_log(d, 0.5 * nu) + 0.5 * nu * logdet_spd(psi) -
             0.5 * (nu + n) * logdet_spd(posterior_scale);
  }
  return total;
}

double NuObjective::value(double nu) const {
  const double d = dim;
  double psi_sum = 0.0;
  for (int i = 1; i <= dim; ++i) {
    psi_sum += digamma(0.5 * (nu - d + i));
  }
  return nu / (nu + d + 1.0) * trace - 2.0 * multigamma_log(dim, 0.5 * nu) - nu * d +
         d * c * std::log(nu + d + 1.0) + (nu - c) * psi_sum;
}

double NuObjective::derivative(double nu) const {
  // The ψ sums from Γ_d and from the entropy term cancel.
  const double d = dim;
  const double m = nu + d + 1.0;
  double tri_sum = 0.0;
  for (int i = 1; i <= dim; ++i) {
    tri_sum += trigamma(0.5 * (nu - d + i));
  }
  return trace * (d + 1.0) / (m * m) - d + d * c / m + 0.5 * (nu - c) * tri_sum;
}

double minimize_nu(const NuObjective& f, double upper) {
  const double lo = f.lower();
  const double hi = std::max(upper, lo + 1.0);
  const auto safe = [&](double nu) {
    const double v = f.value(nu);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };
  if (!std::isfinite(f.value(lo)) && !std::isfinite(f.value(hi)) &&
      !std::isfinite(f.value(0.5 * (lo + hi)))) {
    throw NumericalError("nu_g search: objective is non-finite over the bracket");
  }
  const auto [nu0, f0] = boost::math::tools::brent_find_minima(safe, lo, hi, 52);

  // Brent stops at √eps relative accuracy; refine on the derivative's sign change.
  const double g0 = f.derivative(nu0);
  if (g0 == 0.0) {
    return nu0;
  }
  double step = 1e-6 * std::max(1.0, nu0);
  double a = nu0;
  double b = nu0;
  bool bracketed = false;
  for (int tries = 0; tries < 60 && !bracketed; ++tries) {
    b = g0 > 0.0 ? std::max(lo, nu0 - step) : std::min(hi, nu0 + step);
    const double gb = f.derivative(b);
    if (std::signbit(gb) != std::signbit(g0) || gb == 0.0) {
      bracketed = true;
    } else if (b == lo || b == hi) {
      break;
    }
    step *= 2.0;
  }
  if (!bracketed) {
    return nu0;
  }
  if (a > b) {
    std::swap(a, b);
  }
  std::uintmax_t max_iter = 200;
  const auto [r0, r1] = boost::math::tools::toms748_solve(
      [&](double nu) { return f.derivative(nu); }, a, b, boost::math::tools::eps_tolerance<double>(52),
      max_iter);
  const double root = 0.5 * (r0 + r1);
  return safe(root) <= f0 + 1e-9 * (1.0 + std::abs(f0)) ? root : nu0;
}

double fit_nu_g_eps(const MapSolution& map, const SampleStats& stats, const Hyperparams& hyper) {
  const double n = static_cast<double>(stats.n());
  const Matrix target = hyper.scale_eps + hyper.beta * n * stats.covariance();
  const NuObjective f{static_cast<int>(stats.p()), hyper.nu_eps,
                      target.cwiseProduct(map.x_eps).sum()};
  return minimize_nu(f, hyper.nu_eps + n + 10.0 * static_cast<double>(stats.p()));
}

double fit_nu_g_block(const MapSolution& map, const SampleStats& stats, const Clustering& clustering,
                      const Hyperparams& hyper, int j) {
  const double n = static_cast<double>(stats.n());
  const Matrix target = hyper.scale_blocks.at(j) + n * extract_block_cov(stats, clustering, j);
  const int d = static_cast<int>(target.rows());
  const NuObjective f{d, hyper.nu_blocks[j] + n, target.cwiseProduct(map.x_blocks.at(j)).sum()};
  return minimize_nu(f, hyper.nu_blocks[j] + n + 10.0 * d);
}

double log_joint_density(const SampleStats& stats, const Clustering& clustering,
                         const Hyperparams& hyper, const Matrix& x_eps,
                         const std::vector<Matrix>& x_blocks) {
  const Matrix precision = embed_blocks(x_blocks, clustering) + hyper.beta * x_eps;
  double total = gaussian_log_likelihood(stats, precision);
  total += invwishart_logpdf_precision(x_eps, logdet_spd(x_eps), hyper.nu_eps, hyper.scale_eps,
                                       logdet_spd(hyper.scale_eps));
  for (int j = 0; j < clustering.num_clusters(); ++j) {
    total += invwishart_logpdf_precision(x_blocks[j], logdet_spd(x_blocks[j]), hyper.nu_blocks[j],
                                         hyper.scale_blocks[j], logdet_spd(hyper.scale_blocks[j]));
  }
  return total;
}

namespace {

// log InvW(Σ̂ | ν, (ν+d+1)Σ̂) evaluated at its own mode Σ̂ = X̂⁻¹.
double log_g_at_mode(const Matrix& x_hat, double nu) {
  const double d = static_cast<double>(x_hat.rows());
  const double logdet_x = logdet_spd(x_hat);
  const Matrix scale = (nu + d + 1.0) * inverse_spd(x_hat);
  const double logdet_scale = d * std::log(nu + d + 1.0) - logdet_x;
  return invwishart_logpdf_precision(x_hat, logdet_x, nu, scale, logdet_scale);
}

}  // namespace

VariationalFit variational_from_map(const SampleStats& stats, const Clustering& clustering,
                                    const Hyperparams& hyper, MapSolution map) {
  VariationalFit fit;
  fit.nu_g_eps = fit_nu_g_eps(map, stats, hyper);
  fit.log_g = log_g_at_mode(map.x_eps, fit.nu_g_eps);
  for (int j = 0; j < clustering.num_clusters(); ++j) {
    const double nu = fit_nu_g_block(map, stats, clustering, hyper, j);
    fit.nu_g_blocks.push_back(nu);
    fit.log_g += log_g_at_mode(map.x_blocks[j], nu);
  }
  fit.log_joint = log_joint_density(stats, clustering, hyper, map.x_eps, map.x_blocks);
  fit.log_marginal = fit.log_joint - fit.log_g;
  if (!std::isfinite(fit.log_marginal)) {
    throw NumericalError("variational estimate is not finite");
  }
  fit.map = std::move(map);
  return fit;
}

VariationalFit variational_log_marginal(const SampleStats& stats, const Clustering& clustering,
                                        const Hyperparams& hyper, const AdmmConfig& cfg) {
  return variational_from_map(stats, clustering, hyper, solve_map(stats, clustering, hyper, cfg));
}

}  // namespace vclust
