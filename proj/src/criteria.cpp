#include "vclust/criteria.hpp"

#include "vclust/error.hpp"
#include "vclust/hyperparams.hpp"
#include "vclust/linalg.hpp"
#include "vclust/variational.hpp"

#include <cmath>
#include <limits>

namespace vclust {

Criterion Criterion::parse(const std::string& spec) {
  Criterion c;
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "proposed-vi") {
    c.kind = CriterionKind::ProposedVi;
  } else if (head == "proposed-mcmc") {
    c.kind = CriterionKind::ProposedMcmc;
  } else if (head == "basic-iw") {
    c.kind = CriterionKind::BasicIw;
  } else if (head == "ebic") {
    c.kind = CriterionKind::Ebic;
    c.exclude_one_cluster = true;
  } else if (head == "aic") {
    c.kind = CriterionKind::Aic;
    c.exclude_one_cluster = true;
  } else if (head == "chi") {
    c.kind = CriterionKind::Chi;
  } else {
    throw InvalidArgument("unknown criterion '" + spec + "'");
  }
  if (!arg.empty()) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size()) {
      throw InvalidArgument("criterion parameter '" + arg + "' is not a number");
    }
    if (c.kind == CriterionKind::Ebic) {
      c.gamma = v;
    } else if (c.kind == CriterionKind::ProposedVi || c.kind == CriterionKind::ProposedMcmc) {
      c.beta = v;
    } else {
      throw InvalidArgument("criterion '" + head + "' takes no parameter");
    }
  }
  c.validate();
  return c;
}

std::string Criterion::name() const {
  switch (kind) {
    case CriterionKind::ProposedVi:
      return "proposed-vi";
    case CriterionKind::ProposedMcmc:
      return "proposed-mcmc";
    case CriterionKind::BasicIw:
      return "basic-iw";
    case CriterionKind::Ebic: {
      std::string g = std::to_string(gamma);
      g.erase(g.find_last_not_of('0') + 1);
      if (g.back() == '.') {
        g.push_back('0');
      }
      return "ebic:" + g;
    }
    case CriterionKind::Aic:
      return "aic";
    case CriterionKind::Chi:
      return "chi";
  }
  return "";
}

bool Criterion::is_likelihood() const {
  return kind == CriterionKind::ProposedVi || kind == CriterionKind::ProposedMcmc ||
         kind == CriterionKind::BasicIw;
}

void Criterion::validate() const {
  if (!(gamma >= 0.0)) {
    throw InvalidArgument("criterion: gamma must be >= 0");
  }
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw InvalidArgument("criterion: beta must lie in [0, 1)");
  }
}

Matrix ridge_block_precision(const SampleStats& stats, const Clustering& clustering) {
  std::vector<Matrix> blocks;
  for (int j = 0; j < clustering.num_clusters(); ++j) {
    const Matrix sj = extract_block_cov(stats, clustering, j);
    blocks.push_back(inverse_spd(sj + 1e-3 * Matrix::Identity(sj.rows(), sj.cols())));
  }
  return embed_blocks(blocks, clustering);
}

long within_block_edges(const Clustering& clustering) {
  long edges = 0;
  for (std::size_t pj : clustering.cluster_sizes()) {
    edges += static_cast<long>(pj * (pj - 1) / 2);
  }
  return edges;
}

namespace {

void check_match(const SampleStats& stats, const Clustering& clustering) {
  if (static_cast<std::size_t>(stats.p()) != clustering.size()) {
    throw InvalidArgument("criterion: clustering length differs from p");
  }
}

}  // namespace

double ebic_score(const SampleStats& stats, const Clustering& clustering, double gamma) {
  check_match(stats, clustering);
  const double ell = gaussian_log_likelihood(stats, ridge_block_precision(stats, clustering));
  const double edges = static_cast<double>(within_block_edges(clustering));
  const double n = static_cast<double>(stats.n());
  const double p = static_cast<double>(stats.p());
  return -(-2.0 * ell + edges * std::log(n) + 4.0 * gamma * edges * std::log(p));
}

double aic_score(const SampleStats& stats, const Clustering& clustering) {
  check_match(stats, clustering);
  const double ell = gaussian_log_likelihood(stats, ridge_block_precision(stats, clustering));
  const double df = static_cast<double>(stats.p() + within_block_edges(clustering));
  return -(-2.0 * ell + 2.0 * df);
}

Matrix correlation_profile_embedding(const Matrix& cov) {
  const Vector d = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  Matrix corr = cov;
  for (Eigen::Index i = 0; i < cov.rows(); ++i) {
    for (Eigen::Index j = 0; j < cov.cols(); ++j) {
      const double denom = d(i) * d(j);
      corr(i, j) = denom > 0.0 ? cov(i, j) / denom : (i == j ? 1.0 : 0.0);
    }
  }
  return corr;
}

double chi_score(const Matrix& embedding, const Clustering& clustering) {
  const Eigen::Index p = embedding.rows();
  if (static_cast<std::size_t>(p) != clustering.size()) {
    throw InvalidArgument("chi: embedding must have one row per variable");
  }
  const int k = clustering.num_clusters();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (k == 1 || k == p) {
    return -kInf;
  }
  const Eigen::RowVectorXd centre = embedding.colwise().mean();
  double between = 0.0;
  double within = 0.0;
  for (int j = 0; j < k; ++j) {
    const auto& idx = clustering.members(j);
    const Matrix rows = embedding(idx, Eigen::all);
    const Eigen::RowVectorXd mu = rows.colwise().mean();
    between += static_cast<double>(idx.size()) * (mu - centre).squaredNorm();
    within += (rows.rowwise() - mu).squaredNorm();
  }
  if (within <= 0.0) {
    return between > 0.0 ? kInf : -kInf;
  }
  return (between / (k - 1.0)) / (within / static_cast<double>(p - k));
}

ScoreRecord score(const SampleStats& stats, const Clustering& candidate, const Criterion& criterion,
                  const ScoreConfigs& cfgs) {
  criterion.validate();
  check_match(stats, candidate);
  ScoreRecord rec;
  switch (criterion.kind) {
    case CriterionKind::ProposedVi: {
      const VariationalFit fit = variational_log_marginal(
          stats, candidate, Hyperparams::defaults(candidate, criterion.beta), cfgs.admm);
      rec.value = fit.log_marginal;
      rec.converged = fit.map.converged;
      rec.nu_g_eps = fit.nu_g_eps;
      rec.nu_g_blocks = fit.nu_g_blocks;
      break;
    }
    case CriterionKind::ProposedMcmc: {
      const Hyperparams hyper = Hyperparams::defaults(candidate, criterion.beta);
      const MapSolution map = solve_map(stats, candidate, hyper, cfgs.admm);
      const ChibEstimate est = chib_log_marginal(stats, candidate, hyper, map, cfgs.mcmc);
      rec.value = est.log_marginal;
      rec.converged = map.converged;
      rec.std_error = est.std_error;
      break;
    }
    case CriterionKind::BasicIw:
      rec.value = analytic_log_marginal_basic(stats, candidate, Hyperparams::defaults(candidate, 0.0));
      break;
    case CriterionKind::Ebic:
      rec.value = ebic_score(stats, candidate, criterion.gamma);
      break;
    case CriterionKind::Aic:
      rec.value = aic_score(stats, candidate);
      break;
    case CriterionKind::Chi:
      rec.value = chi_score(cfgs.chi_embedding.size() > 0
                                ? cfgs.chi_embedding
                                : correlation_profile_embedding(stats.covariance()),
                            candidate);
      break;
  }
  return rec;
}

}  // namespace vclust
