#include "vclust/chib.hpp"

#include "vclust/error.hpp"
#include "vclust/linalg.hpp"
#include "vclust/random.hpp"
#include "vclust/variational.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace vclust {

void McmcConfig::validate() const {
  if (samples < 100) {
    throw InvalidArgument("mcmc: samples must be >= 100");
  }
  if (!(burn_in_frac >= 0.0 && burn_in_frac < 1.0)) {
    throw InvalidArgument("mcmc: burn_in_frac must lie in [0, 1)");
  }
  if (!(kappa > 0.0)) {
    throw InvalidArgument("mcmc: kappa must be positive");
  }
  if (batches < 2 || batches > samples / 2) {
    throw InvalidArgument("mcmc: batches must lie in [2, samples/2]");
  }
  if (psrf_chains < 1) {
    throw InvalidArgument("mcmc: psrf_chains must be >= 1");
  }
}

double log_acceptance_prob(double log_joint_current, double log_joint_proposed,
                           double log_q_current, double log_q_proposed) {
  if (!std::isfinite(log_joint_proposed) || !std::isfinite(log_q_proposed)) {
    throw NumericalError("acceptance probability: non-finite density at the proposal");
  }
  const double r = log_joint_proposed + log_q_current - log_joint_current - log_q_proposed;
  return std::min(0.0, r);
}

Vector lower_triangle(const Matrix& m) {
  const Eigen::Index d = m.rows();
  Vector v(d * (d + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = c; r < d; ++r) {
      v(k++) = m(r, c);
    }
  }
  return v;
}

std::vector<InvWishartDist> chib_proposals(const SampleStats& stats, const Clustering& clustering,
                                           const Hyperparams& hyper, const MapSolution& map,
                                           double kappa) {
  const double n = static_cast<double>(stats.n());
  const double beta = hyper.beta;
  std::vector<InvWishartDist> q;
  q.reserve(clustering.num_clusters() + 1);
  {
    const double nu = beta * kappa * n + hyper.nu_eps;
    const double d = static_cast<double>(stats.p());
    q.emplace_back(nu, (nu + d + 1.0) * inverse_spd(map.x_eps));
  }
  for (int j = 0; j < clustering.num_clusters(); ++j) {
    const double nu = (1.0 - beta) * kappa * n + hyper.nu_blocks[j];
    const double d = static_cast<double>(map.x_blocks[j].rows());
    q.emplace_back(nu, (nu + d + 1.0) * inverse_spd(map.x_blocks[j]));
  }
  return q;
}

namespace {

struct Component {
  Matrix sigma;
  Matrix precision;
  double logdet_precision = 0.0;
  double log_prior = 0.0;
};

// Joint density p(θ, 𝒳) of the noisy model with per-component caching.
class JointModel {
 public:
  JointModel(const SampleStats& stats, const Clustering& clustering, const Hyperparams& hyper)
      : stats_(stats), clustering_(clustering), hyper_(hyper) {
    prior_nu_.push_back(hyper.nu_eps);
    prior_scale_.push_back(hyper.scale_eps);
    for (int j = 0; j < clustering.num_clusters(); ++j) {
      prior_nu_.push_back(hyper.nu_blocks[j]);
      prior_scale_.push_back(hyper.scale_blocks[j]);
    }
    for (const Matrix& s : prior_scale_) {
      prior_logdet_.push_back(logdet_spd(s));
    }
  }

  [[nodiscard]] int num_stages() const { return static_cast<int>(prior_nu_.size()); }

  [[nodiscard]] Component make(int stage, Matrix sigma, Matrix precision) const {
    Component c;
    c.sigma = std::move(sigma);
    c.precision = std::move(precision);
    c.logdet_precision = logdet_spd(c.precision);
    c.log_prior = invwishart_logpdf_precision(c.precision, c.logdet_precision, prior_nu_[stage],
                                              prior_scale_[stage], prior_logdet_[stage]);
    return c;
  }

  // Likelihood with component `stage` optionally replaced.
  [[nodiscard]] double log_likelihood(const std::vector<Component>& state, int stage = -1,
                                      const Component* replacement = nullptr) const {
    const auto pick = [&](int i) -> const Matrix& {
      return i == stage ? replacement->precision : state[i].precision;
    };
    std::vector<Matrix> blocks;
    blocks.reserve(state.size() - 1);
    for (int i = 1; i < static_cast<int>(state.size()); ++i) {
      blocks.push_back(pick(i));
    }
    const Matrix precision = embed_blocks(blocks, clustering_) + hyper_.beta * pick(0);
    return gaussian_log_likelihood(stats_, precision);
  }

  [[nodiscard]] double log_joint(const std::vector<Component>& state) const {
    double total = log_likelihood(state);
    for (const Component& c : state) {
      total += c.log_prior;
    }
    return total;
  }

  // Joint after replacing one component; the likelihood ignores Σ_ε when β = 0.
  [[nodiscard]] double log_joint_with(const std::vector<Component>& state, double current_joint,
                                      int stage, const Component& replacement) const {
    const double prior_change = replacement.log_prior - state[stage].log_prior;
    if (stage == 0 && hyper_.beta == 0.0) {
      return current_joint + prior_change;
    }
    double total = log_likelihood(state, stage, &replacement);
    for (const Component& c : state) {
      total += c.log_prior;
    }
    return total + prior_change;
  }

 private:
  const SampleStats& stats_;
  const Clustering& clustering_;
  const Hyperparams& hyper_;
  std::vector<double> prior_nu_;
  std::vector<Matrix> prior_scale_;
  std::vector<double> prior_logdet_;
};

std::vector<Component> modes(const JointModel& model, const MapSolution& map) {
  std::vector<Component> state;
  state.push_back(model.make(0, inverse_spd(map.x_eps), map.x_eps));
  for (const Matrix& x : map.x_blocks) {
    state.push_back(model.make(static_cast<int>(state.size()), inverse_spd(x), x));
  }
  return state;
}

Component draw(const JointModel& model, int stage, const InvWishartDist& q, Rng& rng) {
  InvWishartDraw d = q.sample(rng);
  return model.make(stage, std::move(d.sigma), std::move(d.precision));
}

double log_q(const InvWishartDist& q, const Component& c) {
  return q.log_pdf_precision(c.precision, c.logdet_precision);
}

struct RunOutput {
  std::vector<double> numerator;    // log[α(θ_s → θ̂_s) q_s(θ̂_s)] per kept sweep
  std::vector<double> denominator;  // log α(θ̂_{s−1} → θ') per kept sweep, stage s ≥ 1
  std::vector<double> acceptance;   // per free component
  Matrix states;
};

// One reduced run: stages < s are clamped at the modes.
RunOutput reduced_run(const JointModel& model, const std::vector<InvWishartDist>& q,
                      const std::vector<Component>& mode_state, int s, const McmcConfig& cfg,
                      bool want_ordinates, bool record) {
  const int stages = model.num_stages();
  Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(s));
  std::vector<Component> state = mode_state;
  double joint = model.log_joint(state);
  const int burn = static_cast<int>(std::ceil(cfg.burn_in_frac * cfg.samples));

  std::vector<double> log_q_current(stages);
  for (int c = s; c < stages; ++c) {
    log_q_current[c] = log_q(q[c], state[c]);
  }
  const double log_q_mode = log_q(q[s], mode_state[s]);
  const double log_q_prev_mode = s > 0 ? log_q(q[s - 1], mode_state[s - 1]) : 0.0;

  RunOutput out;
  std::vector<long> accepted(stages, 0);
  if (want_ordinates) {
    out.numerator.reserve(cfg.samples);
    out.denominator.reserve(s > 0 ? cfg.samples : 0);
  }
  Eigen::Index width = 0;
  if (record) {
    for (int c = s; c < stages; ++c) {
      const Eigen::Index d = state[c].sigma.rows();
      width += d * (d + 1) / 2;
    }
    out.states.resize(cfg.samples, width);
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (int t = 0; t < burn + cfg.samples; ++t) {
    for (int c = s; c < stages; ++c) {
      Component proposal = draw(model, c, q[c], rng);
      const double log_q_prop = log_q(q[c], proposal);
      const double joint_prop = model.log_joint_with(state, joint, c, proposal);
      const double log_alpha =
          log_acceptance_prob(joint, joint_prop, log_q_current[c], log_q_prop);
      if (std::log(unif(rng)) < log_alpha) {
        state[c] = std::move(proposal);
        joint = joint_prop;
        log_q_current[c] = log_q_prop;
        if (t >= burn) {
          ++accepted[c];
        }
      }
    }
    if (t < burn) {
      continue;
    }
    if (want_ordinates) {
      const double joint_mode = model.log_joint_with(state, joint, s, mode_state[s]);
      out.numerator.push_back(
          log_acceptance_prob(joint, joint_mode, log_q_current[s], log_q_mode) + log_q_mode);
      if (s > 0) {
        // State s−1 sits at its mode here; pair a fresh q_{s−1} draw with θ_{≥s}.
        Component fresh = draw(model, s - 1, q[s - 1], rng);
        const double joint_fresh = model.log_joint_with(state, joint, s - 1, fresh);
        out.denominator.push_back(
            log_acceptance_prob(joint, joint_fresh, log_q_prev_mode, log_q(q[s - 1], fresh)));
      }
    }
    if (record) {
      Eigen::Index offset = 0;
      for (int c = s; c < stages; ++c) {
        const Vector v = lower_triangle(state[c].sigma);
        out.states.row(t - burn).segment(offset, v.size()) = v.transpose();
        offset += v.size();
      }
    }
  }
  for (int c = s; c < stages; ++c) {
    out.acceptance.push_back(static_cast<double>(accepted[c]) / cfg.samples);
  }
  return out;
}

// Denominator of the last stage: every other component is clamped.
std::vector<double> final_denominator(const JointModel& model, const std::vector<InvWishartDist>& q,
                                      const std::vector<Component>& mode_state,
                                      const McmcConfig& cfg) {
  const int last = model.num_stages() - 1;
  Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(model.num_stages()));
  std::vector<Component> state = mode_state;
  const double joint = model.log_joint(state);
  const double log_q_mode = log_q(q[last], mode_state[last]);
  std::vector<double> out;
  out.reserve(cfg.samples);
  for (int m = 0; m < cfg.samples; ++m) {
    Component fresh = draw(model, last, q[last], rng);
    const double joint_fresh = model.log_joint_with(state, joint, last, fresh);
    out.push_back(log_acceptance_prob(joint, joint_fresh, log_q_mode, log_q(q[last], fresh)));
  }
  return out;
}

double log_mean_exp(const std::vector<double>& v) {
  const double mx = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(mx)) {
    return mx;
  }
  double sum = 0.0;
  for (double x : v) {
    sum += std::exp(x - mx);
  }
  return mx + std::log(sum / static_cast<double>(v.size()));
}

// Batch means of exp(v − shift).
Vector batch_means(const std::vector<double>& v, double shift, int batches) {
  const auto len = static_cast<Eigen::Index>(v.size()) / batches;
  Vector means = Vector::Zero(batches);
  for (int b = 0; b < batches; ++b) {
    for (Eigen::Index i = 0; i < len; ++i) {
      means(b) += std::exp(v[b * len + i] - shift);
    }
    means(b) /= static_cast<double>(len);
  }
  return means;
}

// Delta-method variance of c_a·log mean(e^a) + c_b·log mean(e^b) for two
// series observed over the same sweeps.
double log_ratio_variance(const std::vector<double>& a, double ca, const std::vector<double>* b,
                          double cb, int batches) {
  const double sa = log_mean_exp(a);
  const Vector ma = batch_means(a, sa, batches);
  const double inv_b = 1.0 / static_cast<double>(batches);
  const auto centred = [](const Vector& m) { return Vector(m.array() - m.mean()); };
  const Vector da = centred(ma) / ma.mean();
  double var = ca * ca * da.squaredNorm() / (batches - 1.0);
  if (b != nullptr) {
    const double sb = log_mean_exp(*b);
    const Vector mb = batch_means(*b, sb, batches);
    const Vector db = centred(mb) / mb.mean();
    var += cb * cb * db.squaredNorm() / (batches - 1.0);
    var += 2.0 * ca * cb * da.dot(db) / (batches - 1.0);
  }
  return var * inv_b;
}

}  // namespace

GibbsChain mh_within_gibbs(const SampleStats& stats, const Clustering& clustering,
                           const Hyperparams& hyper, const MapSolution& map, int start_stage,
                           const McmcConfig& cfg) {
  cfg.validate();
  hyper.validate(clustering);
  const JointModel model(stats, clustering, hyper);
  if (start_stage < 0 || start_stage >= model.num_stages()) {
    throw InvalidArgument("mh_within_gibbs: start stage out of range");
  }
  const auto q = chib_proposals(stats, clustering, hyper, map, cfg.kappa);
  RunOutput run = reduced_run(model, q, modes(model, map), start_stage, cfg, false, true);
  return {std::move(run.states), std::move(run.acceptance)};
}

ChibEstimate chib_log_marginal(const SampleStats& stats, const Clustering& clustering,
                               const Hyperparams& hyper, const MapSolution& map,
                               const McmcConfig& cfg) {
  cfg.validate();
  hyper.validate(clustering);
  const JointModel model(stats, clustering, hyper);
  const auto q = chib_proposals(stats, clustering, hyper, map, cfg.kappa);
  const std::vector<Component> mode_state = modes(model, map);
  const int stages = model.num_stages();

  ChibEstimate est;
  est.log_joint_at_mode = model.log_joint(mode_state);
  std::vector<double> log_num(stages);
  std::vector<double> log_den(stages);
  double variance = 0.0;
  const bool want_psrf = cfg.psrf_chains >= 2;
  std::vector<Matrix> psrf_chains;

  for (int s = 0; s < stages; ++s) {
    const bool record = (cfg.record_chain || want_psrf) && s == 0;
    RunOutput run = reduced_run(model, q, mode_state, s, cfg, true, record);
    log_num[s] = log_mean_exp(run.numerator);
    est.acceptance_rates.push_back(run.acceptance.front());
    if (run.acceptance.front() < 0.01) {
      est.warnings.push_back("stage " + std::to_string(s) +
                             ": acceptance rate below 1%; consider a larger kappa");
    }
    if (s > 0) {
      log_den[s - 1] = log_mean_exp(run.denominator);
      // This run contributes −log N̄_s + log D̄_{s−1}.
      variance += log_ratio_variance(run.numerator, -1.0, &run.denominator, 1.0, cfg.batches);
    } else {
      variance += log_ratio_variance(run.numerator, -1.0, nullptr, 0.0, cfg.batches);
      if (want_psrf) {
        psrf_chains.push_back(run.states);
      }
      if (cfg.record_chain) {
        est.chain = std::move(run.states);
      }
    }
  }
  const std::vector<double> last = final_denominator(model, q, mode_state, cfg);
  log_den[stages - 1] = log_mean_exp(last);
  variance += log_ratio_variance(last, 1.0, nullptr, 0.0, cfg.batches);

  double sum = 0.0;
  for (int s = 0; s < stages; ++s) {
    if (!std::isfinite(log_den[s]) || !std::isfinite(log_num[s])) {
      throw NumericalError("chib: stage " + std::to_string(s) +
                           " average vanished; increase kappa so proposals reach the mode");
    }
    est.per_stage_log_ordinates.push_back(log_num[s] - log_den[s]);
    est.mode_move_rates.push_back(std::exp(log_den[s]));
    sum += log_num[s] - log_den[s];
  }
  est.log_marginal = est.log_joint_at_mode - sum;
  est.std_error = std::sqrt(std::max(0.0, variance));

  if (want_psrf) {
    for (int c = 1; c < cfg.psrf_chains; ++c) {
      McmcConfig alt = cfg;
      alt.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(c));
      psrf_chains.push_back(reduced_run(model, q, mode_state, 0, alt, false, true).states);
    }
    try {
      est.psrf = gelman_rubin_mpsrf(psrf_chains);
    } catch (const NumericalError& e) {
      est.warnings.push_back(std::string("psrf unavailable: ") + e.what());
    }
  }
  return est;
}

double gelman_rubin_mpsrf(const std::vector<Matrix>& chains) {
  if (chains.size() < 2) {
    throw InvalidArgument("mpsrf: need at least two chains");
  }
  const Eigen::Index len = chains[0].rows();
  const Eigen::Index dim = chains[0].cols();
  if (len < 10 || dim < 1) {
    throw InvalidArgument("mpsrf: chains need at least 10 draws");
  }
  for (const Matrix& c : chains) {
    if (c.rows() != len || c.cols() != dim) {
      throw InvalidArgument("mpsrf: chains differ in shape");
    }
  }
  const double m = static_cast<double>(chains.size());
  const double n = static_cast<double>(len);
  Matrix means(static_cast<Eigen::Index>(chains.size()), dim);
  Matrix within = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const Vector mu = chains[i].colwise().mean();
    means.row(static_cast<Eigen::Index>(i)) = mu.transpose();
    const Matrix centred = chains[i].rowwise() - mu.transpose();
    within += centred.transpose() * centred;
  }
  within /= m * (n - 1.0);
  const Vector grand = means.colwise().mean();
  const Matrix spread = means.rowwise() - grand.transpose();
  const Matrix between_over_n = spread.transpose() * spread / (m - 1.0);

  Eigen::LLT<Matrix> llt(within);
  if (llt.info() != Eigen::Success ||
      llt.matrixL().toDenseMatrix().diagonal().minCoeff() <= 1e-150) {
    throw NumericalError("mpsrf: within-chain covariance is singular");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(between_over_n, within,
                                                       Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success) {
    throw NumericalError("mpsrf: generalized eigenproblem failed");
  }
  const double lambda = ges.eigenvalues().maxCoeff();
  return (n - 1.0) / n + (1.0 + 1.0 / m) * lambda;
}

}  // namespace vclust
