#include "vclust/map_solver.hpp"

#include "vclust/error.hpp"
#include "vclust/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace vclust {

void AdmmConfig::validate() const {
  if (!(rho_init > 0.0) || !(rho_growth >= 1.0) || growth_every < 1 || !(rho_max >= rho_init)) {
    throw InvalidArgument("admm: invalid penalty schedule");
  }
  if (max_iters < 1 || !(tol_primal > 0.0) || !(tol_dual > 0.0)) {
    throw InvalidArgument("admm: tolerances must be positive and max_iters >= 1");
  }
  if (anderson_memory < 0 || balance_every < 1 || !(balance_ratio > 1.0) ||
      !(balance_factor > 1.0)) {
    throw InvalidArgument("admm: invalid acceleration settings");
  }
}

Matrix MapSolution::x_full(const Clustering& clustering) const {
  return embed_blocks(x_blocks, clustering);
}

Matrix MapSolution::sigma_eps() const { return inverse_spd(x_eps); }

Matrix MapSolution::sigma_block(int j) const { return inverse_spd(x_blocks.at(j)); }

namespace {

void check_dimensions(const SampleStats& stats, const Clustering& clustering,
                      const Hyperparams& hyper) {
  if (static_cast<std::size_t>(stats.p()) != clustering.size()) {
    throw InvalidArgument("map solver: clustering length differs from p");
  }
  hyper.validate(clustering);
}

// Iterate carried between sweeps. X is recomputed from (X_ε, Z, U) at the
// start of every sweep, so it is not part of the state.
struct State {
  Matrix x_eps;
  Matrix z;
  Matrix u;
};

struct SweepResult {
  State next;
  std::vector<Matrix> x_blocks;
  double primal = 0.0;
  double dual = 0.0;
};

class AdmmSweep {
 public:
  AdmmSweep(const SampleStats& stats, const Clustering& clustering, const Hyperparams& hyper)
      : clustering_(clustering),
        hyper_(hyper),
        n_(static_cast<double>(stats.n())),
        s_(stats.covariance()) {}

  SweepResult operator()(const State& in, double rho) const {
    const double beta = hyper_.beta;
    const double a_eps = hyper_.a_eps();
    SweepResult out;
    out.x_blocks.resize(clustering_.num_clusters());

    const Matrix noise = beta * in.x_eps;
    for (int j = 0; j < clustering_.num_clusters(); ++j) {
      const auto& idx = clustering_.members(j);
      const double a_j = hyper_.a_block(j);
      const Matrix r =
          -(hyper_.scale_blocks[j] + in.u(idx, idx) + rho * (noise(idx, idx) - in.z(idx, idx))) /
          a_j;
      out.x_blocks[j] = solve_stationarity(r, rho / a_j);
    }
    const Matrix x = embed_blocks(out.x_blocks, clustering_);

    if (beta > 0.0) {
      const Matrix r = -(hyper_.scale_eps + beta * in.u + rho * beta * (x - in.z)) / a_eps;
      out.next.x_eps = solve_stationarity(r, rho * beta * beta / a_eps);
    } else {
      out.next.x_eps = in.x_eps;
    }

    const Matrix precision = x + beta * out.next.x_eps;
    out.next.z = solve_stationarity((in.u - n_ * s_ + rho * precision) / n_, rho / n_);
    const Matrix residual = precision - out.next.z;
    out.next.u = in.u + rho * residual;

    out.primal = residual.norm();
    // Changes of the later blocks enter the optimality conditions of the
    // earlier ones: Z for X_ε and X, βX_ε for X.
    out.dual = rho * ((out.next.z - in.z).norm() + beta * (out.next.x_eps - in.x_eps).norm());
    return out;
  }

 private:
  const Clustering& clustering_;
  const Hyperparams& hyper_;
  double n_;
  const Matrix& s_;
};

// Flattened (βX_ε, Z, U/ρ); the scaled form keeps the three parts commensurate.
Vector pack(const State& s, double beta, double rho) {
  const Eigen::Index m = s.z.size();
  Vector v(3 * m);
  v.segment(0, m) = (beta * s.x_eps).reshaped();
  v.segment(m, m) = s.z.reshaped();
  v.segment(2 * m, m) = (s.u / rho).reshaped();
  return v;
}

State unpack(const Vector& v, const State& like, double beta, double rho) {
  const Eigen::Index p = like.z.rows();
  const Eigen::Index m = p * p;
  State s;
  if (beta > 0.0) {
    s.x_eps = symmetrized(v.segment(0, m).reshaped(p, p) / beta);
  } else {
    s.x_eps = like.x_eps;
  }
  s.z = symmetrized(v.segment(m, m).reshaped(p, p));
  s.u = symmetrized(rho * v.segment(2 * m, m).reshaped(p, p));
  return s;
}

// Type-II Anderson mixing over the last few fixed-point residuals.
class Anderson {
 public:
  explicit Anderson(int memory) : memory_(memory) {}

  void reset() {
    df_.clear();
    dg_.clear();
    has_prev_ = false;
  }

  // Given g = T(v) and f = g − v, returns the next iterate.
  Vector step(const Vector& g, const Vector& f) {
    if (has_prev_) {
      df_.push_back(f - f_prev_);
      dg_.push_back(g - g_prev_);
      if (static_cast<int>(df_.size()) > memory_) {
        df_.pop_front();
        dg_.pop_front();
      }
    }
    f_prev_ = f;
    g_prev_ = g;
    has_prev_ = true;
    if (df_.empty()) {
      return g;
    }
    const auto cols = static_cast<Eigen::Index>(df_.size());
    Matrix dfm(f.size(), cols);
    Matrix dgm(g.size(), cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
      dfm.col(c) = df_[c];
      dgm.col(c) = dg_[c];
    }
    const Vector gamma = dfm.colPivHouseholderQr().solve(f);
    if (!gamma.allFinite()) {
      reset();
      return g;
    }
    return g - dgm * gamma;
  }

 private:
  int memory_;
  std::deque<Vector> df_;
  std::deque<Vector> dg_;
  Vector f_prev_;
  Vector g_prev_;
  bool has_prev_ = false;
};

}  // namespace

double map_objective(const Matrix& x_eps, const std::vector<Matrix>& x_blocks,
                     const SampleStats& stats, const Clustering& clustering,
                     const Hyperparams& hyper) {
  check_dimensions(stats, clustering, hyper);
  if (x_eps.rows() != stats.p() || x_eps.cols() != stats.p()) {
    throw InvalidArgument("map_objective: X_eps has the wrong size");
  }
  const double n = static_cast<double>(stats.n());
  const Matrix x = embed_blocks(x_blocks, clustering);
  const Matrix precision = x + hyper.beta * x_eps;
  double f = n * stats.covariance().cwiseProduct(precision).sum() - n * logdet_spd(precision);
  f += hyper.scale_eps.cwiseProduct(x_eps).sum() - hyper.a_eps() * logdet_spd(x_eps);
  for (int j = 0; j < clustering.num_clusters(); ++j) {
    f += hyper.scale_blocks[j].cwiseProduct(x_blocks[j]).sum() -
         hyper.a_block(j) * logdet_spd(x_blocks[j]);
  }
  return f;
}

MapSolution solve_map(const SampleStats& stats, const Clustering& clustering,
                      const Hyperparams& hyper, const AdmmConfig& cfg,
                      const AdmmTraceSink& trace) {
  check_dimensions(stats, clustering, hyper);
  cfg.validate();

  const double n = static_cast<double>(stats.n());
  const double beta = hyper.beta;
  const Matrix& s = stats.covariance();
  const int k = clustering.num_clusters();

  std::vector<Matrix> x_blocks(k);
  for (int j = 0; j < k; ++j) {
    if (cfg.warm_start) {
      x_blocks[j] = (n + hyper.a_block(j)) *
                    inverse_spd(n * extract_block(s, clustering, j) + hyper.scale_blocks[j]);
    } else {
      const Vector d = extract_block(s, clustering, j).diagonal().array() + 0.001;
      x_blocks[j] = d.cwiseInverse().asDiagonal();
    }
  }
  State state;
  // With β = 0 the X_ε subproblem decouples and has this closed form; for
  // β > 0 it is the starting point.
  state.x_eps = hyper.a_eps() * inverse_spd(hyper.scale_eps);
  state.z = embed_blocks(x_blocks, clustering) + beta * state.x_eps;
  state.u = cfg.warm_start ? Matrix(n * (s - inverse_spd(state.z))) : Matrix::Zero(s.rows(), s.cols());

  const AdmmSweep sweep(stats, clustering, hyper);
  Anderson anderson(cfg.anderson_memory);
  bool accelerating = false;
  double best_residual = std::numeric_limits<double>::infinity();

  MapSolution sol;
  double rho = cfg.rho_init;
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    SweepResult step = sweep(state, rho);
    sol.x_blocks = std::move(step.x_blocks);
    sol.x_eps = step.next.x_eps;
    sol.z = step.next.z;
    sol.u = step.next.u;
    sol.primal_residual = step.primal;
    sol.dual_residual = step.dual;
    sol.iterations = iter;

    if (trace) {
      trace({iter, map_objective(sol.x_eps, sol.x_blocks, stats, clustering, hyper),
             sol.primal_residual, sol.dual_residual, rho});
    }

    const double rel_primal = step.primal / (1.0 + sol.z.norm());
    const double rel_dual = step.dual / (1.0 + sol.u.norm());
    if (rel_primal <= cfg.tol_primal && rel_dual <= cfg.tol_dual) {
      sol.converged = true;
      break;
    }

    if (accelerating) {
      const Vector v = pack(state, beta, rho);
      const Vector g = pack(step.next, beta, rho);
      const Vector f = g - v;
      const double r = f.norm();
      if (r > cfg.anderson_safeguard * best_residual) {
        anderson.reset();
        best_residual = r;
        state = std::move(step.next);
      } else {
        best_residual = std::min(best_residual, r);
        state = unpack(anderson.step(g, f), step.next, beta, rho);
      }
      continue;
    }
    state = std::move(step.next);

    const double old_rho = rho;
    if (cfg.balance_residuals) {
      if (iter % cfg.balance_every == 0) {
        if (rel_primal > cfg.balance_ratio * rel_dual) {
          rho = std::min(rho * cfg.balance_factor, cfg.rho_max);
        } else if (rel_dual > cfg.balance_ratio * rel_primal) {
          rho = std::max(rho / cfg.balance_factor, cfg.rho_min);
        }
      }
    } else if (iter % cfg.growth_every == 0) {
      rho = std::min(rho * cfg.rho_growth, cfg.rho_max);
    }
    const bool settled = rho == old_rho && (!cfg.balance_residuals || iter % cfg.balance_every == 0);
    if (cfg.anderson_memory > 0 && iter >= cfg.anderson_start && settled) {
      accelerating = true;
    }
  }
  sol.objective = map_objective(sol.x_eps, sol.x_blocks, stats, clustering, hyper);
  return sol;
}

}  // namespace vclust
