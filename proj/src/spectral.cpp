#include "vclust/spectral.hpp"

#include "vclust/error.hpp"

#include <cmath>
#include <limits>
#include <set>

namespace vclust {

Matrix build_laplacian(const Matrix& x, double q) {
  if (x.rows() != x.cols()) {
    throw InvalidArgument("laplacian: matrix must be square");
  }
  if (!(q > 0.0)) {
    throw InvalidArgument("laplacian: q must be positive");
  }
  const Eigen::Index p = x.rows();
  Matrix l = Matrix::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (i != j) {
        // Symmetric weights even if X carries round-off asymmetry.
        const double w = std::pow(0.5 * std::abs(x(i, j) + x(j, i)), q);
        l(i, j) = -w;
        l(i, i) += w;
      }
    }
  }
  return l;
}

namespace {

double squared_distance(const Matrix& points, Eigen::Index row, const Matrix& centres,
                        Eigen::Index c) {
  return (points.row(row) - centres.row(c)).squaredNorm();
}

Matrix seed_plus_plus(const Matrix& points, int k, Rng& rng) {
  const Eigen::Index n = points.rows();
  Matrix centres(k, points.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  centres.row(0) = points.row(pick(rng));
  Vector d2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d2(i) = squared_distance(points, i, centres, 0);
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      double target = unif(rng) * total;
      for (chosen = 0; chosen < n - 1; ++chosen) {
        target -= d2(chosen);
        if (target <= 0.0) {
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    centres.row(c) = points.row(chosen);
    for (Eigen::Index i = 0; i < n; ++i) {
      d2(i) = std::min(d2(i), squared_distance(points, i, centres, c));
    }
  }
  return centres;
}

KMeansResult lloyd(const Matrix& points, Matrix centres, int max_iters) {
  const Eigen::Index n = points.rows();
  const auto k = static_cast<int>(centres.rows());
  std::vector<int> labels(n, -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = squared_distance(points, i, centres, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
    }
    Matrix sums = Matrix::Zero(k, points.cols());
    std::vector<int> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(labels[i]) += points.row(i);
      ++counts[labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centres.row(c) = sums.row(c) / counts[c];
        continue;
      }
      // Re-seed an empty cluster at the worst-fitting point.
      Eigen::Index worst = 0;
      double worst_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = squared_distance(points, i, centres, labels[i]);
        if (d > worst_d) {
          worst_d = d;
          worst = i;
        }
      }
      centres.row(c) = points.row(worst);
      labels[worst] = c;
      changed = true;
    }
    if (!changed) {
      break;
    }
  }
  KMeansResult result;
  result.labels = std::move(labels);
  for (Eigen::Index i = 0; i < n; ++i) {
    result.inertia += squared_distance(points, i, centres, result.labels[i]);
  }
  return result;
}

}  // namespace

std::optional<KMeansResult> kmeans(const Matrix& points, int k, Rng& rng,
                                   const KMeansConfig& cfg) {
  if (k < 1 || points.rows() < 1) {
    throw InvalidArgument("kmeans: need k >= 1 and at least one point");
  }
  if (cfg.restarts < 1 || cfg.max_iters < 1) {
    throw InvalidArgument("kmeans: restarts and max_iters must be positive");
  }
  std::set<std::vector<double>> distinct;
  for (Eigen::Index i = 0; i < points.rows() && distinct.size() < static_cast<std::size_t>(k); ++i) {
    const Vector row = points.row(i).transpose();
    distinct.insert(std::vector<double>(row.data(), row.data() + row.size()));
  }
  if (distinct.size() < static_cast<std::size_t>(k)) {
    return std::nullopt;
  }
  std::optional<KMeansResult> best;
  for (int r = 0; r < cfg.restarts; ++r) {
    KMeansResult run = lloyd(points, seed_plus_plus(points, k, rng), cfg.max_iters);
    if (!best || run.inertia < best->inertia) {
      best = std::move(run);
    }
  }
  std::set<int> used(best->labels.begin(), best->labels.end());
  if (static_cast<int>(used.size()) < k) {
    return std::nullopt;
  }
  return best;
}

}  // namespace vclust
