#pragma once

#include "vclust/clustering.hpp"
#include "vclust/random.hpp"
#include "vclust/sample_stats.hpp"
#include "vclust/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace vclust::testing {

inline Matrix random_symmetric(Eigen::Index dim, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      m(i, j) = m(j, i) = g(rng);
    }
  }
  return m;
}

/// G Gᵀ/dim + floor·I with Gaussian G.
inline Matrix random_spd(Eigen::Index dim, Rng& rng, double floor = 0.3) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(dim, dim);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a.data()[i] = g(rng);
  }
  Matrix s = a * a.transpose() / static_cast<double>(dim);
  s.diagonal().array() += floor;
  return s;
}

/// Every label in [0, k) is used at least once.
inline Clustering random_clustering(int p, int k, Rng& rng) {
  std::vector<int> labels(p);
  std::iota(labels.begin(), labels.begin() + k, 0);
  std::uniform_int_distribution<int> pick(0, k - 1);
  for (int i = k; i < p; ++i) {
    labels[i] = pick(rng);
  }
  std::shuffle(labels.begin(), labels.end(), rng);
  return Clustering::canonicalize(labels);
}

/// Sample covariance of n Gaussian rows drawn with covariance `sigma`.
inline SampleStats gaussian_stats(const Matrix& sigma, std::int64_t n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const Matrix l = sigma.llt().matrixL();
  Matrix rows(n, sigma.rows());
  for (Eigen::Index i = 0; i < rows.size(); ++i) {
    rows.data()[i] = g(rng);
  }
  rows = rows * l.transpose();
  return SampleStats(n, rows.transpose() * rows / static_cast<double>(n));
}

/// Every set partition of {0, …, p−1} as canonical label vectors.
inline std::vector<std::vector<int>> all_partitions(int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> labels(p, 0);
  const auto rec = [&](auto&& self, int i, int k) -> void {
    if (i == p) {
      out.push_back(labels);
      return;
    }
    for (int l = 0; l <= k; ++l) {
      labels[i] = l;
      self(self, i + 1, std::max(k, l + 1));
    }
  };
  if (p > 0) {
    rec(rec, 0, 0);
  }
  return out;
}

/// Asymptotic Kolmogorov p-value of the one-sample statistic for `values`
/// against the continuous CDF `cdf`.
template <class Cdf>
double ks_pvalue(std::vector<double> values, Cdf cdf) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = cdf(values[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    q += 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  }
  return std::clamp(q, 0.0, 1.0);
}

/// Haar-distributed orthogonal matrix from the QR of a Gaussian matrix.
inline Matrix random_orthogonal(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<double> g;
  Matrix a(dim, dim);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a.data()[i] = g(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Vector signs = qr.matrixQR().diagonal().array().sign();
  return q * signs.asDiagonal();
}

}  // namespace vclust::testing
