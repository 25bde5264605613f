#include "vclust/synth.hpp"

#include "vclust/error.hpp"
#include "vclust/invwishart.hpp"
#include "vclust/linalg.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <numeric>

namespace vclust {

std::string to_string(CovDist d) {
  switch (d) {
    case CovDist::InvWishart:
      return "invw";
    case CovDist::Uniform:
      return "uniform";
    case CovDist::None:
      return "none";
  }
  return "none";
}

CovDist parse_cov_dist(const std::string& s) {
  if (s == "invw") return CovDist::InvWishart;
  if (s == "uniform") return CovDist::Uniform;
  if (s == "none") return CovDist::None;
  throw InvalidArgument("unknown covariance distribution '" + s + "' (expected invw|uniform|none)");
}

int SynthSpec::p() const { return std::accumulate(cluster_sizes.begin(), cluster_sizes.end(), 0); }

void SynthSpec::validate() const {
  if (cluster_sizes.empty() ||
      std::any_of(cluster_sizes.begin(), cluster_sizes.end(), [](int s) { return s < 1; })) {
    throw InvalidArgument("synth: cluster sizes must be positive");
  }
  if (block_dist == CovDist::None) {
    throw InvalidArgument("synth: block distribution cannot be 'none'");
  }
  if (!(eta >= 0.0)) {
    throw InvalidArgument("synth: eta must be non-negative");
  }
  if ((eta == 0.0) != (noise_dist == CovDist::None)) {
    throw InvalidArgument("synth: eta is zero iff the noise distribution is 'none'");
  }
  if (n < 1) {
    throw InvalidArgument("synth: n must be at least 1");
  }
}

Matrix sample_invw_cov(int dim, Rng& rng) {
  return sample_invwishart(dim + 1.0, Matrix::Identity(dim, dim), rng).sigma;
}

Matrix sample_uniform_cov(int dim, Rng& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Matrix a = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      a(i, j) = a(j, i) = unif(rng);
    }
  }
  const double min_eig = sym_eig(a).eigenvalues(0);
  a.diagonal().array() += 0.001 - min_eig;
  return a;
}

namespace {

Matrix draw_cov(CovDist dist, int dim, Rng& rng) {
  return dist == CovDist::InvWishart ? sample_invw_cov(dim, rng) : sample_uniform_cov(dim, rng);
}

constexpr std::int64_t kBatch = 512;

}  // namespace

Dataset generate_dataset(const SynthSpec& spec, bool keep_data) {
  spec.validate();
  const int p = spec.p();
  Rng rng(derive_seed(spec.seed, 0));

  Dataset out;
  std::vector<int> labels;
  out.sigma = Matrix::Zero(p, p);
  int offset = 0;
  for (std::size_t j = 0; j < spec.cluster_sizes.size(); ++j) {
    const int d = spec.cluster_sizes[j];
    out.sigma.block(offset, offset, d, d) = draw_cov(spec.block_dist, d, rng);
    labels.insert(labels.end(), d, static_cast<int>(j));
    offset += d;
  }
  out.truth = Clustering::canonicalize(labels);

  Matrix precision = inverse_spd(out.sigma);
  if (spec.noise_dist != CovDist::None) {
    out.sigma_eps = draw_cov(spec.noise_dist, p, rng);
    precision += spec.eta * inverse_spd(out.sigma_eps);
  }
  const Matrix cov = inverse_spd(precision);
  const Matrix chol_t = Eigen::LLT<Matrix>(cov).matrixU();

  Rng sample_rng(derive_seed(spec.seed, 1));
  std::normal_distribution<double> normal(0.0, 1.0);
  CovarianceAccumulator acc(p);
  if (keep_data) {
    out.data.resize(spec.n, p);
  }
  Matrix batch;
  for (std::int64_t start = 0; start < spec.n; start += kBatch) {
    const std::int64_t rows = std::min(kBatch, spec.n - start);
    batch.resize(rows, p);
    for (std::int64_t r = 0; r < rows; ++r) {
      for (int c = 0; c < p; ++c) {
        batch(r, c) = normal(sample_rng);
      }
    }
    const Matrix x = batch * chol_t;
    acc.add_batch(x);
    if (keep_data) {
      out.data.middleRows(start, rows) = x;
    }
  }
  out.stats = acc.finish();
  return out;
}

}  // namespace vclust
