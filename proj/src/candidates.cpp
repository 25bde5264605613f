#include "vclust/candidates.hpp"

#include "vclust/error.hpp"
#include "vclust/linalg.hpp"
#include "vclust/random.hpp"

#include <algorithm>

namespace vclust {

bool CandidateSet::add(Candidate c) {
  if (index_.count(c.clustering) > 0) {
    return false;
  }
  index_.emplace(c.clustering, items_.size());
  items_.push_back(std::move(c));
  return true;
}

void CandidateSet::merge(const CandidateSet& other) {
  for (const Candidate& c : other.items()) {
    add(c);
  }
}

void SpectralConfig::validate() const {
  if (k_max < 2) {
    throw InvalidArgument("spectral: k_max must be >= 2");
  }
  if (std::any_of(lambda_grid.begin(), lambda_grid.end(), [](double l) { return !(l >= 0.0); })) {
    throw InvalidArgument("spectral: lambda values must be non-negative");
  }
  glasso.validate();
}

Matrix ridge_repaired(const Matrix& s) {
  if (is_spd(s)) {
    return s;
  }
  return s + 1e-3 * Matrix::Identity(s.rows(), s.cols());
}

CandidateSet spectral_candidates(const SampleStats& stats, const SpectralConfig& cfg,
                                 std::vector<std::string>* warnings) {
  cfg.validate();
  const Eigen::Index p = stats.p();
  if (p < 2) {
    throw InvalidArgument("spectral candidates need p >= 2");
  }
  const Matrix s = ridge_repaired(stats.covariance());
  const int k_top = static_cast<int>(std::min<Eigen::Index>(cfg.k_max, p));
  CandidateSet out;
  Matrix warm;
  for (std::size_t li = 0; li < cfg.lambda_grid.size(); ++li) {
    const double lambda = cfg.lambda_grid[li];
    GlassoResult fit;
    try {
      fit = graphical_lasso(s, lambda, cfg.glasso, warm);
    } catch (const std::exception& e) {
      if (warnings != nullptr) {
        warnings->push_back("lambda " + std::to_string(lambda) + " skipped: " + e.what());
      }
      continue;
    }
    if (!fit.converged && warnings != nullptr) {
      warnings->push_back("lambda " + std::to_string(lambda) +
                          ": graphical lasso stopped at duality gap " +
                          std::to_string(fit.duality_gap));
    }
    warm = fit.precision;
    const SymEig eig = sym_eig(build_laplacian(fit.precision, cfg.q));
    for (int k = 2; k <= k_top; ++k) {
      Rng rng = make_rng(cfg.seed, li * 1000 + static_cast<std::uint64_t>(k));
      const auto km = kmeans(eig.eigenvectors.leftCols(k), k, rng, cfg.kmeans);
      if (!km) {
        continue;
      }
      out.add({Clustering::canonicalize(km->labels), "spectral", lambda, k});
    }
  }
  return out;
}

CandidateSet linkage_candidates(const SampleStats& stats, Linkage method, int k_max) {
  if (stats.p() < 2) {
    throw InvalidArgument("linkage candidates need p >= 2");
  }
  if (k_max < 2) {
    throw InvalidArgument("linkage: k_max must be >= 2");
  }
  const auto cuts =
      hierarchical_cuts(correlation_dissimilarity(stats.covariance()), method);
  const int k_top = static_cast<int>(std::min<Eigen::Index>(k_max, stats.p()));
  CandidateSet out;
  for (int k = 2; k <= k_top; ++k) {
    out.add({Clustering::canonicalize(cuts[k - 1]), to_string(method), std::nullopt, k});
  }
  return out;
}

}  // namespace vclust
