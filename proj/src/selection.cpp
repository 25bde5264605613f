#include "vclust/selection.hpp"

#include "vclust/error.hpp"
#include "vclust/parallel.hpp"
#include "vclust/special.hpp"

#include <cmath>
#include <limits>

namespace vclust {

std::map<int, double> posterior_over_k(const std::vector<double>& scores,
                                       const std::vector<Clustering>& candidates,
                                       const Criterion& criterion) {
  if (!criterion.is_likelihood()) {
    throw InvalidArgument("posterior over k needs log marginal likelihood scores, not " +
                          criterion.name());
  }
  if (scores.size() != candidates.size() || scores.empty()) {
    throw InvalidArgument("posterior over k: scores and candidates must be non-empty and aligned");
  }
  std::map<int, double> log_mass;
  double total = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const int k = candidates[i].num_clusters();
    auto [it, fresh] = log_mass.try_emplace(k, -std::numeric_limits<double>::infinity());
    it->second = log_add_exp(it->second, scores[i]);
    total = log_add_exp(total, scores[i]);
  }
  if (!std::isfinite(total)) {
    throw InvalidArgument("posterior over k: no finite score");
  }
  std::map<int, double> posterior;
  for (const auto& [k, lm] : log_mass) {
    posterior[k] = std::exp(lm - total);
  }
  return posterior;
}

std::size_t argmax_candidate(const std::vector<double>& scores,
                             const std::vector<Clustering>& candidates,
                             const std::vector<bool>& eligible) {
  if (scores.size() != candidates.size() || eligible.size() != candidates.size()) {
    throw InvalidArgument("argmax: inputs must be aligned");
  }
  std::size_t best = candidates.size();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!eligible[i] || std::isnan(scores[i])) {
      continue;
    }
    if (best == candidates.size()) {
      best = i;
      continue;
    }
    const bool higher = scores[i] > scores[best];
    const bool tie = scores[i] == scores[best];
    const int ki = candidates[i].num_clusters();
    const int kb = candidates[best].num_clusters();
    if (higher || (tie && (ki < kb || (ki == kb && candidates[i] < candidates[best])))) {
      best = i;
    }
  }
  if (best == candidates.size()) {
    throw InvalidArgument("selection: no eligible candidate");
  }
  return best;
}

SelectionResult select(const SampleStats& stats, const CandidateSet& candidates,
                       const Criterion& criterion, const ScoreConfigs& cfgs) {
  if (candidates.empty()) {
    throw InvalidArgument("selection: empty candidate set");
  }
  SelectionResult result;
  std::vector<Clustering> clusterings;
  std::vector<double> values;
  std::vector<bool> eligible;
  ScoreConfigs local = cfgs;
  if (criterion.kind == CriterionKind::Chi && local.chi_embedding.size() == 0) {
    local.chi_embedding = correlation_profile_embedding(stats.covariance());
  }
  const auto& items = candidates.items();
  for (const Candidate& c : items) {
    const bool excluded = criterion.exclude_one_cluster && c.clustering.num_clusters() == 1;
    result.excluded.push_back(excluded);
    eligible.push_back(!excluded);
    clusterings.push_back(c.clustering);
  }
  result.scores.resize(items.size());
  parallel_for(items.size(), local.threads, [&](std::size_t i) {
    if (eligible[i]) {
      result.scores[i] = score(stats, items[i].clustering, criterion, local);
    } else {
      result.scores[i].value = -std::numeric_limits<double>::infinity();
    }
  });
  for (const ScoreRecord& r : result.scores) {
    values.push_back(r.value);
  }
  result.best_index = argmax_candidate(values, clusterings, eligible);
  result.best = clusterings[result.best_index];
  if (criterion.is_likelihood()) {
    std::vector<double> kept_scores;
    std::vector<Clustering> kept;
    for (std::size_t i = 0; i < clusterings.size(); ++i) {
      if (eligible[i]) {
        kept_scores.push_back(values[i]);
        kept.push_back(clusterings[i]);
      }
    }
    result.posterior_k = posterior_over_k(kept_scores, kept, criterion);
  }
  return result;
}

}  // namespace vclust
