#pragma once

#include "vclust/candidates.hpp"
#include "vclust/criteria.hpp"
#include "vclust/io.hpp"
#include "vclust/synth.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace vclust {

struct RegimeSpec {
  std::string name;
  std::vector<int> cluster_sizes{10, 10, 10, 10};
  CovDist block_dist = CovDist::InvWishart;
  CovDist noise_dist = CovDist::None;
  double eta = 0.0;
  std::vector<std::int64_t> n_values{400};
};

struct ExperimentConfig {
  std::vector<RegimeSpec> regimes;
  int repetitions = 5;
  std::vector<Criterion> criteria;
  /// "spectral", "single" or "average".
  std::string candidate_method = "spectral";
  SpectralConfig spectral;
  ScoreConfigs scoring;
  std::uint64_t master_seed = 0;

  void validate() const;
  /// Missing keys keep their defaults; unknown keys are rejected.
  static ExperimentConfig from_json(const Json& j);
  [[nodiscard]] Json to_json() const;
};

/// Seed of one dataset, fixed by (master seed, regime, n index, repetition).
std::uint64_t dataset_seed(std::uint64_t master, std::size_t regime, std::size_t n_index, int rep);

struct CellResult {
  std::size_t regime = 0;
  std::int64_t n = 0;
  int repetition = 0;
  std::string criterion;
  double anmi = 0.0;
  int selected_k = 0;
  std::map<int, double> posterior_k;
  /// Non-empty when the cell failed; the run continues.
  std::string error;
};

struct CandidateStats {
  std::size_t regime = 0;
  std::int64_t n = 0;
  int repetition = 0;
  std::size_t size = 0;
  double oracle_anmi = 0.0;
};

struct ExperimentReport {
  std::vector<CellResult> cells;
  std::vector<CandidateStats> candidates;
};

using ProgressSink = std::function<void(const std::string&)>;

ExperimentReport run_experiment(const ExperimentConfig& cfg, const ProgressSink& progress = {});

/// Rows: one per criterion plus the candidate-space rows; columns: n values.
/// Cells are "mean (std)" of ANMI over repetitions.
std::string anmi_table_csv(const ExperimentReport& report, const ExperimentConfig& cfg,
                           std::size_t regime);

/// regime,n,repetition,criterion,k,probability for every likelihood cell.
std::string posterior_k_csv(const ExperimentReport& report, const ExperimentConfig& cfg);

/// Writes table_<regime>.csv, posterior_k.csv, cells.csv and manifest.json into `dir`.
void write_experiment(const ExperimentReport& report, const ExperimentConfig& cfg,
                      const std::string& dir);

}  // namespace vclust
