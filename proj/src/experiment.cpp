#include "vclust/experiment.hpp"

#include "vclust/anmi.hpp"
#include "vclust/error.hpp"
#include "vclust/random.hpp"
#include "vclust/selection.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>

namespace vclust {

void ExperimentConfig::validate() const {
  if (repetitions < 1) {
    throw InvalidArgument("experiment: repetitions must be >= 1");
  }
  if (criteria.empty()) {
    throw InvalidArgument("experiment: at least one criterion is required");
  }
  if (regimes.empty()) {
    throw InvalidArgument("experiment: at least one regime is required");
  }
  if (candidate_method != "spectral" && candidate_method != "single" &&
      candidate_method != "average") {
    throw InvalidArgument("experiment: unknown candidate method '" + candidate_method + "'");
  }
  for (const RegimeSpec& r : regimes) {
    if (r.n_values.empty()) {
      throw InvalidArgument("experiment: regime '" + r.name + "' has no n values");
    }
    for (std::int64_t n : r.n_values) {
      SynthSpec s{r.cluster_sizes, r.block_dist, r.noise_dist, r.eta, n, 0};
      s.validate();
    }
  }
  spectral.validate();
  scoring.admm.validate();
  scoring.mcmc.validate();
}

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (allowed.count(key) == 0) {
      throw InvalidArgument(where + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  ExperimentConfig cfg;
  try {
    reject_unknown(j, {"regimes", "repetitions", "criteria", "candidates", "lambda_grid", "k_max",
                       "master_seed", "admm", "mcmc"},
                   "experiment config");
    for (const Json& r : j.at("regimes")) {
      reject_unknown(r, {"name", "clusters", "block_dist", "noise_dist", "eta", "n"}, "regime");
      RegimeSpec spec;
      spec.name = r.value("name", "regime" + std::to_string(cfg.regimes.size()));
      if (r.contains("clusters")) {
        spec.cluster_sizes = r["clusters"].get<std::vector<int>>();
      }
      spec.block_dist = parse_cov_dist(r.value("block_dist", std::string("invw")));
      spec.noise_dist = parse_cov_dist(r.value("noise_dist", std::string("none")));
      spec.eta = r.value("eta", 0.0);
      if (r.contains("n")) {
        spec.n_values = r["n"].get<std::vector<std::int64_t>>();
      }
      cfg.regimes.push_back(std::move(spec));
    }
    cfg.repetitions = j.value("repetitions", cfg.repetitions);
    for (const Json& c : j.at("criteria")) {
      cfg.criteria.push_back(Criterion::parse(c.get<std::string>()));
    }
    cfg.candidate_method = j.value("candidates", cfg.candidate_method);
    if (j.contains("lambda_grid")) {
      cfg.spectral.lambda_grid = j["lambda_grid"].get<std::vector<double>>();
    }
    cfg.spectral.k_max = j.value("k_max", cfg.spectral.k_max);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    if (j.contains("admm")) {
      const Json& a = j["admm"];
      reject_unknown(a, {"max_iters", "tol_primal", "tol_dual", "rho_init"}, "admm");
      cfg.scoring.admm.max_iters = a.value("max_iters", cfg.scoring.admm.max_iters);
      cfg.scoring.admm.tol_primal = a.value("tol_primal", cfg.scoring.admm.tol_primal);
      cfg.scoring.admm.tol_dual = a.value("tol_dual", cfg.scoring.admm.tol_dual);
      cfg.scoring.admm.rho_init = a.value("rho_init", cfg.scoring.admm.rho_init);
    }
    if (j.contains("mcmc")) {
      const Json& m = j["mcmc"];
      reject_unknown(m, {"samples", "kappa", "burn_in_frac"}, "mcmc");
      cfg.scoring.mcmc.samples = m.value("samples", cfg.scoring.mcmc.samples);
      cfg.scoring.mcmc.kappa = m.value("kappa", cfg.scoring.mcmc.kappa);
      cfg.scoring.mcmc.burn_in_frac = m.value("burn_in_frac", cfg.scoring.mcmc.burn_in_frac);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("experiment config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

Json ExperimentConfig::to_json() const {
  Json regs = Json::array();
  for (const RegimeSpec& r : regimes) {
    regs.push_back(Json{{"name", r.name},
                        {"clusters", r.cluster_sizes},
                        {"block_dist", to_string(r.block_dist)},
                        {"noise_dist", to_string(r.noise_dist)},
                        {"eta", r.eta},
                        {"n", r.n_values}});
  }
  Json crit = Json::array();
  for (const Criterion& c : criteria) {
    crit.push_back(c.kind == CriterionKind::ProposedVi || c.kind == CriterionKind::ProposedMcmc
                       ? c.name() + ":" + std::to_string(c.beta)
                       : c.name());
  }
  return Json{{"regimes", std::move(regs)},
              {"repetitions", repetitions},
              {"criteria", std::move(crit)},
              {"candidates", candidate_method},
              {"lambda_grid", spectral.lambda_grid},
              {"k_max", spectral.k_max},
              {"master_seed", master_seed},
              {"admm",
               {{"max_iters", scoring.admm.max_iters},
                {"tol_primal", scoring.admm.tol_primal},
                {"tol_dual", scoring.admm.tol_dual},
                {"rho_init", scoring.admm.rho_init}}},
              {"mcmc",
               {{"samples", scoring.mcmc.samples},
                {"kappa", scoring.mcmc.kappa},
                {"burn_in_frac", scoring.mcmc.burn_in_frac}}}};
}

std::uint64_t dataset_seed(std::uint64_t master, std::size_t regime, std::size_t n_index, int rep) {
  return derive_seed(derive_seed(derive_seed(master, regime), n_index),
                     static_cast<std::uint64_t>(rep));
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const ProgressSink& progress) {
  cfg.validate();
  ExperimentReport report;
  for (std::size_t r = 0; r < cfg.regimes.size(); ++r) {
    const RegimeSpec& regime = cfg.regimes[r];
    for (std::size_t ni = 0; ni < regime.n_values.size(); ++ni) {
      const std::int64_t n = regime.n_values[ni];
      for (int rep = 0; rep < cfg.repetitions; ++rep) {
        const std::uint64_t seed = dataset_seed(cfg.master_seed, r, ni, rep);
        const Dataset ds = generate_dataset(
            SynthSpec{regime.cluster_sizes, regime.block_dist, regime.noise_dist, regime.eta, n, seed});
        CandidateSet cands;
        if (cfg.candidate_method == "spectral") {
          SpectralConfig sc = cfg.spectral;
          sc.seed = seed;
          cands = spectral_candidates(ds.stats, sc);
        } else {
          cands = linkage_candidates(ds.stats, parse_linkage(cfg.candidate_method), cfg.spectral.k_max);
        }
        CandidateStats cs{r, n, rep, cands.size(), 0.0};
        for (const Candidate& c : cands.items()) {
          cs.oracle_anmi = std::max(cs.oracle_anmi, anmi(c.clustering, ds.truth));
        }
        report.candidates.push_back(cs);
        for (const Criterion& crit : cfg.criteria) {
          CellResult cell{r, n, rep, crit.name(), 0.0, 0, {}, ""};
          try {
            const SelectionResult sel = select(ds.stats, cands, crit, cfg.scoring);
            cell.anmi = anmi(sel.best, ds.truth);
            cell.selected_k = sel.best.num_clusters();
            cell.posterior_k = sel.posterior_k;
          } catch (const std::exception& e) {
            cell.error = e.what();
          }
          if (progress) {
            std::ostringstream msg;
            msg << regime.name << " n=" << n << " rep=" << rep << " " << cell.criterion;
            if (cell.error.empty()) {
              msg << " anmi=" << cell.anmi << " k=" << cell.selected_k;
            } else {
              msg << " failed: " << cell.error;
            }
            progress(msg.str());
          }
          report.cells.push_back(std::move(cell));
        }
      }
    }
  }
  return report;
}

std::string anmi_table_csv(const ExperimentReport& report, const ExperimentConfig& cfg,
                           std::size_t regime) {
  const RegimeSpec& spec = cfg.regimes.at(regime);
  std::ostringstream out;
  out << "criterion";
  for (std::int64_t n : spec.n_values) {
    out << ",n=" << n;
  }
  out << '\n';
  for (const Criterion& crit : cfg.criteria) {
    out << crit.name();
    for (std::int64_t n : spec.n_values) {
      std::vector<double> values;
      for (const CellResult& c : report.cells) {
        if (c.regime == regime && c.n == n && c.criterion == crit.name() && c.error.empty()) {
          values.push_back(c.anmi);
        }
      }
      out << ',' << (values.empty() ? std::string("NA") : format_mean_std(aggregate(values)));
    }
    out << '\n';
  }
  for (const char* row : {"oracle", "size"}) {
    out << (std::string(row) == "oracle" ? "candidates-oracle-anmi" : "candidates-size");
    for (std::int64_t n : spec.n_values) {
      std::vector<double> values;
      for (const CandidateStats& c : report.candidates) {
        if (c.regime == regime && c.n == n) {
          values.push_back(std::string(row) == "oracle" ? c.oracle_anmi
                                                        : static_cast<double>(c.size));
        }
      }
      out << ',' << format_mean_std(aggregate(values));
    }
    out << '\n';
  }
  return out.str();
}

std::string posterior_k_csv(const ExperimentReport& report, const ExperimentConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "regime,n,repetition,criterion,k,probability\n";
  for (const CellResult& c : report.cells) {
    for (const auto& [k, prob] : c.posterior_k) {
      out << cfg.regimes[c.regime].name << ',' << c.n << ',' << c.repetition << ',' << c.criterion
          << ',' << k << ',' << prob << '\n';
    }
  }
  return out.str();
}

void write_experiment(const ExperimentReport& report, const ExperimentConfig& cfg,
                      const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw DataError("cannot create " + dir + ": " + ec.message());
  }
  const std::filesystem::path root(dir);
  for (std::size_t r = 0; r < cfg.regimes.size(); ++r) {
    write_text_file((root / ("table_" + cfg.regimes[r].name + ".csv")).string(),
                    anmi_table_csv(report, cfg, r));
  }
  write_text_file((root / "posterior_k.csv").string(), posterior_k_csv(report, cfg));

  std::ostringstream cells;
  cells.precision(17);
  cells << "regime,n,repetition,seed,criterion,anmi,selected_k,error\n";
  Json failures = Json::array();
  for (const CellResult& c : report.cells) {
    const std::size_t ni = static_cast<std::size_t>(
        std::find(cfg.regimes[c.regime].n_values.begin(), cfg.regimes[c.regime].n_values.end(), c.n) -
        cfg.regimes[c.regime].n_values.begin());
    cells << cfg.regimes[c.regime].name << ',' << c.n << ',' << c.repetition << ','
          << dataset_seed(cfg.master_seed, c.regime, ni, c.repetition) << ',' << c.criterion << ','
          << c.anmi << ',' << c.selected_k << ",\"" << c.error << "\"\n";
    if (!c.error.empty()) {
      failures.push_back(Json{{"regime", cfg.regimes[c.regime].name},
                              {"n", c.n},
                              {"repetition", c.repetition},
                              {"criterion", c.criterion},
                              {"error", c.error}});
    }
  }
  write_text_file((root / "cells.csv").string(), cells.str());
  const Json manifest{{"tool", "vclust"},
                      {"version", VCLUST_VERSION},
                      {"config", cfg.to_json()},
                      {"failures", std::move(failures)}};
  write_text_file((root / "manifest.json").string(), dump_json(manifest));
}

}  // namespace vclust
