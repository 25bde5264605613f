#include "vclust/anmi.hpp"
#include "vclust/candidates.hpp"
#include "vclust/criteria.hpp"
#include "vclust/error.hpp"
#include "vclust/experiment.hpp"
#include "vclust/io.hpp"
#include "vclust/map_solver.hpp"
#include "vclust/selection.hpp"
#include "vclust/synth.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

namespace {

using namespace vclust;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw InvalidArgument("'" + item + "' is not a number");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw InvalidArgument("empty list");
  }
  return out;
}

struct SynthOpts {
  int p = 0;
  std::string clusters = "10,10,10,10";
  std::string block_dist = "invw";
  std::string noise_dist;
  double eta = 0.0;
  std::int64_t n = 400;
  std::uint64_t seed = 0;
  std::string out = ".";
  bool data_csv = false;
};

int cmd_synth(const SynthOpts& o) {
  SynthSpec spec;
  spec.cluster_sizes.clear();
  for (double v : parse_list(o.clusters)) {
    if (v != static_cast<int>(v)) {
      throw InvalidArgument("cluster sizes must be integers");
    }
    spec.cluster_sizes.push_back(static_cast<int>(v));
  }
  if (o.p != 0 && o.p != spec.p()) {
    throw InvalidArgument("--p " + std::to_string(o.p) + " differs from the sum of --clusters (" +
                          std::to_string(spec.p()) + ")");
  }
  spec.block_dist = parse_cov_dist(o.block_dist);
  spec.eta = o.eta;
  spec.noise_dist = o.noise_dist.empty() ? (o.eta > 0.0 ? CovDist::InvWishart : CovDist::None)
                                         : parse_cov_dist(o.noise_dist);
  spec.n = o.n;
  spec.seed = o.seed;
  const Dataset ds = generate_dataset(spec, o.data_csv);
  std::filesystem::create_directories(o.out);
  const std::filesystem::path dir(o.out);
  write_text_file((dir / "stats.json").string(), dump_json(stats_to_json(ds.stats)));
  write_text_file((dir / "truth.json").string(), dump_json(truth_to_json(ds.truth, o.eta, o.seed)));
  if (o.data_csv) {
    write_text_file((dir / "data.csv").string(), matrix_to_csv(ds.data));
  }
  return 0;
}

struct CandidateOpts {
  std::string stats;
  std::string method = "spectral";
  std::string lambda_grid;
  int k_max = 15;
  std::uint64_t seed = 0;
  std::string truth;
  std::string out;
};

int cmd_candidates(const CandidateOpts& o) {
  const SampleStats stats = stats_from_json(read_json_file(o.stats));
  CandidateSet set;
  if (o.method == "spectral") {
    SpectralConfig cfg;
    if (!o.lambda_grid.empty()) {
      cfg.lambda_grid = parse_list(o.lambda_grid);
    }
    cfg.k_max = o.k_max;
    cfg.seed = o.seed;
    std::vector<std::string> warnings;
    set = spectral_candidates(stats, cfg, &warnings);
    for (const auto& w : warnings) {
      std::cerr << "warning: " << w << '\n';
    }
  } else {
    set = linkage_candidates(stats, parse_linkage(o.method), o.k_max);
  }
  emit(o.out, dump_json(candidates_to_json(set)));
  std::cerr << "candidates: " << set.size() << '\n';
  if (!o.truth.empty()) {
    const Clustering truth = clustering_from_json(read_json_file(o.truth));
    double best = -1.0;
    for (const Candidate& c : set.items()) {
      best = std::max(best, anmi(c.clustering, truth));
    }
    std::cerr << "oracle ANMI: " << best << '\n';
  }
  return 0;
}

struct ScoreOpts {
  std::string stats;
  std::string candidates;
  std::string clustering;
  std::string criterion = "proposed-vi";
  double beta = 0.02;
  int samples = 10000;
  double kappa = 10.0;
  std::uint64_t seed = 0;
  int max_iters = 20000;
  unsigned threads = 0;
  bool exclude_one = false;
  bool include_one = false;
  std::string out;
  std::string csv;
};

Criterion criterion_of(const ScoreOpts& o, const CLI::App& app) {
  Criterion c = Criterion::parse(o.criterion);
  if (app.count("--beta") > 0) {
    c.beta = o.beta;
  }
  if (o.exclude_one) {
    c.exclude_one_cluster = true;
  }
  if (o.include_one) {
    c.exclude_one_cluster = false;
  }
  c.validate();
  return c;
}

ScoreConfigs configs_of(const ScoreOpts& o) {
  ScoreConfigs cfgs;
  cfgs.admm.max_iters = o.max_iters;
  cfgs.mcmc.samples = o.samples;
  cfgs.mcmc.kappa = o.kappa;
  cfgs.mcmc.seed = o.seed;
  cfgs.threads = o.threads;
  return cfgs;
}

CandidateSet load_candidates(const ScoreOpts& o) {
  if (o.candidates.empty() == o.clustering.empty()) {
    throw InvalidArgument("give exactly one of --candidates and --clustering");
  }
  if (!o.clustering.empty()) {
    CandidateSet set;
    const Clustering c = clustering_from_json(read_json_file(o.clustering));
    set.add({c, "input", std::nullopt, c.num_clusters()});
    return set;
  }
  return candidates_from_json(read_json_file(o.candidates));
}

int cmd_score(const ScoreOpts& o, const CLI::App& app) {
  const SampleStats stats = stats_from_json(read_json_file(o.stats));
  const CandidateSet set = load_candidates(o);
  const Criterion crit = criterion_of(o, app);
  ScoreConfigs cfgs = configs_of(o);
  if (crit.kind == CriterionKind::Chi) {
    cfgs.chi_embedding = correlation_profile_embedding(stats.covariance());
  }
  Json scores = Json::array();
  bool all_converged = true;
  for (const Candidate& c : set.items()) {
    const ScoreRecord r = score(stats, c.clustering, crit, cfgs);
    all_converged = all_converged && r.converged;
    scores.push_back(score_record_to_json(c.clustering, crit, r));
  }
  emit(o.out, dump_json(Json{{"scores", std::move(scores)}}));
  if (!all_converged) {
    std::cerr << "warning: some MAP solves did not converge\n";
  }
  return 0;
}

int cmd_select(const ScoreOpts& o, const CLI::App& app) {
  const SampleStats stats = stats_from_json(read_json_file(o.stats));
  const CandidateSet set = load_candidates(o);
  const Criterion crit = criterion_of(o, app);
  const SelectionResult result = select(stats, set, crit, configs_of(o));
  emit(o.out, dump_json(selection_to_json(result, set, crit)));
  if (!o.csv.empty()) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "index,k,method,lambda,score,excluded,converged\n";
    for (std::size_t i = 0; i < set.size(); ++i) {
      const Candidate& c = set.items()[i];
      csv << i << ',' << c.clustering.num_clusters() << ',' << c.method << ','
          << (c.lambda ? std::to_string(*c.lambda) : "") << ',' << result.scores[i].value << ','
          << (result.excluded[i] ? 1 : 0) << ',' << (result.scores[i].converged ? 1 : 0) << '\n';
    }
    write_text_file(o.csv, csv.str());
  }
  return 0;
}

struct MapOpts {
  std::string stats;
  std::string clustering;
  double beta = 0.02;
  int max_iters = 20000;
  std::string trace;
  std::string out;
};

int cmd_map(const MapOpts& o) {
  const SampleStats stats = stats_from_json(read_json_file(o.stats));
  const Clustering c = clustering_from_json(read_json_file(o.clustering));
  AdmmConfig cfg;
  cfg.max_iters = o.max_iters;
  std::ostringstream trace;
  trace.precision(17);
  trace << "iter,objective,primal_residual,dual_residual,rho\n";
  AdmmTraceSink sink;
  if (!o.trace.empty()) {
    sink = [&](const AdmmTraceRow& r) {
      trace << r.iter << ',' << r.objective << ',' << r.primal_residual << ',' << r.dual_residual
            << ',' << r.rho << '\n';
    };
  }
  const MapSolution sol = solve_map(stats, c, Hyperparams::defaults(c, o.beta), cfg, sink);
  if (!o.trace.empty()) {
    write_text_file(o.trace, trace.str());
  }
  Json blocks = Json::array();
  for (const Matrix& x : sol.x_blocks) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      Json row = Json::array();
      for (Eigen::Index col = 0; col < x.cols(); ++col) {
        row.push_back(x(r, col));
      }
      rows.push_back(std::move(row));
    }
    blocks.push_back(std::move(rows));
  }
  emit(o.out, dump_json(Json{{"clustering", clustering_to_json(c)},
                             {"beta", o.beta},
                             {"objective", sol.objective},
                             {"iterations", sol.iterations},
                             {"primal_residual", sol.primal_residual},
                             {"dual_residual", sol.dual_residual},
                             {"converged", sol.converged},
                             {"x_blocks", std::move(blocks)}}));
  return sol.converged ? 0 : kExitNumerical;
}

int cmd_experiment(const std::string& config, const std::string& out, bool quiet) {
  const ExperimentConfig cfg = ExperimentConfig::from_json(read_json_file(config));
  ProgressSink progress;
  if (!quiet) {
    progress = [](const std::string& line) { std::cerr << line << '\n'; };
  }
  const ExperimentReport report = run_experiment(cfg, progress);
  write_experiment(report, cfg, out);
  return 0;
}

int cmd_ingest(const std::string& csv, bool header, const std::string& out) {
  CsvTable table = read_csv(csv, header);
  if (table.rows.rows() < 2) {
    throw DataError(csv + ": need at least two rows to standardize");
  }
  standardize_columns(table);
  emit(out, dump_json(stats_to_json(SampleStats::from_data(table.rows))));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable clustering under a noisy block-diagonal Gaussian graphical model"};
  app.require_subcommand(1);

  SynthOpts synth;
  auto* s = app.add_subcommand("synth", "Simulate a dataset and write stats/truth JSON");
  s->add_option("--p", synth.p, "Total variable count (checked against --clusters)");
  s->add_option("--clusters", synth.clusters, "Comma-separated cluster sizes");
  s->add_option("--block-dist", synth.block_dist, "invw | uniform");
  s->add_option("--noise-dist", synth.noise_dist, "invw | uniform | none");
  s->add_option("--eta", synth.eta, "Noise level");
  s->add_option("--n", synth.n, "Sample size");
  s->add_option("--seed", synth.seed, "Seed");
  s->add_option("--out", synth.out, "Output directory");
  s->add_flag("--data-csv", synth.data_csv, "Also write the raw samples");

  CandidateOpts cand;
  auto* c = app.add_subcommand("candidates", "Build a candidate clustering set");
  c->add_option("--stats", cand.stats, "Stats JSON")->required();
  c->add_option("--method", cand.method, "spectral | single | average");
  c->add_option("--lambda-grid", cand.lambda_grid, "Comma-separated graphical lasso penalties");
  c->add_option("--k-max", cand.k_max, "Largest number of clusters");
  c->add_option("--seed", cand.seed, "k-means seed");
  c->add_option("--truth", cand.truth, "Truth JSON; reports the best ANMI in the set");
  c->add_option("--out", cand.out, "Output file (default stdout)");

  ScoreOpts score_opts;
  const auto add_scoring = [&](CLI::App* sub, bool selecting) {
    sub->add_option("--stats", score_opts.stats, "Stats JSON")->required();
    sub->add_option("--candidates", score_opts.candidates, "Candidate set JSON");
    sub->add_option("--clustering", score_opts.clustering, "Single clustering JSON");
    sub->add_option("--criterion", score_opts.criterion,
                    "proposed-vi | proposed-mcmc | basic-iw | ebic:<gamma> | aic | chi");
    sub->add_option("--beta", score_opts.beta, "Noise weight for the proposed model");
    sub->add_option("--samples", score_opts.samples, "MCMC samples per reduced run");
    sub->add_option("--kappa", score_opts.kappa, "MCMC proposal concentration");
    sub->add_option("--seed", score_opts.seed, "MCMC seed");
    sub->add_option("--max-iters", score_opts.max_iters, "ADMM iteration limit");
    sub->add_option("--threads", score_opts.threads, "Scoring workers (0 = all cores)");
    sub->add_flag("--exclude-one-cluster", score_opts.exclude_one, "Drop the one-cluster candidate");
    sub->add_flag("--include-one-cluster", score_opts.include_one, "Keep the one-cluster candidate");
    sub->add_option("--out", score_opts.out, "Output file (default stdout)");
    if (selecting) {
      sub->add_option("--csv", score_opts.csv, "Per-candidate score table");
    }
  };
  auto* sc = app.add_subcommand("score", "Score candidates under one criterion");
  add_scoring(sc, false);
  auto* sel = app.add_subcommand("select", "Select the best candidate and the posterior over k");
  add_scoring(sel, true);

  MapOpts map;
  auto* m = app.add_subcommand("map", "MAP estimate of the noisy block model");
  m->add_option("--stats", map.stats, "Stats JSON")->required();
  m->add_option("--clustering", map.clustering, "Clustering JSON")->required();
  m->add_option("--beta", map.beta, "Noise weight");
  m->add_option("--max-iters", map.max_iters, "Iteration limit");
  m->add_option("--trace", map.trace, "Iteration trace CSV");
  m->add_option("--out", map.out, "Output file (default stdout)");

  std::string exp_config;
  std::string exp_out = "results";
  bool quiet = false;
  auto* e = app.add_subcommand("experiment", "Run a simulation grid and write tables");
  e->add_option("--config", exp_config, "Experiment JSON")->required();
  e->add_option("--out", exp_out, "Output directory");
  e->add_flag("--quiet", quiet, "No progress lines");

  std::string ingest_csv;
  std::string ingest_out;
  bool header = false;
  auto* in = app.add_subcommand("ingest", "Standardize a CSV and write stats JSON");
  in->add_option("--csv", ingest_csv, "Input CSV, one sample per row")->required();
  in->add_flag("--header", header, "Skip one header row");
  in->add_option("--out", ingest_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (s->parsed()) {
      return cmd_synth(synth);
    }
    if (c->parsed()) {
      return cmd_candidates(cand);
    }
    if (sc->parsed()) {
      return cmd_score(score_opts, *sc);
    }
    if (sel->parsed()) {
      return cmd_select(score_opts, *sel);
    }
    if (m->parsed()) {
      return cmd_map(map);
    }
    if (e->parsed()) {
      return cmd_experiment(exp_config, exp_out, quiet);
    }
    if (in->parsed()) {
      return cmd_ingest(ingest_csv, header, ingest_out);
    }
  } catch (const InvalidArgument& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const DataError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitData;
  } catch (const NumericalError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
