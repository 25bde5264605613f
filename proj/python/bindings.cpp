#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vclust/anmi.hpp"
#include "vclust/candidates.hpp"
#include "vclust/chib.hpp"
#include "vclust/criteria.hpp"
#include "vclust/error.hpp"
#include "vclust/hyperparams.hpp"
#include "vclust/linkage.hpp"
#include "vclust/map_solver.hpp"
#include "vclust/sample_stats.hpp"
#include "vclust/selection.hpp"
#include "vclust/synth.hpp"
#include "vclust/variational.hpp"

#include <string>
#include <vector>

namespace py = pybind11;
using namespace vclust;

namespace {

Clustering to_clustering(const std::vector<int>& labels) { return Clustering::canonicalize(labels); }

py::dict map_to_dict(const MapSolution& m) {
  py::dict d;
  d["x_eps"] = m.x_eps;
  d["x_blocks"] = m.x_blocks;
  d["iterations"] = m.iterations;
  d["primal_residual"] = m.primal_residual;
  d["dual_residual"] = m.dual_residual;
  d["objective"] = m.objective;
  d["converged"] = m.converged;
  return d;
}

std::vector<std::vector<int>> candidate_labels(const CandidateSet& set) {
  std::vector<std::vector<int>> out;
  out.reserve(set.size());
  for (const Candidate& c : set.items()) {
    out.push_back(c.clustering.labels());
  }
  return out;
}

CandidateSet to_candidates(const std::vector<std::vector<int>>& labels) {
  CandidateSet set;
  for (const auto& l : labels) {
    const Clustering c = to_clustering(l);
    set.add({c, "user", std::nullopt, c.num_clusters()});
  }
  return set;
}

ScoreConfigs make_configs(int samples, double kappa, std::uint64_t seed, int max_iters,
                          unsigned threads) {
  ScoreConfigs cfgs;
  cfgs.mcmc.samples = samples;
  cfgs.mcmc.kappa = kappa;
  cfgs.mcmc.seed = seed;
  cfgs.admm.max_iters = max_iters;
  cfgs.threads = threads;
  return cfgs;
}

}  // namespace

PYBIND11_MODULE(_vclust, m) {
  m.doc() = "Bayesian variable clustering with a noisy block-diagonal precision";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<SampleStats>(m, "SampleStats")
      .def(py::init<std::int64_t, Matrix>(), py::arg("n"), py::arg("covariance"))
      .def_static("from_data", &SampleStats::from_data, py::arg("rows"))
      .def_property_readonly("n", &SampleStats::n)
      .def_property_readonly("p", &SampleStats::p)
      .def_property_readonly("covariance", &SampleStats::covariance);

  m.def("canonicalize", [](const std::vector<int>& labels) { return to_clustering(labels).labels(); },
        py::arg("labels"));

  m.def(
      "generate",
      [](const std::vector<int>& cluster_sizes, std::int64_t n, std::uint64_t seed,
         const std::string& block_dist, const std::string& noise_dist, double eta, bool keep_data) {
        SynthSpec spec;
        spec.cluster_sizes = cluster_sizes;
        spec.n = n;
        spec.seed = seed;
        spec.block_dist = parse_cov_dist(block_dist);
        spec.noise_dist = parse_cov_dist(noise_dist);
        spec.eta = eta;
        Dataset ds = generate_dataset(spec, keep_data);
        py::dict d;
        d["stats"] = ds.stats;
        d["truth"] = ds.truth.labels();
        d["sigma"] = ds.sigma;
        if (keep_data) {
          d["data"] = ds.data;
        }
        return d;
      },
      py::arg("cluster_sizes"), py::arg("n"), py::arg("seed") = 0, py::arg("block_dist") = "invw",
      py::arg("noise_dist") = "none", py::arg("eta") = 0.0, py::arg("keep_data") = false);

  m.def(
      "solve_map",
      [](const SampleStats& stats, const std::vector<int>& labels, double beta, int max_iters) {
        const Clustering c = to_clustering(labels);
        AdmmConfig cfg;
        cfg.max_iters = max_iters;
        return map_to_dict(solve_map(stats, c, Hyperparams::defaults(c, beta), cfg));
      },
      py::arg("stats"), py::arg("labels"), py::arg("beta") = 0.02, py::arg("max_iters") = 20000);

  m.def(
      "variational_log_marginal",
      [](const SampleStats& stats, const std::vector<int>& labels, double beta) {
        const Clustering c = to_clustering(labels);
        const VariationalFit fit = variational_log_marginal(stats, c, Hyperparams::defaults(c, beta));
        py::dict d;
        d["log_marginal"] = fit.log_marginal;
        d["log_joint"] = fit.log_joint;
        d["log_g"] = fit.log_g;
        d["nu_g_eps"] = fit.nu_g_eps;
        d["nu_g_blocks"] = fit.nu_g_blocks;
        d["map"] = map_to_dict(fit.map);
        return d;
      },
      py::arg("stats"), py::arg("labels"), py::arg("beta") = 0.02);

  m.def(
      "basic_log_marginal",
      [](const SampleStats& stats, const std::vector<int>& labels) {
        const Clustering c = to_clustering(labels);
        return analytic_log_marginal_basic(stats, c, Hyperparams::defaults(c, 0.0));
      },
      py::arg("stats"), py::arg("labels"));

  m.def(
      "chib_log_marginal",
      [](const SampleStats& stats, const std::vector<int>& labels, double beta, int samples,
         double kappa, std::uint64_t seed, int psrf_chains) {
        const Clustering c = to_clustering(labels);
        const Hyperparams h = Hyperparams::defaults(c, beta);
        McmcConfig cfg;
        cfg.samples = samples;
        cfg.kappa = kappa;
        cfg.seed = seed;
        cfg.psrf_chains = psrf_chains;
        const ChibEstimate est = chib_log_marginal(stats, c, h, solve_map(stats, c, h), cfg);
        py::dict d;
        d["log_marginal"] = est.log_marginal;
        d["std_error"] = est.std_error;
        d["per_stage_log_ordinates"] = est.per_stage_log_ordinates;
        d["acceptance_rates"] = est.acceptance_rates;
        d["mode_move_rates"] = est.mode_move_rates;
        d["psrf"] = est.psrf;
        d["warnings"] = est.warnings;
        return d;
      },
      py::arg("stats"), py::arg("labels"), py::arg("beta") = 0.02, py::arg("samples") = 10000,
      py::arg("kappa") = 10.0, py::arg("seed") = 0, py::arg("psrf_chains") = 1);

  m.def(
      "spectral_candidates",
      [](const SampleStats& stats, std::vector<double> lambda_grid, int k_max, std::uint64_t seed) {
        SpectralConfig cfg;
        if (!lambda_grid.empty()) {
          cfg.lambda_grid = std::move(lambda_grid);
        }
        cfg.k_max = k_max;
        cfg.seed = seed;
        return candidate_labels(spectral_candidates(stats, cfg));
      },
      py::arg("stats"), py::arg("lambda_grid") = std::vector<double>{}, py::arg("k_max") = 15,
      py::arg("seed") = 0);

  m.def(
      "linkage_candidates",
      [](const SampleStats& stats, const std::string& method, int k_max) {
        Linkage l;
        if (method == "single") {
          l = Linkage::Single;
        } else if (method == "average") {
          l = Linkage::Average;
        } else {
          throw InvalidArgument("linkage method must be single or average, got " + method);
        }
        return candidate_labels(linkage_candidates(stats, l, k_max));
      },
      py::arg("stats"), py::arg("method") = "average", py::arg("k_max") = 15);

  m.def(
      "score",
      [](const SampleStats& stats, const std::vector<int>& labels, const std::string& criterion,
         int samples, double kappa, std::uint64_t seed, int max_iters) {
        const ScoreRecord r = score(stats, to_clustering(labels), Criterion::parse(criterion),
                                    make_configs(samples, kappa, seed, max_iters, 1));
        return r.value;
      },
      py::arg("stats"), py::arg("labels"), py::arg("criterion") = "proposed-vi",
      py::arg("samples") = 10000, py::arg("kappa") = 10.0, py::arg("seed") = 0,
      py::arg("max_iters") = 20000);

  m.def(
      "select",
      [](const SampleStats& stats, const std::vector<std::vector<int>>& candidates,
         const std::string& criterion, int samples, double kappa, std::uint64_t seed, int max_iters,
         unsigned threads) {
        const CandidateSet set = to_candidates(candidates);
        SelectionResult r;
        {
          py::gil_scoped_release release;
          r = select(stats, set, Criterion::parse(criterion),
                     make_configs(samples, kappa, seed, max_iters, threads));
        }
        std::vector<double> values;
        for (const ScoreRecord& s : r.scores) {
          values.push_back(s.value);
        }
        py::dict d;
        d["best"] = r.best.labels();
        d["best_index"] = r.best_index;
        d["scores"] = values;
        d["excluded"] = r.excluded;
        d["posterior_k"] = r.posterior_k;
        d["candidates"] = candidate_labels(set);
        return d;
      },
      py::arg("stats"), py::arg("candidates"), py::arg("criterion") = "proposed-vi",
      py::arg("samples") = 10000, py::arg("kappa") = 10.0, py::arg("seed") = 0,
      py::arg("max_iters") = 20000, py::arg("threads") = 0);

  m.def(
      "anmi",
      [](const std::vector<int>& a, const std::vector<int>& b) {
        return anmi(to_clustering(a), to_clustering(b));
      },
      py::arg("a"), py::arg("b"));
}
