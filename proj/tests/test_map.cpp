#include "helpers.hpp"
#include "oracles.hpp"

#include "vclust/error.hpp"
#include "vclust/linalg.hpp"
#include "vclust/map_solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace vclust;
using namespace vclust::testing;

TEST_CASE("map_objective scalar plug-in") {
  const Clustering c = Clustering::single(1);
  const Hyperparams h = Hyperparams::defaults(c, 0.0);
  const SampleStats stats(1, Matrix::Identity(1, 1));
  const Matrix one = Matrix::Identity(1, 1);
  CHECK(map_objective(one, {one}, stats, c, h) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("map_objective at beta 0 separates the noise terms") {
  Rng rng(2);
  const Clustering c = random_clustering(6, 2, rng);
  const Hyperparams h = Hyperparams::defaults(c, 0.0);
  const SampleStats stats(30, random_spd(6, rng));
  const Matrix xe = random_spd(6, rng);
  const std::vector<Matrix> xb{random_spd(static_cast<Eigen::Index>(c.members(0).size()), rng),
                               random_spd(static_cast<Eigen::Index>(c.members(1).size()), rng)};
  const double t = 2.7;
  const double diff = map_objective(t * xe, xb, stats, c, h) - map_objective(xe, xb, stats, c, h);
  CHECK(diff == doctest::Approx((t - 1.0) * xe.trace() - h.a_eps() * 6.0 * std::log(t)).epsilon(1e-10));
}

TEST_CASE("map_objective matches an independent implementation") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Clustering c = random_clustering(7, 3, rng);
    Hyperparams h = Hyperparams::defaults(c, 0.05);
    h.scale_eps = random_spd(7, rng);
    OraclePoint pt;
    pt.x_eps = random_spd(7, rng);
    for (int j = 0; j < 3; ++j) {
      const auto d = static_cast<Eigen::Index>(c.members(j).size());
      pt.blocks.push_back(random_spd(d, rng));
      h.scale_blocks[j] = random_spd(d, rng);
    }
    const SampleStats stats(50, random_spd(7, rng));
    const double expected = oracle_objective(pt, stats, c, h);
    CHECK(std::abs(map_objective(pt.x_eps, pt.blocks, stats, c, h) - expected) <=
          1e-10 * (1.0 + std::abs(expected)));
  }
}

TEST_CASE("solve_map at beta 0 returns the conjugate posterior modes") {
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const Clustering c = random_clustering(8, 1 + trial % 4, rng);
    const Hyperparams h = Hyperparams::defaults(c, 0.0);
    const SampleStats stats(20 + 40 * trial, random_spd(8, rng));
    const MapSolution sol = solve_map(stats, c, h);
    REQUIRE(sol.converged);
    const double n = static_cast<double>(stats.n());
    for (int j = 0; j < c.num_clusters(); ++j) {
      const Matrix sj = extract_block_cov(stats, c, j);
      const Matrix mode = (h.scale_blocks[j] + n * sj) / (h.nu_blocks[j] + n + sj.rows() + 1.0);
      CHECK((sol.sigma_block(j) - mode).norm() <= 1e-6 * mode.norm());
    }
    const Matrix eps_mode = h.a_eps() * Matrix::Identity(8, 8);
    CHECK((sol.x_eps - eps_mode).norm() <= 1e-6 * eps_mode.norm());
  }
}

TEST_CASE("solve_map with noise matches the first-order oracle") {
  Rng rng(5);
  const Clustering c = Clustering::canonicalize(std::vector<int>{0, 0, 1, 1});
  for (double beta : {0.01, 0.02, 0.2}) {
    const Hyperparams h = Hyperparams::defaults(c, beta);
    const SampleStats stats(100, random_spd(4, rng));
    const MapSolution sol = solve_map(stats, c, h);
    REQUIRE(sol.converged);
    const double oracle = oracle_objective(oracle_map(stats, c, h), stats, c, h);
    CHECK(std::abs(sol.objective - oracle) <= 1e-8 * std::abs(oracle));
    CHECK(sol.objective <= oracle + 1e-9 * std::abs(oracle));
  }
}

TEST_CASE("converged solutions satisfy the consensus constraint") {
  Rng rng(6);
  const Clustering c = random_clustering(10, 3, rng);
  const Hyperparams h = Hyperparams::defaults(c, 0.02);
  const SampleStats stats(400, random_spd(10, rng));
  const AdmmConfig cfg;
  const MapSolution sol = solve_map(stats, c, h, cfg);
  REQUIRE(sol.converged);
  const Matrix gap = sol.x_full(c) + h.beta * sol.x_eps - sol.z;
  CHECK(gap.norm() <= cfg.tol_primal * (1.0 + sol.z.norm()));
  CHECK(is_spd(sol.z));
  CHECK(is_spd(sol.x_eps));
  for (const Matrix& x : sol.x_blocks) {
    CHECK(is_spd(x));
  }
}

TEST_CASE("solve_map is equivariant under variable permutation") {
  Rng rng(7);
  const Clustering c = random_clustering(8, 3, rng);
  const SampleStats stats(200, random_spd(8, rng));
  std::vector<int> perm(8);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  // Variable i of the permuted problem is variable perm[i] of the original.
  Matrix sp(8, 8);
  std::vector<int> labels(8);
  for (int i = 0; i < 8; ++i) {
    labels[i] = c.label(perm[i]);
    for (int j = 0; j < 8; ++j) {
      sp(i, j) = stats.covariance()(perm[i], perm[j]);
    }
  }
  const Clustering cp = Clustering::canonicalize(labels);
  const MapSolution a = solve_map(stats, c, Hyperparams::defaults(c, 0.02));
  const MapSolution b = solve_map(SampleStats(200, sp), cp, Hyperparams::defaults(cp, 0.02));
  CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
}

TEST_CASE("trace rows follow iterations and the iteration cap is honoured") {
  Rng rng(8);
  const Clustering c = random_clustering(5, 2, rng);
  const Hyperparams h = Hyperparams::defaults(c, 0.02);
  const SampleStats stats(50, random_spd(5, rng));
  std::vector<AdmmTraceRow> rows;
  AdmmConfig cfg;
  cfg.max_iters = 7;
  const MapSolution sol = solve_map(stats, c, h, cfg, [&](const AdmmTraceRow& r) { rows.push_back(r); });
  CHECK_FALSE(sol.converged);
  CHECK(sol.iterations == 7);
  REQUIRE(rows.size() == 7);
  CHECK(rows.front().iter == 1);
  CHECK(rows.back().objective == doctest::Approx(sol.objective));
}

TEST_CASE("invalid inputs are rejected") {
  const Clustering c = Clustering::single(3);
  const SampleStats stats(10, Matrix::Identity(4, 4));
  CHECK_THROWS_AS(solve_map(stats, c, Hyperparams::defaults(c, 0.02)), InvalidArgument);
  AdmmConfig cfg;
  cfg.tol_primal = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}
