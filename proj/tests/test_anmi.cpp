#include "helpers.hpp"
#include "oracles.hpp"

#include "vclust/anmi.hpp"
#include "vclust/error.hpp"

#include <doctest.h>

#include <cmath>

using namespace vclust;
using namespace vclust::testing;

TEST_CASE("ANMI of identical and relabeled partitions is one") {
  const Clustering a = Clustering::canonicalize(std::vector<int>{0, 0, 1, 2, 2, 1, 0});
  CHECK(anmi(a, a) == 1.0);
  CHECK(anmi(a, Clustering::canonicalize(std::vector<int>{5, 5, 3, 9, 9, 3, 5})) == 1.0);
}

TEST_CASE("ANMI of the two-by-two crossing matches the brute-force oracle") {
  BruteForceAnmi oracle;
  const std::vector<int> a{0, 0, 1, 1};
  const std::vector<int> b{0, 1, 0, 1};
  const double v = anmi(Clustering::canonicalize(a), Clustering::canonicalize(b));
  CHECK(v == doctest::Approx(oracle(a, b)).epsilon(1e-12));
  CHECK(v < 0.0);
}

TEST_CASE("ANMI equals the brute-force oracle on every pair of small partitions") {
  BruteForceAnmi oracle;
  for (int p = 1; p <= 5; ++p) {
    const auto parts = all_partitions(p);
    for (const auto& a : parts) {
      for (const auto& b : parts) {
        const double v = anmi(Clustering::canonicalize(a), Clustering::canonicalize(b));
        CHECK(std::abs(v - oracle(a, b)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("ANMI symmetry, relabeling and refinement") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 20 + 9 * trial;
    const Clustering a = random_clustering(p, 2 + trial % 7, rng);
    const Clustering b = random_clustering(p, 2 + trial % 5, rng);
    CHECK(anmi(a, b) == doctest::Approx(anmi(b, a)).epsilon(1e-12));
    std::vector<int> relabeled(a.labels());
    for (int& l : relabeled) {
      l = 100 - 3 * l;
    }
    CHECK(anmi(Clustering::canonicalize(relabeled), b) == doctest::Approx(anmi(a, b)).epsilon(1e-12));
    CHECK(anmi(a, b) <= 1.0);
    std::vector<int> singletons(p);
    std::iota(singletons.begin(), singletons.end(), 0);
    CHECK(anmi(a, Clustering::canonicalize(singletons)) < 1.0);
  }
}

TEST_CASE("ANMI of independent partitions averages near zero") {
  Rng rng(2);
  double sum = 0.0;
  for (int t = 0; t < 200; ++t) {
    sum += anmi(random_clustering(60, 4, rng), random_clustering(60, 3, rng));
  }
  CHECK(std::abs(sum / 200.0) < 0.01);
}

TEST_CASE("ANMI is stable for large partitions") {
  Rng rng(3);
  const Clustering a = random_clustering(3000, 40, rng);
  const Clustering b = random_clustering(3000, 25, rng);
  const double v = anmi(a, b);
  CHECK(std::isfinite(v));
  CHECK(std::abs(v) < 0.02);
}

TEST_CASE("ANMI rejects mismatched lengths") {
  CHECK_THROWS_AS(anmi(Clustering::single(3), Clustering::single(4)), InvalidArgument);
}

TEST_CASE("aggregate and formatting") {
  const MeanStd ones = aggregate({1.0, 1.0, 1.0});
  CHECK(ones.mean == 1.0);
  CHECK(ones.std == 0.0);
  const MeanStd two = aggregate({0.0, 1.0});
  CHECK(two.mean == 0.5);
  CHECK(two.std == doctest::Approx(std::sqrt(0.5)));
  CHECK(aggregate({0.3}).std == 0.0);
  CHECK_THROWS_AS(aggregate({}), InvalidArgument);
  CHECK(format_mean_std({0.95, 0.06}) == "0.95 (0.06)");
  CHECK(format_mean_std({1.0, 0.0}) == "1.0 (0.0)");
  CHECK(format_mean_std({0.41, 0.04}) == "0.41 (0.04)");
  CHECK(format_mean_std({0.5, 0.7071}) == "0.5 (0.71)");
}
