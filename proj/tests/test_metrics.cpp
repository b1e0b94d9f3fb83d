#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mvsc/metrics.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace mvsc;

namespace {

std::vector<int> random_labels(int n, int c, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, c - 1);
  std::vector<int> out(n);
  for (int& v : out) v = pick(rng);
  return out;
}

std::vector<int> relabel(const std::vector<int>& labels, const std::vector<int>& perm) {
  std::vector<int> out(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) out[i] = perm[labels[i]];
  return out;
}

}  // namespace

TEST_CASE("accuracy on hand-built cases") {
  CHECK(clustering_accuracy({1, 1, 0, 0}, {0, 0, 1, 1}) == doctest::Approx(1.0));
  CHECK(clustering_accuracy({0, 0, 0, 0}, {0, 0, 1, 1}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(clustering_accuracy({0, 1}, {0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(clustering_accuracy({}, {}), std::invalid_argument);
}

TEST_CASE("accuracy equals brute-force permutation search") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    int c = 2 + static_cast<int>(trial % 4);  // up to 5 clusters
    std::vector<int> pred = random_labels(8 + trial % 5, c, rng);
    std::vector<int> truth = random_labels(pred.size(), c, rng);
    CHECK(clustering_accuracy(pred, truth) ==
          doctest::Approx(oracle::accuracy_brute_force(pred, truth)).epsilon(1e-12));
  }
}

TEST_CASE("accuracy bounds and exactness") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> truth = random_labels(12, 3, rng);
    std::vector<int> pred = random_labels(12, 3, rng);
    long largest = 0;
    for (int k = 0; k < 3; ++k)
      largest = std::max(largest, static_cast<long>(std::count(truth.begin(), truth.end(), k)));
    // Mapping every prediction to the majority class is always available.
    std::vector<int> constant(truth.size(), 0);
    CHECK(clustering_accuracy(constant, truth) >=
          static_cast<double>(largest) / truth.size() - 1e-12);
    // A relabeling reaches accuracy exactly 1.
    std::vector<int> perm = {2, 0, 1};
    CHECK(clustering_accuracy(relabel(truth, perm), truth) == doctest::Approx(1.0));
    if (clustering_accuracy(pred, truth) == 1.0) {
      // Accuracy 1 implies the partitions coincide.
      CHECK(normalized_mutual_information(pred, truth) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("nmi on hand-built cases") {
  CHECK(normalized_mutual_information({1, 1, 2, 2, 0, 0}, {0, 0, 1, 1, 2, 2}) ==
        doctest::Approx(1.0));
  CHECK(normalized_mutual_information({0, 0, 0, 0}, {0, 0, 1, 1}) == doctest::Approx(0.0));
  CHECK(normalized_mutual_information({0, 0, 0}, {0, 0, 0}) == doctest::Approx(1.0));

  // Direct contingency evaluation for a mixed case.
  std::vector<int> pred = {0, 0, 1, 1, 2, 2};
  std::vector<int> truth = {0, 0, 0, 1, 1, 1};
  double got = normalized_mutual_information(pred, truth);
  CHECK(got == doctest::Approx(oracle::nmi_contingency(pred, truth)).epsilon(1e-12));
  // And against the literal formula: counts {(0,0):2, (1,0):1, (1,1):1, (2,1):2}.
  double n = 6.0;
  double mi = 2 / n * std::log(2 * n / (2 * 3)) + 1 / n * std::log(1 * n / (2 * 3)) +
              1 / n * std::log(1 * n / (2 * 3)) + 2 / n * std::log(2 * n / (2 * 3));
  double hp = -3.0 * (2 / n) * std::log(2 / n);
  double ht = -2.0 * (3 / n) * std::log(3 / n);
  CHECK(got == doctest::Approx(mi / std::sqrt(hp * ht)).epsilon(1e-12));
}

TEST_CASE("nmi matches the contingency oracle on random instances") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> pred = random_labels(15, 2 + trial % 4, rng);
    std::vector<int> truth = random_labels(15, 2 + (trial / 2) % 4, rng);
    CHECK(normalized_mutual_information(pred, truth) ==
          doctest::Approx(oracle::nmi_contingency(pred, truth)).epsilon(1e-12));
  }
}

TEST_CASE("both metrics are invariant to relabeling and nmi is symmetric") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> pred = random_labels(14, 4, rng);
    std::vector<int> truth = random_labels(14, 3, rng);
    std::vector<int> pperm = {0, 1, 2, 3};
    std::vector<int> tperm = {0, 1, 2};
    std::shuffle(pperm.begin(), pperm.end(), rng);
    std::shuffle(tperm.begin(), tperm.end(), rng);
    std::vector<int> pred2 = relabel(pred, pperm);
    std::vector<int> truth2 = relabel(truth, tperm);
    CHECK(clustering_accuracy(pred2, truth2) ==
          doctest::Approx(clustering_accuracy(pred, truth)).epsilon(1e-12));
    double nmi = normalized_mutual_information(pred, truth);
    CHECK(normalized_mutual_information(pred2, truth2) == doctest::Approx(nmi).epsilon(1e-12));
    CHECK(normalized_mutual_information(truth, pred) == doctest::Approx(nmi).epsilon(1e-12));
    CHECK(nmi >= 0.0);
    CHECK(nmi <= 1.0 + 1e-12);
  }
}

TEST_CASE("hungarian assignment solves small systems exactly") {
  std::vector<std::vector<double>> cost = {{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
  std::vector<int> assignment = min_cost_assignment(cost);
  double total = 0.0;
  for (int i = 0; i < 3; ++i) total += cost[i][assignment[i]];
  CHECK(total == doctest::Approx(5.0));  // 1 + 2 + 2
}

TEST_CASE("cluster evaluation aggregates runs consistently") {
  std::vector<std::vector<int>> runs = {{0, 0, 1, 1}, {1, 1, 0, 0}, {0, 1, 0, 1}};
  std::vector<int> truth = {0, 0, 1, 1};
  ClusterEvaluation eval = ClusterEvaluation::from_runs(runs, 1, truth);
  REQUIRE(eval.per_run_accuracy.size() == 3);
  CHECK(eval.accuracy == doctest::Approx(1.0));  // run 1 is a relabeling
  double mean = (eval.per_run_accuracy[0] + eval.per_run_accuracy[1] + eval.per_run_accuracy[2]) / 3.0;
  CHECK(eval.mean_accuracy == doctest::Approx(mean).epsilon(1e-12));
  double var = 0.0;
  for (double a : eval.per_run_accuracy) var += (a - mean) * (a - mean);
  CHECK(eval.std_accuracy == doctest::Approx(std::sqrt(var / 3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(ClusterEvaluation::from_runs(runs, 5, truth), std::invalid_argument);
}
