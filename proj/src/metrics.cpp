#include "mvsc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace mvsc {

namespace {

void check_inputs(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.empty() || truth.empty()) throw std::invalid_argument("empty label vector");
  if (pred.size() != truth.size())
    throw std::invalid_argument("label vectors have different lengths");
  for (int v : pred)
    if (v < 0) throw std::invalid_argument("labels must be nonnegative");
  for (int v : truth)
    if (v < 0) throw std::invalid_argument("labels must be nonnegative");
}

// Contingency counts indexed by (pred cluster, truth cluster), with clusters
// compacted to consecutive ids.
struct Contingency {
  std::vector<std::vector<long>> counts;
  std::vector<long> pred_sizes;
  std::vector<long> truth_sizes;
};

std::vector<int> compact_ids(const std::vector<int>& labels, int& count) {
  std::map<int, int> remap;
  std::vector<int> out(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = remap.emplace(labels[i], static_cast<int>(remap.size()));
    out[i] = it->second;
  }
  count = static_cast<int>(remap.size());
  return out;
}

Contingency contingency_table(const std::vector<int>& pred, const std::vector<int>& truth) {
  int cp = 0, ct = 0;
  std::vector<int> p = compact_ids(pred, cp);
  std::vector<int> t = compact_ids(truth, ct);
  Contingency c;
  c.counts.assign(cp, std::vector<long>(ct, 0));
  c.pred_sizes.assign(cp, 0);
  c.truth_sizes.assign(ct, 0);
  for (size_t i = 0; i < p.size(); ++i) {
    ++c.counts[p[i]][t[i]];
    ++c.pred_sizes[p[i]];
    ++c.truth_sizes[t[i]];
  }
  return c;
}

}  // namespace

std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  // Hungarian algorithm with potentials, O(n^3).
  int n = static_cast<int>(cost.size());
  if (n == 0) throw std::invalid_argument("min_cost_assignment: empty cost matrix");
  for (const auto& row : cost)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("min_cost_assignment: cost matrix must be square");

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0);  // match[j]: row matched to column j (1-based)
  std::vector<int> way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = match[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j)
    if (match[j] > 0) assignment[match[j] - 1] = j - 1;
  return assignment;
}

double clustering_accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_inputs(pred, truth);
  Contingency c = contingency_table(pred, truth);
  int side = std::max(c.counts.size(), c.counts.front().size());
  // Maximize matched counts == minimize (max_count - count) on the padded square.
  std::vector<std::vector<double>> cost(side, std::vector<double>(side, 0.0));
  long max_count = 0;
  for (const auto& row : c.counts)
    for (long value : row) max_count = std::max(max_count, value);
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j) {
      long value = (i < static_cast<int>(c.counts.size()) &&
                    j < static_cast<int>(c.counts.front().size()))
                       ? c.counts[i][j]
                       : 0;
      cost[i][j] = static_cast<double>(max_count - value);
    }
  std::vector<int> assignment = min_cost_assignment(cost);
  long matched = 0;
  for (int i = 0; i < static_cast<int>(c.counts.size()); ++i) {
    int j = assignment[i];
    if (j < static_cast<int>(c.counts.front().size())) matched += c.counts[i][j];
  }
  return static_cast<double>(matched) / static_cast<double>(pred.size());
}

double normalized_mutual_information(const std::vector<int>& pred,
                                     const std::vector<int>& truth) {
  check_inputs(pred, truth);
  Contingency c = contingency_table(pred, truth);
  double n = static_cast<double>(pred.size());

  auto entropy = [n](const std::vector<long>& sizes) {
    double h = 0.0;
    for (long s : sizes)
      if (s > 0) h -= (s / n) * std::log(s / n);
    return h;
  };
  double h_pred = entropy(c.pred_sizes);
  double h_truth = entropy(c.truth_sizes);
  if (h_pred == 0.0 || h_truth == 0.0) {
    // A single-cluster partition: identical partitions iff both are single.
    return (c.pred_sizes.size() == 1 && c.truth_sizes.size() == 1) ? 1.0 : 0.0;
  }

  double mi = 0.0;
  for (size_t i = 0; i < c.counts.size(); ++i)
    for (size_t j = 0; j < c.counts[i].size(); ++j) {
      long nij = c.counts[i][j];
      if (nij == 0) continue;
      mi += (nij / n) * std::log(nij * n / (static_cast<double>(c.pred_sizes[i]) *
                                            static_cast<double>(c.truth_sizes[j])));
    }
  mi = std::max(mi, 0.0);
  return mi / std::sqrt(h_pred * h_truth);
}

ClusterEvaluation ClusterEvaluation::from_runs(const std::vector<std::vector<int>>& run_labels,
                                               int selected_run, const std::vector<int>& truth) {
  if (run_labels.empty()) throw std::invalid_argument("from_runs: no runs");
  if (selected_run < 0 || selected_run >= static_cast<int>(run_labels.size()))
    throw std::invalid_argument("from_runs: selected run out of range");
  ClusterEvaluation eval;
  for (const auto& labels : run_labels) {
    eval.per_run_accuracy.push_back(clustering_accuracy(labels, truth));
    eval.per_run_nmi.push_back(normalized_mutual_information(labels, truth));
  }
  eval.accuracy = eval.per_run_accuracy[selected_run];
  eval.nmi = eval.per_run_nmi[selected_run];

  auto mean_of = [](const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / xs.size();
  };
  auto std_of = [&](const std::vector<double>& xs, double mean) {
    double s = 0.0;
    for (double x : xs) s += (x - mean) * (x - mean);
    return std::sqrt(s / xs.size());
  };
  eval.mean_accuracy = mean_of(eval.per_run_accuracy);
  eval.std_accuracy = std_of(eval.per_run_accuracy, eval.mean_accuracy);
  eval.mean_nmi = mean_of(eval.per_run_nmi);
  eval.std_nmi = std_of(eval.per_run_nmi, eval.mean_nmi);
  return eval;
}

}  // namespace mvsc
