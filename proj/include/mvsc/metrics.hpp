#pragma once

#include <vector>

namespace mvsc {

/// Fraction of samples correctly mapped under the best one-to-one assignment
/// of predicted clusters to true clusters (optimal assignment on the padded
/// contingency matrix).
double clustering_accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

/// I(pred; truth) / sqrt(H(pred) * H(truth)) with natural logarithms.
/// If either entropy is zero the value is 1 when the two set partitions are
/// identical and 0 otherwise.
double normalized_mutual_information(const std::vector<int>& pred, const std::vector<int>& truth);

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian
/// algorithm); returns the column assigned to each row.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost);

struct ClusterEvaluation {
  double accuracy = 0.0;  // of the selected run
  double nmi = 0.0;
  std::vector<double> per_run_accuracy;
  std::vector<double> per_run_nmi;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  double mean_nmi = 0.0;
  double std_nmi = 0.0;

  /// Evaluates every restart's labels against the truth; accuracy/nmi are the
  /// selected (lowest-inertia) run's values, mean/std summarize all runs.
  static ClusterEvaluation from_runs(const std::vector<std::vector<int>>& run_labels,
                                     int selected_run, const std::vector<int>& truth);
};

}  // namespace mvsc
