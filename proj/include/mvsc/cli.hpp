#pragma once

#include "mvsc/dataset.hpp"
#include "mvsc/metrics.hpp"
#include "mvsc/solver.hpp"
#include "mvsc/spectral.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvsc {

/// User-input problems (bad config, missing files, invalid manifest). The
/// CLI maps these to exit code 2; other exceptions exit with 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Method { Rmsc, RmscWv, SscBsv, SscAvg, ScBsv };

std::string method_name(Method method);
Method parse_method(const std::string& name);  // throws ValidationError

struct ExperimentConfig {
  Method method = Method::Rmsc;
  SolverConfig solver;
  SpectralConfig spectral;  // spectral.n_clusters == 0 means "take from dataset"
  std::filesystem::path dataset_manifest;
  std::filesystem::path output_dir;
  bool normalize = true;
  int ssc_max_iters = 2000;
  double ssc_rel_tol = 1e-8;

  void validate() const;  // throws ValidationError
};

/// Merges a JSON config file into cfg (fields present in the file win over
/// the current values; CLI flags are applied afterwards and win over both).
void apply_config_file(ExperimentConfig& cfg, const std::filesystem::path& path);

struct WeightSummary {
  std::vector<double> per_view_mean_weight;
  struct Entry {
    int view = 0;
    int sample = 0;
    double weight = 0.0;
  };
  std::vector<Entry> lowest_weight_samples;
};

struct DatasetSummary {
  std::string manifest;
  int n_views = 0;
  int n_samples = 0;
  std::optional<int> n_clusters;
  bool has_labels = false;
};

struct ViewReport {
  std::string name;
  std::optional<ClusterEvaluation> evaluation;
};

struct RunReport {
  std::string method;
  ExperimentConfig config;
  DatasetSummary dataset;
  int iterations = 0;
  bool converged = true;
  std::vector<double> objective_trace;
  std::vector<int> labels;  // selected run's cluster assignment
  std::optional<ClusterEvaluation> evaluation;
  std::optional<WeightSummary> weight_summary;
  std::vector<ViewReport> views;  // per-view results for the *-BSV baselines
  std::optional<std::string> best_view;
  double wall_clock_seconds = 0.0;  // printed to the console, never serialized
};

nlohmann::json report_to_json(const RunReport& report);

/// Fits cfg.method on an already loaded (not yet normalized) dataset and
/// evaluates it when labels are present. Performs no file IO.
RunReport run_experiment(const ExperimentConfig& cfg, const MultiViewDataset& ds);

/// Generates a synthetic dataset under `out`, including `outliers.txt`, and
/// returns (and prints) the manifest path.
std::filesystem::path cmd_gen(const SyntheticSpec& spec, const std::filesystem::path& out);

/// Runs one experiment end to end; writes report.json, metrics.csv and
/// labels.csv into cfg.output_dir.
RunReport cmd_fit(const ExperimentConfig& cfg);

/// Runs cfg.method per (lambda, beta) pair and writes sweep.csv. Failed
/// cells are recorded as NaN rows and the sweep continues.
void cmd_sweep(const ExperimentConfig& cfg, const std::vector<double>& lambda_grid,
               const std::vector<double>& beta_grid);

/// Writes the per-iteration objective of an RMSC / RMSC-WV fit to trace.csv.
void cmd_trace(const ExperimentConfig& cfg);

/// Writes the final weight matrix to weights.csv plus a ranked
/// lowest-weight list to weights_ranked.csv (RMSC only).
void cmd_weights(const ExperimentConfig& cfg);

}  // namespace mvsc
