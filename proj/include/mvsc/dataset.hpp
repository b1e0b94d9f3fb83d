#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mvsc {

/**
 * @brief A multi-view dataset: m feature matrices over the same n samples.
 *
 * Samples are columns; view v has shape d_v x n. Instances are immutable
 * after construction and safe to share across threads. The constructor
 * validates the shape and label invariants and throws std::invalid_argument
 * on violation.
 */
class MultiViewDataset {
 public:
  MultiViewDataset(std::vector<Eigen::MatrixXd> views, std::vector<std::string> view_names,
                   std::optional<std::vector<int>> labels = std::nullopt,
                   std::optional<int> n_clusters = std::nullopt);

  int n_views() const { return static_cast<int>(views_.size()); }
  int n_samples() const { return static_cast<int>(views_.front().cols()); }
  const std::vector<Eigen::MatrixXd>& views() const { return views_; }
  const Eigen::MatrixXd& view(int v) const { return views_.at(v); }
  const std::vector<std::string>& view_names() const { return view_names_; }
  const std::optional<std::vector<int>>& labels() const { return labels_; }
  std::optional<int> n_clusters() const { return n_clusters_; }

 private:
  std::vector<Eigen::MatrixXd> views_;
  std::vector<std::string> view_names_;
  std::optional<std::vector<int>> labels_;
  std::optional<int> n_clusters_;
};

/// Parameters for the synthetic subspace-structured generator.
struct SyntheticSpec {
  int n_clusters = 3;
  int samples_per_cluster = 20;
  int subspace_dim = 3;                  // must be < min(ambient_dims)
  std::vector<int> ambient_dims = {30, 30};
  double noise_sigma = 0.0;              // additive Gaussian std on clean columns
  double outlier_fraction = 0.0;         // fraction of columns replaced in outlier_views
  std::vector<int> outlier_views = {};   // view indices receiving the outlier columns
  std::uint64_t seed = 0;
};

struct SyntheticDataset {
  MultiViewDataset dataset;
  std::vector<int> outlier_indices;  // ascending column indices of corrupted samples
};

/// Loads a dataset from a JSON manifest:
///   { "views": [{"name": ..., "path": ...}, ...],
///     "labels_path": optional, "n_clusters": optional }
/// View paths are resolved relative to the manifest directory. View files are
/// headerless CSV, one row per feature dimension, one column per sample.
MultiViewDataset load_dataset(const std::filesystem::path& manifest_path);

/// Writes view CSVs, an optional label file and a manifest into `dir`;
/// returns the manifest path.
std::filesystem::path save_dataset(const MultiViewDataset& ds, const std::filesystem::path& dir);

/// Scales every column of every view to unit Euclidean norm. A zero column
/// raises std::invalid_argument naming the view and column.
MultiViewDataset normalize_unit_l2(const MultiViewDataset& ds);

/// Deterministic generator: per view, each cluster's clean columns lie in a
/// random subspace_dim-dimensional linear subspace plus isotropic Gaussian
/// noise; outlier columns in outlier_views are replaced by uniform random
/// unit vectors. Labels are the cluster ids.
SyntheticDataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace mvsc
