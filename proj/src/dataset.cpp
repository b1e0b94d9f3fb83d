#include "mvsc/dataset.hpp"

#include "mvsc/csv.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

namespace mvsc {

namespace {

// Validates labels against c and returns the 0-based vector. Accepts 1-based
// files (minimum label 1 with no 0) and shifts them down.
std::vector<int> canonical_labels(std::vector<int> labels, std::optional<int> n_clusters) {
  if (labels.empty()) throw std::invalid_argument("label vector is empty");
  int lo = *std::min_element(labels.begin(), labels.end());
  if (lo == 1) {
    for (int& v : labels) --v;
  } else if (lo != 0) {
    throw std::invalid_argument("labels must be 0-based (or 1-based); minimum is " +
                                std::to_string(lo));
  }
  int hi = *std::max_element(labels.begin(), labels.end());
  int c = n_clusters.value_or(hi + 1);
  std::vector<char> seen(c, 0);
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= c)
      throw std::invalid_argument("label " + std::to_string(labels[i]) + " at position " +
                                  std::to_string(i) + " outside [0, " + std::to_string(c) + ")");
    seen[labels[i]] = 1;
  }
  for (int k = 0; k < c; ++k)
    if (!seen[k])
      throw std::invalid_argument("cluster " + std::to_string(k) + " has no samples");
  return labels;
}

}  // namespace

MultiViewDataset::MultiViewDataset(std::vector<Eigen::MatrixXd> views,
                                   std::vector<std::string> view_names,
                                   std::optional<std::vector<int>> labels,
                                   std::optional<int> n_clusters)
    : views_(std::move(views)), view_names_(std::move(view_names)), n_clusters_(n_clusters) {
  if (views_.empty()) throw std::invalid_argument("dataset needs at least one view");
  if (view_names_.size() != views_.size())
    throw std::invalid_argument("view_names size does not match view count");
  Eigen::Index n = views_.front().cols();
  if (n < 2) throw std::invalid_argument("dataset needs at least two samples");
  for (size_t v = 0; v < views_.size(); ++v) {
    if (views_[v].rows() < 1)
      throw std::invalid_argument("view '" + view_names_[v] + "' has no feature rows");
    if (views_[v].cols() != n)
      throw std::invalid_argument("column count mismatch: view '" + view_names_[v] + "' has " +
                                  std::to_string(views_[v].cols()) + " samples, expected " +
                                  std::to_string(n));
  }
  if (labels) {
    if (static_cast<Eigen::Index>(labels->size()) != n)
      throw std::invalid_argument("label count " + std::to_string(labels->size()) +
                                  " does not match sample count " + std::to_string(n));
    labels_ = canonical_labels(std::move(*labels), n_clusters_);
    if (!n_clusters_)
      n_clusters_ = *std::max_element(labels_->begin(), labels_->end()) + 1;
  }
}

MultiViewDataset load_dataset(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("invalid manifest JSON " + manifest_path.string() + ": " + e.what());
  }
  if (!manifest.contains("views") || !manifest["views"].is_array() || manifest["views"].empty())
    throw std::runtime_error("manifest " + manifest_path.string() +
                             " needs a non-empty 'views' array");
  auto base = manifest_path.parent_path();
  std::vector<Eigen::MatrixXd> views;
  std::vector<std::string> names;
  for (const auto& entry : manifest["views"]) {
    if (!entry.contains("name") || !entry.contains("path"))
      throw std::runtime_error("manifest view entries need 'name' and 'path'");
    names.push_back(entry["name"].get<std::string>());
    views.push_back(read_matrix_csv(base / entry["path"].get<std::string>()));
  }
  std::optional<std::vector<int>> labels;
  if (manifest.contains("labels_path"))
    labels = read_labels(base / manifest["labels_path"].get<std::string>());
  std::optional<int> n_clusters;
  if (manifest.contains("n_clusters")) n_clusters = manifest["n_clusters"].get<int>();
  return MultiViewDataset(std::move(views), std::move(names), std::move(labels), n_clusters);
}

std::filesystem::path save_dataset(const MultiViewDataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["views"] = nlohmann::json::array();
  for (int v = 0; v < ds.n_views(); ++v) {
    std::string file = "view_" + std::to_string(v) + ".csv";
    write_matrix_csv(dir / file, ds.view(v));
    manifest["views"].push_back({{"name", ds.view_names()[v]}, {"path", file}});
  }
  if (ds.labels()) {
    write_labels(dir / "labels.txt", *ds.labels());
    manifest["labels_path"] = "labels.txt";
  }
  if (ds.n_clusters()) manifest["n_clusters"] = *ds.n_clusters();
  auto manifest_path = dir / "manifest.json";
  std::ofstream out(manifest_path);
  if (!out) throw std::runtime_error("cannot open for writing: " + manifest_path.string());
  out << manifest.dump(2) << "\n";
  return manifest_path;
}

MultiViewDataset normalize_unit_l2(const MultiViewDataset& ds) {
  std::vector<Eigen::MatrixXd> views = ds.views();
  for (size_t v = 0; v < views.size(); ++v) {
    for (Eigen::Index j = 0; j < views[v].cols(); ++j) {
      double norm = views[v].col(j).norm();
      if (norm == 0.0)
        throw std::invalid_argument("zero column in view '" + ds.view_names()[v] +
                                    "' at sample " + std::to_string(j));
      views[v].col(j) /= norm;
    }
  }
  auto labels = ds.labels();
  return MultiViewDataset(std::move(views), ds.view_names(), labels, ds.n_clusters());
}

SyntheticDataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_clusters < 1 || spec.samples_per_cluster < 1 || spec.subspace_dim < 1)
    throw std::invalid_argument("cluster count, samples per cluster and subspace dim must be >= 1");
  if (spec.ambient_dims.empty()) throw std::invalid_argument("need at least one ambient dim");
  int min_dim = *std::min_element(spec.ambient_dims.begin(), spec.ambient_dims.end());
  if (spec.subspace_dim >= min_dim)
    throw std::invalid_argument("subspace_dim must be smaller than every ambient dim");
  if (spec.outlier_fraction < 0.0 || spec.outlier_fraction >= 1.0)
    throw std::invalid_argument("outlier_fraction must be in [0, 1)");
  int m = static_cast<int>(spec.ambient_dims.size());
  for (int v : spec.outlier_views)
    if (v < 0 || v >= m) throw std::invalid_argument("outlier view index out of range");

  int n = spec.n_clusters * spec.samples_per_cluster;
  double exact = spec.outlier_fraction * n;
  int n_outliers = static_cast<int>(std::llround(exact));
  if (std::abs(exact - n_outliers) > 1e-9)
    throw std::invalid_argument("outlier_fraction * n must be an integer, got " +
                                std::to_string(exact));

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto randn = [&](Eigen::Index r, Eigen::Index c) {
    Eigen::MatrixXd out(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) out(i, j) = gauss(rng);
    return out;
  };

  // Outlier columns are shared across the corrupted views.
  std::vector<int> indices(n);
  for (int i = 0; i < n; ++i) indices[i] = i;
  for (int i = 0; i < n_outliers; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(indices[i], indices[pick(rng)]);
  }
  std::vector<int> outliers(indices.begin(), indices.begin() + n_outliers);
  std::sort(outliers.begin(), outliers.end());
  std::set<int> corrupted_views(spec.outlier_views.begin(), spec.outlier_views.end());

  std::vector<Eigen::MatrixXd> views;
  std::vector<std::string> names;
  std::vector<int> labels(n);
  for (int v = 0; v < m; ++v) {
    int d = spec.ambient_dims[v];
    Eigen::MatrixXd view(d, n);
    for (int k = 0; k < spec.n_clusters; ++k) {
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(randn(d, spec.subspace_dim));
      Eigen::MatrixXd basis =
          qr.householderQ() * Eigen::MatrixXd::Identity(d, spec.subspace_dim);
      Eigen::MatrixXd block = basis * randn(spec.subspace_dim, spec.samples_per_cluster);
      if (spec.noise_sigma > 0.0)
        block += spec.noise_sigma * randn(d, spec.samples_per_cluster);
      view.middleCols(k * spec.samples_per_cluster, spec.samples_per_cluster) = block;
      for (int t = 0; t < spec.samples_per_cluster; ++t)
        labels[k * spec.samples_per_cluster + t] = k;
    }
    if (corrupted_views.count(v)) {
      for (int j : outliers) {
        Eigen::VectorXd dir = randn(d, 1);
        view.col(j) = dir / dir.norm();
      }
    }
    views.push_back(std::move(view));
    names.push_back("view_" + std::to_string(v));
  }

  MultiViewDataset ds(std::move(views), std::move(names), labels, spec.n_clusters);
  return SyntheticDataset{std::move(ds), std::move(outliers)};
}

}  // namespace mvsc
