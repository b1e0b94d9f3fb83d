#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace mvsc {

/// Symmetric nonnegative affinity over n samples.
struct SimilarityMatrix {
  Eigen::MatrixXd s;
};

/// Throws std::invalid_argument unless s is square, finite, entrywise
/// nonnegative and symmetric within 1e-10.
void validate_similarity(const SimilarityMatrix& s);

enum class SigmaPolicy { MedianPairwise, Fixed };

struct SpectralConfig {
  int n_clusters = 2;
  int kmeans_restarts = 20;
  int kmeans_max_iters = 100;
  std::uint64_t seed = 0;
  int knn_k = 5;
  SigmaPolicy sigma_policy = SigmaPolicy::MedianPairwise;
  double fixed_sigma = 1.0;  // used when sigma_policy == Fixed
};

/// S = (|Z| + |Z^T|) / 2.
SimilarityMatrix similarity_from_representation(const Eigen::MatrixXd& z);

/// Gaussian-kernel graph over the view's columns, keeping edge (i, j) when j
/// is among i's knn_k nearest neighbors or vice versa. Diagonal is zero.
/// Sigma defaults to the median pairwise distance.
SimilarityMatrix gaussian_knn_graph(const Eigen::MatrixXd& view, const SpectralConfig& cfg);

/// L_sym = I - D^{-1/2} S D^{-1/2}; zero-degree vertices get degree 1e-12 so
/// the scaling stays finite.
Eigen::MatrixXd normalized_laplacian(const SimilarityMatrix& s);

/// The n x c matrix of eigenvectors for the c smallest Laplacian eigenvalues,
/// rows normalized to unit length (all-zero rows are left as zero).
Eigen::MatrixXd spectral_embedding(const SimilarityMatrix& s, int n_clusters);

struct KMeansRun {
  std::vector<int> labels;
  double inertia = 0.0;
  std::vector<double> inertia_history;  // one entry per Lloyd iteration
};

struct KMeansResult {
  std::vector<int> labels;  // of the lowest-inertia restart
  double inertia = 0.0;
  int best_restart = 0;
  std::vector<KMeansRun> runs;
};

/// Lloyd iterations with k-means++ seeding per restart; empty clusters are
/// re-seeded from the farthest point. Points are rows. Restart r draws from
/// a generator seeded with seed + r, so runs are independent and the whole
/// call is deterministic.
KMeansResult kmeans(const Eigen::MatrixXd& points, int c, int restarts, int max_iters,
                    std::uint64_t seed);

struct SpectralResult {
  std::vector<int> labels;  // best restart
  KMeansResult kmeans;
  Eigen::MatrixXd embedding;
};

SpectralResult spectral_cluster_detailed(const SimilarityMatrix& s, const SpectralConfig& cfg);

/// Labels in [0, n_clusters) from the lowest-inertia k-means restart.
std::vector<int> spectral_cluster(const SimilarityMatrix& s, const SpectralConfig& cfg);

}  // namespace mvsc
