#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mvsc/metrics.hpp"
#include "mvsc/spectral.hpp"
#include "oracles.hpp"

#include <random>
#include <set>

using namespace mvsc;

namespace {

// Block-diagonal similarity with the given block sizes and constant weight.
SimilarityMatrix block_similarity(const std::vector<int>& sizes, double weight) {
  int n = 0;
  for (int s : sizes) n += s;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  int offset = 0;
  for (int size : sizes) {
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j)
        if (i != j) s(offset + i, offset + j) = weight;
    offset += size;
  }
  return SimilarityMatrix{s};
}

std::vector<int> block_truth(const std::vector<int>& sizes) {
  std::vector<int> truth;
  for (size_t k = 0; k < sizes.size(); ++k)
    truth.insert(truth.end(), sizes[k], static_cast<int>(k));
  return truth;
}

}  // namespace

TEST_CASE("similarity from representation") {
  Eigen::MatrixXd sym(2, 2);
  sym << 0.0, 0.3, 0.3, 0.0;
  CHECK((similarity_from_representation(sym).s - sym).cwiseAbs().maxCoeff() == 0.0);

  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 3);
  z(0, 1) = 1.0;
  z(1, 0) = -3.0;
  SimilarityMatrix s = similarity_from_representation(z);
  CHECK(s.s(0, 1) == doctest::Approx(2.0));
  CHECK(s.s(1, 0) == doctest::Approx(2.0));

  std::mt19937_64 rng(2);
  Eigen::MatrixXd r = oracle::random_matrix(6, 6, rng);
  SimilarityMatrix sr = similarity_from_representation(r);
  CHECK((sr.s - sr.s.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(sr.s.minCoeff() >= 0.0);
  // Idempotent on its own outputs.
  CHECK((similarity_from_representation(sr.s).s - sr.s).cwiseAbs().maxCoeff() <= 1e-15);

  Eigen::MatrixXd bad = Eigen::MatrixXd::Constant(2, 2, std::nan(""));
  CHECK_THROWS_AS(similarity_from_representation(bad), std::invalid_argument);
}

TEST_CASE("gaussian knn graph separates two tight blobs with k=1") {
  Eigen::MatrixXd x(2, 6);
  x << 0.0, 0.1, 0.05, 5.0, 5.1, 5.05,
       0.0, 0.05, 0.1, 5.0, 5.05, 5.1;
  SpectralConfig cfg;
  cfg.knn_k = 1;
  SimilarityMatrix w = gaussian_knn_graph(x, cfg);
  for (int i = 0; i < 3; ++i)
    for (int j = 3; j < 6; ++j) {
      CHECK(w.s(i, j) == 0.0);
      CHECK(w.s(j, i) == 0.0);
    }
  CHECK((w.s - w.s.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(w.s.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gaussian knn graph sparsity pattern matches exhaustive enumeration") {
  std::mt19937_64 rng(5);
  Eigen::MatrixXd x = oracle::random_matrix(3, 8, rng);
  SpectralConfig cfg;
  cfg.knn_k = 3;
  SimilarityMatrix w = gaussian_knn_graph(x, cfg);

  // Brute-force mutual-OR k-nearest-neighbor relation.
  std::set<std::pair<int, int>> edges;
  for (int i = 0; i < 8; ++i) {
    std::vector<std::pair<double, int>> dist;
    for (int j = 0; j < 8; ++j)
      if (j != i) dist.push_back({(x.col(i) - x.col(j)).squaredNorm(), j});
    std::sort(dist.begin(), dist.end());
    for (int t = 0; t < 3; ++t) {
      edges.insert({i, dist[t].second});
      edges.insert({dist[t].second, i});
    }
  }
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      CHECK((w.s(i, j) > 0.0) == (edges.count({i, j}) > 0));
}

TEST_CASE("duplicate points break the median bandwidth with a helpful message") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(2, 4);  // all identical points
  SpectralConfig cfg;
  cfg.knn_k = 1;
  CHECK_THROWS_WITH_AS(gaussian_knn_graph(x, cfg), doctest::Contains("Fixed"),
                       std::invalid_argument);
  cfg.sigma_policy = SigmaPolicy::Fixed;
  cfg.fixed_sigma = 1.0;
  CHECK_NOTHROW(gaussian_knn_graph(x, cfg));
}

TEST_CASE("laplacian eigenvalues stay within the normalized range") {
  std::mt19937_64 rng(7);
  Eigen::MatrixXd z = oracle::random_matrix(10, 10, rng);
  SimilarityMatrix s = similarity_from_representation(z);
  Eigen::MatrixXd lap = normalized_laplacian(s);
  Eigen::VectorXd evs = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(lap).eigenvalues();
  CHECK(evs.minCoeff() >= -1e-10);
  CHECK(evs.maxCoeff() <= 2.0 + 1e-10);
  // Connected graph: lambda_min is (numerically) zero.
  CHECK(evs.minCoeff() <= 1e-8);
}

TEST_CASE("block-diagonal similarity has one near-zero eigenvalue per block") {
  SimilarityMatrix s = block_similarity({4, 5, 3}, 0.7);
  Eigen::MatrixXd lap = normalized_laplacian(s);
  Eigen::VectorXd evs = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(lap).eigenvalues();
  for (int k = 0; k < 3; ++k) CHECK(evs(k) <= 1e-8);
  CHECK(evs(3) > 1e-3);
}

TEST_CASE("spectral clustering recovers exact blocks") {
  SimilarityMatrix s = block_similarity({5, 5, 5}, 0.4);
  SpectralConfig cfg;
  cfg.n_clusters = 3;
  cfg.seed = 11;
  std::vector<int> labels = spectral_cluster(s, cfg);
  CHECK(clustering_accuracy(labels, block_truth({5, 5, 5})) == doctest::Approx(1.0));
}

TEST_CASE("degenerate all-ones similarity still yields valid labels") {
  int n = 6;
  Eigen::MatrixXd s = Eigen::MatrixXd::Ones(n, n);
  s.diagonal().setZero();
  SpectralConfig cfg;
  cfg.n_clusters = 2;
  std::vector<int> labels = spectral_cluster(SimilarityMatrix{s}, cfg);
  REQUIRE(static_cast<int>(labels.size()) == n);
  for (int v : labels) CHECK((v == 0 || v == 1));
}

TEST_CASE("spectral clustering is deterministic for a fixed seed") {
  std::mt19937_64 rng(9);
  Eigen::MatrixXd z = oracle::random_matrix(12, 12, rng);
  SimilarityMatrix s = similarity_from_representation(z);
  SpectralConfig cfg;
  cfg.n_clusters = 3;
  cfg.seed = 4;
  CHECK(spectral_cluster(s, cfg) == spectral_cluster(s, cfg));
}

TEST_CASE("isolated vertices keep the pipeline finite") {
  SimilarityMatrix s = block_similarity({4, 4}, 0.5);
  // Append an isolated vertex with no edges at all.
  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(9, 9);
  padded.topLeftCorner(8, 8) = s.s;
  SpectralConfig cfg;
  cfg.n_clusters = 2;
  std::vector<int> labels = spectral_cluster(SimilarityMatrix{padded}, cfg);
  CHECK(static_cast<int>(labels.size()) == 9);
}

TEST_CASE("kmeans basics") {
  // One point per cluster: zero inertia.
  Eigen::MatrixXd pts(3, 2);
  pts << 0, 0, 5, 5, -3, 4;
  KMeansResult exact = kmeans(pts, 3, 4, 50, 1);
  CHECK(exact.inertia == doctest::Approx(0.0));

  // Two tight blobs: inertia equals the within-blob squared deviations.
  Eigen::MatrixXd blobs(6, 1);
  blobs << 0.0, 0.2, 0.4, 10.0, 10.2, 10.4;
  KMeansResult two = kmeans(blobs, 2, 8, 100, 3);
  // Each blob mean is its center; per blob: 0.2^2 + 0 + 0.2^2 = 0.08.
  CHECK(two.inertia == doctest::Approx(0.16).epsilon(1e-10));
  CHECK(two.labels[0] == two.labels[1]);
  CHECK(two.labels[1] == two.labels[2]);
  CHECK(two.labels[3] == two.labels[4]);
  CHECK(two.labels[0] != two.labels[3]);

  // Determinism.
  std::mt19937_64 rng(21);
  Eigen::MatrixXd cloud = oracle::random_matrix(40, 3, rng);
  KMeansResult a = kmeans(cloud, 4, 6, 60, 17);
  KMeansResult b = kmeans(cloud, 4, 6, 60, 17);
  CHECK(a.labels == b.labels);
  CHECK(a.inertia == b.inertia);

  CHECK_THROWS_AS(kmeans(pts, 5, 1, 10, 0), std::invalid_argument);
}

TEST_CASE("kmeans inertia is non-increasing within every run") {
  std::mt19937_64 rng(33);
  Eigen::MatrixXd cloud = oracle::random_matrix(60, 4, rng);
  KMeansResult result = kmeans(cloud, 5, 10, 80, 2);
  for (const auto& run : result.runs) {
    REQUIRE(!run.inertia_history.empty());
    for (size_t t = 1; t < run.inertia_history.size(); ++t)
      CHECK(run.inertia_history[t] <= run.inertia_history[t - 1] + 1e-12);
  }
}

TEST_CASE("similarity validation rejects broken inputs") {
  Eigen::MatrixXd negative = Eigen::MatrixXd::Zero(2, 2);
  negative(0, 1) = negative(1, 0) = -0.5;
  CHECK_THROWS_AS(validate_similarity(SimilarityMatrix{negative}), std::invalid_argument);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Zero(2, 2);
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(validate_similarity(SimilarityMatrix{asym}), std::invalid_argument);
}
