#include "mvsc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace mvsc {

void validate_similarity(const SimilarityMatrix& sim) {
  const Eigen::MatrixXd& s = sim.s;
  if (s.rows() != s.cols()) throw std::invalid_argument("similarity matrix must be square");
  if (!s.allFinite()) throw std::invalid_argument("similarity matrix has non-finite entries");
  if (s.minCoeff() < 0.0) throw std::invalid_argument("similarity matrix has negative entries");
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("similarity matrix is not symmetric");
}

SimilarityMatrix similarity_from_representation(const Eigen::MatrixXd& z) {
  if (z.rows() != z.cols())
    throw std::invalid_argument("similarity_from_representation: matrix must be square");
  if (!z.allFinite())
    throw std::invalid_argument("similarity_from_representation: non-finite entries");
  Eigen::MatrixXd abs = z.cwiseAbs();
  return SimilarityMatrix{0.5 * (abs + abs.transpose())};
}

SimilarityMatrix gaussian_knn_graph(const Eigen::MatrixXd& view, const SpectralConfig& cfg) {
  Eigen::Index n = view.cols();
  if (cfg.knn_k < 1 || cfg.knn_k >= n)
    throw std::invalid_argument("gaussian_knn_graph: need 1 <= knn_k < n");

  Eigen::MatrixXd dist2(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    dist2(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double d2 = (view.col(i) - view.col(j)).squaredNorm();
      dist2(i, j) = d2;
      dist2(j, i) = d2;
    }
  }

  double sigma;
  if (cfg.sigma_policy == SigmaPolicy::Fixed) {
    if (!(cfg.fixed_sigma > 0.0))
      throw std::invalid_argument("gaussian_knn_graph: fixed sigma must be > 0");
    sigma = cfg.fixed_sigma;
  } else {
    std::vector<double> pairwise;
    pairwise.reserve(n * (n - 1) / 2);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) pairwise.push_back(std::sqrt(dist2(i, j)));
    std::nth_element(pairwise.begin(), pairwise.begin() + pairwise.size() / 2, pairwise.end());
    sigma = pairwise[pairwise.size() / 2];
    if (sigma == 0.0)
      throw std::invalid_argument(
          "gaussian_knn_graph: median pairwise distance is zero (duplicate points); "
          "use SigmaPolicy::Fixed");
  }

  // Mutual-OR symmetrization of the k-nearest-neighbor relation.
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index count = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) order[count++] = j;
    std::sort(order.begin(), order.begin() + count, [&](Eigen::Index a, Eigen::Index b) {
      return dist2(i, a) != dist2(i, b) ? dist2(i, a) < dist2(i, b) : a < b;
    });
    for (int t = 0; t < cfg.knn_k; ++t) {
      Eigen::Index j = order[t];
      double value = std::exp(-dist2(i, j) / (2.0 * sigma * sigma));
      w(i, j) = value;
      w(j, i) = value;
    }
  }
  w.diagonal().setZero();
  return SimilarityMatrix{std::move(w)};
}

Eigen::MatrixXd normalized_laplacian(const SimilarityMatrix& sim) {
  validate_similarity(sim);
  const Eigen::MatrixXd& s = sim.s;
  Eigen::Index n = s.rows();
  Eigen::VectorXd degree = s.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i)
    if (degree(i) <= 0.0) degree(i) = 1e-12;
  Eigen::VectorXd scale = degree.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(n, n) -
                        scale.asDiagonal() * s * scale.asDiagonal();
  // S is symmetric, so the scaled form is too; symmetrize away rounding.
  return 0.5 * (lap + lap.transpose());
}

Eigen::MatrixXd spectral_embedding(const SimilarityMatrix& s, int n_clusters) {
  Eigen::Index n = s.s.rows();
  if (n_clusters < 1 || n_clusters > n)
    throw std::invalid_argument("spectral_embedding: need 1 <= n_clusters <= n");
  Eigen::MatrixXd lap = normalized_laplacian(s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("spectral_embedding: eigendecomposition failed");
  // Eigenvalues come sorted ascending; keep the first n_clusters vectors.
  Eigen::MatrixXd embedding = solver.eigenvectors().leftCols(n_clusters);
  for (Eigen::Index i = 0; i < n; ++i) {
    double norm = embedding.row(i).norm();
    if (norm > 0.0) embedding.row(i) /= norm;
  }
  return embedding;
}

namespace {

// Squared distances from every point (row) to one center.
Eigen::VectorXd center_distances(const Eigen::MatrixXd& points, const Eigen::RowVectorXd& center) {
  return (points.rowwise() - center).rowwise().squaredNorm();
}

KMeansRun lloyd_run(const Eigen::MatrixXd& points, int c, int max_iters, std::mt19937_64& rng) {
  Eigen::Index n = points.rows();
  Eigen::Index dim = points.cols();

  // k-means++ seeding.
  Eigen::MatrixXd centers(c, dim);
  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  centers.row(0) = points.row(first(rng));
  Eigen::VectorXd closest = center_distances(points, centers.row(0));
  for (int k = 1; k < c; ++k) {
    double total = closest.sum();
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      double target = unit(rng) * total;
      double cumulative = 0.0;
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        cumulative += closest(i);
        if (cumulative >= target) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = first(rng);
    }
    centers.row(k) = points.row(chosen);
    closest = closest.cwiseMin(center_distances(points, centers.row(k)));
  }

  KMeansRun run;
  run.labels.assign(n, 0);
  Eigen::VectorXd point_dist(n);
  for (int iter = 0; iter < max_iters; ++iter) {
    // Assignment step.
    bool changed = false;
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (points.row(i) - centers.row(0)).squaredNorm();
      for (int k = 1; k < c; ++k) {
        double d = (points.row(i) - centers.row(k)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      if (run.labels[i] != best) {
        run.labels[i] = best;
        changed = true;
      }
      point_dist(i) = best_d;
      inertia += best_d;
    }
    run.inertia = inertia;
    run.inertia_history.push_back(inertia);
    if (!changed && iter > 0) break;

    // Update step; empty clusters are re-seeded from the farthest point.
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(c, dim);
    std::vector<int> counts(c, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(run.labels[i]) += points.row(i);
      ++counts[run.labels[i]];
    }
    for (int k = 0; k < c; ++k) {
      if (counts[k] > 0) {
        centers.row(k) = sums.row(k) / counts[k];
      } else {
        Eigen::Index farthest;
        point_dist.maxCoeff(&farthest);
        centers.row(k) = points.row(farthest);
        point_dist(farthest) = 0.0;
      }
    }
  }
  return run;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int c, int restarts, int max_iters,
                    std::uint64_t seed) {
  Eigen::Index n = points.rows();
  if (c < 1 || c > n) throw std::invalid_argument("kmeans: need 1 <= c <= n points");
  if (restarts < 1 || max_iters < 1)
    throw std::invalid_argument("kmeans: restarts and max_iters must be >= 1");
  if (!points.allFinite()) throw std::invalid_argument("kmeans: non-finite points");

  KMeansResult result;
  result.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(r));
    KMeansRun run = lloyd_run(points, c, max_iters, rng);
    if (run.inertia < result.inertia) {
      result.inertia = run.inertia;
      result.labels = run.labels;
      result.best_restart = r;
    }
    result.runs.push_back(std::move(run));
  }
  return result;
}

SpectralResult spectral_cluster_detailed(const SimilarityMatrix& s, const SpectralConfig& cfg) {
  if (cfg.n_clusters < 2)
    throw std::invalid_argument("spectral_cluster: need at least two clusters");
  SpectralResult result;
  result.embedding = spectral_embedding(s, cfg.n_clusters);
  result.kmeans = kmeans(result.embedding, cfg.n_clusters, cfg.kmeans_restarts,
                         cfg.kmeans_max_iters, cfg.seed);
  result.labels = result.kmeans.labels;
  return result;
}

std::vector<int> spectral_cluster(const SimilarityMatrix& s, const SpectralConfig& cfg) {
  return spectral_cluster_detailed(s, cfg).labels;
}

}  // namespace mvsc
