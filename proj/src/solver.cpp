#include "mvsc/solver.hpp"

#include "mvsc/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mvsc {

SolverCounters& solver_counters() {
  static SolverCounters counters;
  return counters;
}

void SolverConfig::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be > 0");
}

double soft_threshold(double x, double tau) {
  if (x > tau) return x - tau;
  if (x < -tau) return x + tau;
  return 0.0;
}

double sample_loss(const Eigen::MatrixXd& view, const Eigen::MatrixXd& z_v,
                   const Eigen::MatrixXd& z_star, double lambda, int j) {
  Eigen::Index n = view.cols();
  if (z_v.rows() != n || z_v.cols() != n || z_star.rows() != n || z_star.cols() != n)
    throw std::invalid_argument("sample_loss: representation shape mismatch");
  if (j < 0 || j >= n) throw std::invalid_argument("sample_loss: sample index out of range");
  double recon = (view.col(j) - view * z_v.col(j)).squaredNorm();
  double gap = (z_v.col(j) - z_star.col(j)).squaredNorm();
  return recon + lambda * gap;
}

Eigen::VectorXd column_losses(const Eigen::MatrixXd& view, const Eigen::MatrixXd& z_v,
                              const Eigen::MatrixXd& z_star, double lambda) {
  Eigen::Index n = view.cols();
  if (z_v.rows() != n || z_v.cols() != n || z_star.rows() != n || z_star.cols() != n)
    throw std::invalid_argument("column_losses: representation shape mismatch");
  Eigen::VectorXd recon = (view - view * z_v).colwise().squaredNorm().transpose();
  Eigen::VectorXd gap = (z_v - z_star).colwise().squaredNorm().transpose();
  return recon + lambda * gap;
}

WeightMatrix update_weights(const MultiViewDataset& ds, const RepresentationSet& reps,
                            const SolverConfig& cfg) {
  int m = ds.n_views();
  int n = ds.n_samples();
  if (static_cast<int>(reps.per_view.size()) != m)
    throw std::invalid_argument("update_weights: per-view representation count mismatch");
  WeightRegularizer reg(cfg.gamma);
  Eigen::MatrixXd weights(m, n);
  for (int v = 0; v < m; ++v) {
    Eigen::VectorXd losses = column_losses(ds.view(v), reps.per_view[v], reps.consensus,
                                           cfg.lambda);
    for (int j = 0; j < n; ++j) weights(v, j) = reg.minimizer(losses(j));
  }
  return WeightMatrix{std::move(weights)};
}

ViewUpdateContext::ViewUpdateContext(const Eigen::MatrixXd& view, double lambda)
    : lambda_(lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("ViewUpdateContext: lambda must be > 0");
  Eigen::Index n = view.cols();
  gram_ = view.transpose() * view;
  Eigen::MatrixXd reg = gram_ + lambda * Eigen::MatrixXd::Identity(n, n);
  Eigen::LLT<Eigen::MatrixXd> llt(reg);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("ViewUpdateContext: Gram + lambda*I is not positive definite");
  inverse_ = llt.solve(Eigen::MatrixXd::Identity(n, n));
  solver_counters().gram_factorizations.fetch_add(1, std::memory_order_relaxed);
}

Eigen::MatrixXd ViewUpdateContext::update(const Eigen::MatrixXd& z_star) const {
  Eigen::Index n = gram_.rows();
  if (z_star.rows() != n || z_star.cols() != n)
    throw std::invalid_argument("ViewUpdateContext: consensus shape mismatch");
  Eigen::MatrixXd target = gram_ + lambda_ * z_star;
  Eigen::MatrixXd z = inverse_ * target;
  // The multiplier that re-zeros the diagonal: y_i/2 = (M B)_ii / M_ii.
  if (inverse_.diagonal().minCoeff() <= 0.0)
    throw std::runtime_error("ViewUpdateContext: singular diagonal in cached inverse");
  Eigen::VectorXd y_half = z.diagonal().cwiseQuotient(inverse_.diagonal());
  z -= inverse_ * y_half.asDiagonal();
  return z;
}

Eigen::MatrixXd update_view_representation(const Eigen::MatrixXd& view,
                                           const Eigen::MatrixXd& z_star, double lambda) {
  return ViewUpdateContext(view, lambda).update(z_star);
}

Eigen::MatrixXd update_consensus(const std::vector<Eigen::MatrixXd>& reps_per_view,
                                 const WeightMatrix& weights, double lambda, double beta) {
  if (reps_per_view.empty()) throw std::invalid_argument("update_consensus: no views");
  if (!(lambda > 0.0)) throw std::invalid_argument("update_consensus: lambda must be > 0");
  Eigen::Index n = reps_per_view.front().rows();
  int m = static_cast<int>(reps_per_view.size());
  if (weights.weights.rows() != m || weights.weights.cols() != n)
    throw std::invalid_argument("update_consensus: weight shape mismatch");
  Eigen::MatrixXd weighted_sum = Eigen::MatrixXd::Zero(n, n);
  for (int v = 0; v < m; ++v) {
    if (reps_per_view[v].rows() != n || reps_per_view[v].cols() != n)
      throw std::invalid_argument("update_consensus: representation shape mismatch");
    weighted_sum += reps_per_view[v] * weights.weights.row(v).asDiagonal();
  }
  Eigen::VectorXd col_weight = weights.weights.colwise().sum().transpose();
  if (col_weight.minCoeff() <= 0.0)
    throw std::runtime_error("update_consensus: column weight sum is not positive");
  double tau = beta / (2.0 * lambda);
  Eigen::MatrixXd z_star(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      z_star(i, j) = soft_threshold(weighted_sum(i, j), tau) / col_weight(j);
  return z_star;
}

double objective(const MultiViewDataset& ds, const RepresentationSet& reps,
                 const WeightMatrix& weights, const SolverConfig& cfg) {
  int m = ds.n_views();
  int n = ds.n_samples();
  if (weights.weights.rows() != m || weights.weights.cols() != n)
    throw std::invalid_argument("objective: weight shape mismatch");
  WeightRegularizer reg(cfg.gamma);
  double total = 0.0;
  for (int v = 0; v < m; ++v) {
    Eigen::VectorXd losses = column_losses(ds.view(v), reps.per_view[v], reps.consensus,
                                           cfg.lambda);
    for (int j = 0; j < n; ++j)
      total += weights.weights(v, j) * losses(j) + reg.psi(weights.weights(v, j));
  }
  return total + cfg.beta * reps.consensus.cwiseAbs().sum();
}

double objective_view_weighted(const MultiViewDataset& ds, const RepresentationSet& reps,
                               const ViewWeightVector& weights, const SolverConfig& cfg) {
  int m = ds.n_views();
  if (weights.weights.size() != m)
    throw std::invalid_argument("objective_view_weighted: weight size mismatch");
  WeightRegularizer reg(cfg.gamma);
  double total = 0.0;
  for (int v = 0; v < m; ++v) {
    double view_loss = column_losses(ds.view(v), reps.per_view[v], reps.consensus,
                                     cfg.lambda).sum();
    total += weights.weights(v) * view_loss + reg.psi(weights.weights(v));
  }
  return total + cfg.beta * reps.consensus.cwiseAbs().sum();
}

namespace {

RepresentationSet initialize_representations(const std::vector<ViewUpdateContext>& contexts,
                                             int n, InitPolicy policy) {
  RepresentationSet reps;
  reps.consensus = Eigen::MatrixXd::Zero(n, n);
  for (const auto& ctx : contexts) {
    if (policy == InitPolicy::RidgeZeroConsensus)
      reps.per_view.push_back(ctx.update(reps.consensus));
    else
      reps.per_view.push_back(Eigen::MatrixXd::Zero(n, n));
  }
  return reps;
}

bool relative_change_below(double prev, double curr, double tol) {
  return std::abs(prev - curr) / std::max(1.0, std::abs(prev)) < tol;
}

}  // namespace

RmscResult fit_rmsc(const MultiViewDataset& ds, const SolverConfig& cfg) {
  cfg.validate();
  int m = ds.n_views();
  int n = ds.n_samples();

  std::vector<ViewUpdateContext> contexts;
  contexts.reserve(m);
  for (int v = 0; v < m; ++v) contexts.emplace_back(ds.view(v), cfg.lambda);

  RepresentationSet reps = initialize_representations(contexts, n, cfg.init_policy);
  WeightMatrix weights{Eigen::MatrixXd::Ones(m, n)};

  SolverTrace trace;
  double prev = objective(ds, reps, weights, cfg);
  for (int t = 0; t < cfg.max_iters; ++t) {
    reps.consensus = update_consensus(reps.per_view, weights, cfg.lambda, cfg.beta);
    weights = update_weights(ds, reps, cfg);
    for (int v = 0; v < m; ++v) reps.per_view[v] = contexts[v].update(reps.consensus);

    double value = objective(ds, reps, weights, cfg);
    trace.objective_values.push_back(value);
    trace.iterations_run = t + 1;
    if (relative_change_below(prev, value, cfg.rel_tol)) {
      trace.converged = true;
      break;
    }
    prev = value;
  }
  return RmscResult{std::move(reps), std::move(weights), std::move(trace)};
}

RmscWvResult fit_rmsc_wv(const MultiViewDataset& ds, const SolverConfig& cfg) {
  cfg.validate();
  int m = ds.n_views();
  int n = ds.n_samples();
  WeightRegularizer reg(cfg.gamma);

  std::vector<ViewUpdateContext> contexts;
  contexts.reserve(m);
  for (int v = 0; v < m; ++v) contexts.emplace_back(ds.view(v), cfg.lambda);

  RepresentationSet reps = initialize_representations(contexts, n, cfg.init_policy);
  ViewWeightVector weights{Eigen::VectorXd::Ones(m)};

  auto broadcast = [n](const Eigen::VectorXd& p) {
    return WeightMatrix{p * Eigen::RowVectorXd::Ones(n)};
  };

  SolverTrace trace;
  double prev = objective_view_weighted(ds, reps, weights, cfg);
  for (int t = 0; t < cfg.max_iters; ++t) {
    reps.consensus = update_consensus(reps.per_view, broadcast(weights.weights), cfg.lambda,
                                      cfg.beta);
    for (int v = 0; v < m; ++v) {
      double view_loss = column_losses(ds.view(v), reps.per_view[v], reps.consensus,
                                       cfg.lambda).sum();
      weights.weights(v) = reg.minimizer(view_loss);
    }
    for (int v = 0; v < m; ++v) reps.per_view[v] = contexts[v].update(reps.consensus);

    double value = objective_view_weighted(ds, reps, weights, cfg);
    trace.objective_values.push_back(value);
    trace.iterations_run = t + 1;
    if (relative_change_below(prev, value, cfg.rel_tol)) {
      trace.converged = true;
      break;
    }
    prev = value;
  }
  return RmscWvResult{std::move(reps), std::move(weights), std::move(trace)};
}

Eigen::MatrixXd fit_ssc_single(const Eigen::MatrixXd& view, double beta, int max_iters,
                               double rel_tol) {
  if (!view.allFinite()) throw std::invalid_argument("fit_ssc_single: non-finite entries");
  if (!(beta >= 0.0)) throw std::invalid_argument("fit_ssc_single: beta must be >= 0");
  if (max_iters < 1) throw std::invalid_argument("fit_ssc_single: max_iters must be >= 1");
  Eigen::Index n = view.cols();
  Eigen::MatrixXd gram = view.transpose() * view;
  double lipschitz =
      2.0 * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram, Eigen::EigenvaluesOnly)
                .eigenvalues()
                .maxCoeff();
  if (lipschitz <= 0.0) return Eigen::MatrixXd::Zero(n, n);

  auto value = [&](const Eigen::MatrixXd& z) {
    return (view - view * z).squaredNorm() + beta * z.cwiseAbs().sum();
  };

  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd extrapolated = z;
  double momentum = 1.0;
  double prev = value(z);
  double tau = beta / lipschitz;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::MatrixXd gradient = 2.0 * (gram * extrapolated - gram);
    Eigen::MatrixXd candidate = extrapolated - gradient / lipschitz;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        candidate(i, j) = soft_threshold(candidate(i, j), tau);
    candidate.diagonal().setZero();

    double curr = value(candidate);
    if (curr > prev) {
      // Function-value restart keeps the accelerated scheme descending.
      momentum = 1.0;
      extrapolated = candidate;
    } else {
      double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      extrapolated = candidate + ((momentum - 1.0) / next_momentum) * (candidate - z);
      momentum = next_momentum;
    }
    z = candidate;
    if (relative_change_below(prev, curr, rel_tol) && curr <= prev) break;
    prev = std::min(prev, curr);
  }
  return z;
}

Eigen::MatrixXd naive_average_similarity(const std::vector<Eigen::MatrixXd>& reps_per_view) {
  if (reps_per_view.empty()) throw std::invalid_argument("naive_average_similarity: no views");
  Eigen::Index n = reps_per_view.front().rows();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  for (const auto& z : reps_per_view) {
    if (z.rows() != n || z.cols() != n)
      throw std::invalid_argument("naive_average_similarity: shape mismatch");
    sum += 0.5 * (z.cwiseAbs() + z.transpose().cwiseAbs());
  }
  return sum / static_cast<double>(reps_per_view.size());
}

}  // namespace mvsc
