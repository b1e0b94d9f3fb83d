#pragma once

#include "mvsc/dataset.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <vector>

namespace mvsc {

enum class InitPolicy {
  RidgeZeroConsensus,  // one Z^v-step with Z* = 0 (default)
  ZeroMatrices,
};

struct SolverConfig {
  double lambda = 1.0;
  double beta = 0.01;
  double gamma = 1e-5;
  int max_iters = 50;
  double rel_tol = 1e-6;
  InitPolicy init_policy = InitPolicy::RidgeZeroConsensus;

  void validate() const;  // throws std::invalid_argument
};

/// The m per-view self-representations plus the consensus, all n x n with
/// zero diagonals.
struct RepresentationSet {
  std::vector<Eigen::MatrixXd> per_view;
  Eigen::MatrixXd consensus;
};

/// m x n nonnegative per-sample-per-view confidence weights.
struct WeightMatrix {
  Eigen::MatrixXd weights;
};

/// Length-m per-view confidence weights for the view-weighted variant.
struct ViewWeightVector {
  Eigen::VectorXd weights;
};

struct SolverTrace {
  std::vector<double> objective_values;  // one entry per full iteration
  int iterations_run = 0;
  bool converged = false;
};

/// Global instrumentation; tests assert the Gram matrix and its inverse are
/// factored exactly once per (view, lambda) within a fit.
struct SolverCounters {
  std::atomic<long> gram_factorizations{0};
  void reset() { gram_factorizations = 0; }
};
SolverCounters& solver_counters();

double soft_threshold(double x, double tau);

/// Per-sample loss l_vj = ||x_j - X z_j||^2 + lambda * ||z_j - z*_j||^2.
double sample_loss(const Eigen::MatrixXd& view, const Eigen::MatrixXd& z_v,
                   const Eigen::MatrixXd& z_star, double lambda, int j);

/// All n per-sample losses of one view at once.
Eigen::VectorXd column_losses(const Eigen::MatrixXd& view, const Eigen::MatrixXd& z_v,
                              const Eigen::MatrixXd& z_star, double lambda);

/// P_vj = 1 / sqrt(gamma + l_vj) for every view and sample.
WeightMatrix update_weights(const MultiViewDataset& ds, const RepresentationSet& reps,
                            const SolverConfig& cfg);

/**
 * @brief Closed-form minimizer of ||X - X Z||_F^2 + lambda ||Z - Z*||_F^2
 *        subject to diag(Z) = 0, reusable across consensus targets.
 *
 * The Gram matrix G = X^T X and the inverse M = (G + lambda I)^{-1} are
 * factored once at construction; update() only performs matrix products.
 * G + lambda I is symmetric positive definite for lambda > 0, so the inverse
 * is computed through an LLT factorization.
 */
class ViewUpdateContext {
 public:
  ViewUpdateContext(const Eigen::MatrixXd& view, double lambda);

  Eigen::MatrixXd update(const Eigen::MatrixXd& z_star) const;
  const Eigen::MatrixXd& gram() const { return gram_; }

 private:
  double lambda_;
  Eigen::MatrixXd gram_;     // X^T X
  Eigen::MatrixXd inverse_;  // (X^T X + lambda I)^{-1}
};

/// One-shot form of ViewUpdateContext::update.
Eigen::MatrixXd update_view_representation(const Eigen::MatrixXd& view,
                                           const Eigen::MatrixXd& z_star, double lambda);

/// Entrywise closed form of the consensus step:
/// Z*_ij = soft_threshold(sum_v P_vj Z^v_ij, beta/(2 lambda)) / sum_v P_vj.
Eigen::MatrixXd update_consensus(const std::vector<Eigen::MatrixXd>& reps_per_view,
                                 const WeightMatrix& weights, double lambda, double beta);

/// Full objective: sum_vj [P_vj * l_vj + psi(P_vj)] + beta * ||Z*||_1.
double objective(const MultiViewDataset& ds, const RepresentationSet& reps,
                 const WeightMatrix& weights, const SolverConfig& cfg);

/// View-weighted objective: sum_v [p_v * L_v + psi(p_v)] + beta * ||Z*||_1
/// with L_v the whole-view loss.
double objective_view_weighted(const MultiViewDataset& ds, const RepresentationSet& reps,
                               const ViewWeightVector& weights, const SolverConfig& cfg);

struct RmscResult {
  RepresentationSet reps;
  WeightMatrix weights;
  SolverTrace trace;
};

struct RmscWvResult {
  RepresentationSet reps;
  ViewWeightVector weights;
  SolverTrace trace;
};

/// Block coordinate descent on the weighted multi-view objective. Weights
/// start at all ones, Z^v per cfg.init_policy; each iteration runs the
/// consensus step, the weight step and the per-view representation steps in
/// that order. The recorded objective sequence is non-increasing.
RmscResult fit_rmsc(const MultiViewDataset& ds, const SolverConfig& cfg);

/// Variant with a single weight per view: p_v = 1 / sqrt(gamma + L_v).
RmscWvResult fit_rmsc_wv(const MultiViewDataset& ds, const SolverConfig& cfg);

/// Single-view sparse self-representation baseline,
/// min ||X - X Z||_F^2 + beta ||Z||_1 with diag(Z) = 0, solved by accelerated
/// proximal gradient (soft-threshold by beta/L, then re-zero the diagonal).
Eigen::MatrixXd fit_ssc_single(const Eigen::MatrixXd& view, double beta, int max_iters = 2000,
                               double rel_tol = 1e-8);

/// S = (1/m) * sum_v (|Z^v| + |Z^v^T|) / 2.
Eigen::MatrixXd naive_average_similarity(const std::vector<Eigen::MatrixXd>& reps_per_view);

}  // namespace mvsc
