#include "mvsc/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

struct FitArgs {
  std::string manifest;
  std::string out;
  std::string method = "RMSC";
  std::string config;
  std::string init_policy;
  double lambda = 0, beta = 0, gamma = 0, rel_tol = 0, sigma = 0, ssc_rel_tol = 0;
  int max_iters = 0, restarts = 0, kmeans_max_iters = 0, knn_k = 0, clusters = 0,
      ssc_max_iters = 0;
  std::uint64_t seed = 0;
  bool no_normalize = false;

  CLI::Option *lambda_opt = nullptr, *beta_opt = nullptr, *gamma_opt = nullptr,
              *max_iters_opt = nullptr, *rel_tol_opt = nullptr, *init_policy_opt = nullptr,
              *seed_opt = nullptr, *restarts_opt = nullptr, *kmeans_max_iters_opt = nullptr,
              *knn_k_opt = nullptr, *sigma_opt = nullptr, *clusters_opt = nullptr,
              *method_opt = nullptr, *ssc_max_iters_opt = nullptr, *ssc_rel_tol_opt = nullptr;
};

void add_fit_options(CLI::App* sub, FitArgs& args) {
  sub->add_option("--manifest", args.manifest, "Dataset manifest JSON")->required();
  sub->add_option("--out", args.out, "Output directory")->required();
  args.method_opt = sub->add_option("--method", args.method,
                                    "RMSC, RMSC-WV, SSC-BSV, SSC-AVG or SC-BSV");
  sub->add_option("--config", args.config, "JSON config file (flags override it)");
  args.lambda_opt = sub->add_option("--lambda", args.lambda, "Consensus coupling weight");
  args.beta_opt = sub->add_option("--beta", args.beta, "Sparsity weight");
  args.gamma_opt = sub->add_option("--gamma", args.gamma, "Weight regularizer parameter");
  args.max_iters_opt = sub->add_option("--max-iters", args.max_iters, "Solver iteration cap");
  args.rel_tol_opt = sub->add_option("--rel-tol", args.rel_tol, "Relative objective tolerance");
  args.init_policy_opt =
      sub->add_option("--init-policy", args.init_policy, "ridge (default) or zero");
  args.seed_opt = sub->add_option("--seed", args.seed, "Master random seed");
  args.restarts_opt = sub->add_option("--restarts", args.restarts, "k-means restarts");
  args.kmeans_max_iters_opt =
      sub->add_option("--kmeans-max-iters", args.kmeans_max_iters, "Lloyd iteration cap");
  args.knn_k_opt = sub->add_option("--knn-k", args.knn_k, "Neighbors for the Gaussian graph");
  args.sigma_opt = sub->add_option("--sigma", args.sigma,
                                   "Fixed Gaussian bandwidth (default: median pairwise)");
  args.clusters_opt = sub->add_option("--clusters", args.clusters, "Cluster count override");
  args.ssc_max_iters_opt =
      sub->add_option("--ssc-max-iters", args.ssc_max_iters, "SSC baseline iteration cap");
  args.ssc_rel_tol_opt =
      sub->add_option("--ssc-rel-tol", args.ssc_rel_tol, "SSC baseline tolerance");
  sub->add_flag("--no-normalize", args.no_normalize, "Skip unit-L2 column normalization");
}

mvsc::ExperimentConfig build_config(const FitArgs& args) {
  mvsc::ExperimentConfig cfg;
  cfg.spectral.n_clusters = 0;  // resolved from the dataset unless overridden
  if (!args.config.empty()) mvsc::apply_config_file(cfg, args.config);
  if (args.method_opt->count()) cfg.method = mvsc::parse_method(args.method);
  if (args.lambda_opt->count()) cfg.solver.lambda = args.lambda;
  if (args.beta_opt->count()) cfg.solver.beta = args.beta;
  if (args.gamma_opt->count()) cfg.solver.gamma = args.gamma;
  if (args.max_iters_opt->count()) cfg.solver.max_iters = args.max_iters;
  if (args.rel_tol_opt->count()) cfg.solver.rel_tol = args.rel_tol;
  if (args.init_policy_opt->count())
    cfg.solver.init_policy = args.init_policy == "zero" ? mvsc::InitPolicy::ZeroMatrices
                                                        : mvsc::InitPolicy::RidgeZeroConsensus;
  if (args.seed_opt->count()) cfg.spectral.seed = args.seed;
  if (args.restarts_opt->count()) cfg.spectral.kmeans_restarts = args.restarts;
  if (args.kmeans_max_iters_opt->count())
    cfg.spectral.kmeans_max_iters = args.kmeans_max_iters;
  if (args.knn_k_opt->count()) cfg.spectral.knn_k = args.knn_k;
  if (args.sigma_opt->count()) {
    cfg.spectral.sigma_policy = mvsc::SigmaPolicy::Fixed;
    cfg.spectral.fixed_sigma = args.sigma;
  }
  if (args.clusters_opt->count()) cfg.spectral.n_clusters = args.clusters;
  if (args.ssc_max_iters_opt->count()) cfg.ssc_max_iters = args.ssc_max_iters;
  if (args.ssc_rel_tol_opt->count()) cfg.ssc_rel_tol = args.ssc_rel_tol;
  if (args.no_normalize) cfg.normalize = false;
  cfg.dataset_manifest = args.manifest;
  cfg.output_dir = args.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-view subspace clustering experiments"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate a synthetic multi-view dataset");
  mvsc::SyntheticSpec spec;
  std::string gen_out;
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--clusters", spec.n_clusters, "Cluster count");
  gen->add_option("--per-cluster", spec.samples_per_cluster, "Samples per cluster");
  gen->add_option("--subspace-dim", spec.subspace_dim, "Subspace dimension per cluster");
  gen->add_option("--dims", spec.ambient_dims, "Ambient dimension per view")->delimiter(',');
  gen->add_option("--noise", spec.noise_sigma, "Additive Gaussian noise std");
  gen->add_option("--outlier-fraction", spec.outlier_fraction, "Fraction of corrupted columns");
  gen->add_option("--outlier-views", spec.outlier_views, "View indices receiving outliers")
      ->delimiter(',');
  gen->add_option("--seed", spec.seed, "Random seed");

  auto* fit = app.add_subcommand("fit", "Fit one method and report clustering metrics");
  FitArgs fit_args;
  add_fit_options(fit, fit_args);

  auto* sweep = app.add_subcommand("sweep", "Grid sweep over (lambda, beta)");
  FitArgs sweep_args;
  add_fit_options(sweep, sweep_args);
  std::vector<double> lambda_grid, beta_grid;
  sweep->add_option("--lambda-grid", lambda_grid, "Lambda values")->delimiter(',')->required();
  sweep->add_option("--beta-grid", beta_grid, "Beta values")->delimiter(',')->required();

  auto* trace = app.add_subcommand("trace", "Write the per-iteration objective");
  FitArgs trace_args;
  add_fit_options(trace, trace_args);

  auto* weights = app.add_subcommand("weights", "Write the learned weight matrix");
  FitArgs weights_args;
  add_fit_options(weights, weights_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      mvsc::cmd_gen(spec, gen_out);
    } else if (fit->parsed()) {
      mvsc::cmd_fit(build_config(fit_args));
    } else if (sweep->parsed()) {
      mvsc::cmd_sweep(build_config(sweep_args), lambda_grid, beta_grid);
    } else if (trace->parsed()) {
      mvsc::cmd_trace(build_config(trace_args));
    } else if (weights->parsed()) {
      mvsc::cmd_weights(build_config(weights_args));
    }
  } catch (const mvsc::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
