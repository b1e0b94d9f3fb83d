#include "mvsc/cli.hpp"

#include "mvsc/csv.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>

namespace mvsc {

namespace {

std::string init_policy_name(InitPolicy policy) {
  return policy == InitPolicy::RidgeZeroConsensus ? "ridge_zero_consensus" : "zero_matrices";
}

InitPolicy parse_init_policy(const std::string& name) {
  if (name == "ridge_zero_consensus" || name == "ridge") return InitPolicy::RidgeZeroConsensus;
  if (name == "zero_matrices" || name == "zero") return InitPolicy::ZeroMatrices;
  throw ValidationError("unknown init policy '" + name + "'");
}

MultiViewDataset load_input_dataset(const ExperimentConfig& cfg) {
  try {
    return load_dataset(cfg.dataset_manifest);
  } catch (const std::exception& e) {
    throw ValidationError(e.what());
  }
}

void ensure_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output dir " + dir.string() + ": " + ec.message());
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path.string());
  return out;
}

SpectralConfig resolve_spectral(const ExperimentConfig& cfg, const MultiViewDataset& ds) {
  SpectralConfig spectral = cfg.spectral;
  if (spectral.n_clusters == 0) {
    if (!ds.n_clusters())
      throw ValidationError("cluster count not given by --clusters, config or dataset manifest");
    spectral.n_clusters = *ds.n_clusters();
  }
  return spectral;
}

WeightSummary summarize_weights(const Eigen::MatrixXd& weights, int top) {
  WeightSummary summary;
  for (Eigen::Index v = 0; v < weights.rows(); ++v)
    summary.per_view_mean_weight.push_back(weights.row(v).mean());
  std::vector<WeightSummary::Entry> entries;
  for (Eigen::Index v = 0; v < weights.rows(); ++v)
    for (Eigen::Index j = 0; j < weights.cols(); ++j)
      entries.push_back({static_cast<int>(v), static_cast<int>(j), weights(v, j)});
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    return std::tie(a.view, a.sample) < std::tie(b.view, b.sample);
  });
  if (static_cast<int>(entries.size()) > top) entries.resize(top);
  summary.lowest_weight_samples = std::move(entries);
  return summary;
}

std::optional<ClusterEvaluation> evaluate(const KMeansResult& km, const MultiViewDataset& ds) {
  if (!ds.labels()) return std::nullopt;
  std::vector<std::vector<int>> run_labels;
  run_labels.reserve(km.runs.size());
  for (const auto& run : km.runs) run_labels.push_back(run.labels);
  return ClusterEvaluation::from_runs(run_labels, km.best_restart, *ds.labels());
}

// Clusters every view independently and fills the per-view reports; selects
// the best view by mean accuracy when labels are available.
void run_best_single_view(const MultiViewDataset& data, const SpectralConfig& spectral,
                          const std::vector<SimilarityMatrix>& sims, RunReport& report) {
  int best = -1;
  double best_acc = -1.0;
  std::vector<SpectralResult> results;
  for (int v = 0; v < data.n_views(); ++v) {
    results.push_back(spectral_cluster_detailed(sims[v], spectral));
    ViewReport view_report;
    view_report.name = data.view_names()[v];
    view_report.evaluation = evaluate(results.back().kmeans, data);
    if (view_report.evaluation && view_report.evaluation->mean_accuracy > best_acc) {
      best_acc = view_report.evaluation->mean_accuracy;
      best = v;
    }
    report.views.push_back(std::move(view_report));
  }
  if (best >= 0) {
    report.best_view = data.view_names()[best];
    report.labels = results[best].labels;
    report.evaluation = report.views[best].evaluation;
  }
}

nlohmann::json evaluation_to_json(const ClusterEvaluation& eval) {
  return {{"accuracy", eval.accuracy},
          {"nmi", eval.nmi},
          {"per_run_accuracy", eval.per_run_accuracy},
          {"per_run_nmi", eval.per_run_nmi},
          {"mean_accuracy", eval.mean_accuracy},
          {"std_accuracy", eval.std_accuracy},
          {"mean_nmi", eval.mean_nmi},
          {"std_nmi", eval.std_nmi}};
}

}  // namespace

std::string method_name(Method method) {
  switch (method) {
    case Method::Rmsc: return "RMSC";
    case Method::RmscWv: return "RMSC-WV";
    case Method::SscBsv: return "SSC-BSV";
    case Method::SscAvg: return "SSC-AVG";
    case Method::ScBsv: return "SC-BSV";
  }
  throw std::logic_error("unreachable");
}

Method parse_method(const std::string& name) {
  std::string up = name;
  std::transform(up.begin(), up.end(), up.begin(), ::toupper);
  std::replace(up.begin(), up.end(), '_', '-');
  if (up == "RMSC") return Method::Rmsc;
  if (up == "RMSC-WV") return Method::RmscWv;
  if (up == "SSC-BSV") return Method::SscBsv;
  if (up == "SSC-AVG") return Method::SscAvg;
  if (up == "SC-BSV") return Method::ScBsv;
  throw ValidationError("unknown method '" + name +
                        "' (expected RMSC, RMSC-WV, SSC-BSV, SSC-AVG or SC-BSV)");
}

void ExperimentConfig::validate() const {
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  if (spectral.n_clusters < 0 || spectral.n_clusters == 1)
    throw ValidationError("n_clusters must be 0 (use dataset value) or >= 2");
  if (spectral.kmeans_restarts < 1) throw ValidationError("kmeans_restarts must be >= 1");
  if (spectral.kmeans_max_iters < 1) throw ValidationError("kmeans_max_iters must be >= 1");
  if (spectral.knn_k < 1) throw ValidationError("knn_k must be >= 1");
  if (spectral.sigma_policy == SigmaPolicy::Fixed && !(spectral.fixed_sigma > 0.0))
    throw ValidationError("fixed sigma must be > 0");
  if (ssc_max_iters < 1) throw ValidationError("ssc_max_iters must be >= 1");
  if (!(ssc_rel_tol > 0.0)) throw ValidationError("ssc_rel_tol must be > 0");
}

void apply_config_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path.string());
  nlohmann::json config;
  try {
    in >> config;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("invalid config JSON " + path.string() + ": " + e.what());
  }
  try {
    if (config.contains("method")) cfg.method = parse_method(config["method"].get<std::string>());
    if (config.contains("lambda")) cfg.solver.lambda = config["lambda"].get<double>();
    if (config.contains("beta")) cfg.solver.beta = config["beta"].get<double>();
    if (config.contains("gamma")) cfg.solver.gamma = config["gamma"].get<double>();
    if (config.contains("max_iters")) cfg.solver.max_iters = config["max_iters"].get<int>();
    if (config.contains("rel_tol")) cfg.solver.rel_tol = config["rel_tol"].get<double>();
    if (config.contains("init_policy"))
      cfg.solver.init_policy = parse_init_policy(config["init_policy"].get<std::string>());
    if (config.contains("seed")) cfg.spectral.seed = config["seed"].get<std::uint64_t>();
    if (config.contains("n_clusters")) cfg.spectral.n_clusters = config["n_clusters"].get<int>();
    if (config.contains("kmeans_restarts"))
      cfg.spectral.kmeans_restarts = config["kmeans_restarts"].get<int>();
    if (config.contains("kmeans_max_iters"))
      cfg.spectral.kmeans_max_iters = config["kmeans_max_iters"].get<int>();
    if (config.contains("knn_k")) cfg.spectral.knn_k = config["knn_k"].get<int>();
    if (config.contains("sigma")) {
      if (config["sigma"].is_string() && config["sigma"].get<std::string>() == "median") {
        cfg.spectral.sigma_policy = SigmaPolicy::MedianPairwise;
      } else {
        cfg.spectral.sigma_policy = SigmaPolicy::Fixed;
        cfg.spectral.fixed_sigma = config["sigma"].get<double>();
      }
    }
    if (config.contains("normalize")) cfg.normalize = config["normalize"].get<bool>();
    if (config.contains("ssc_max_iters")) cfg.ssc_max_iters = config["ssc_max_iters"].get<int>();
    if (config.contains("ssc_rel_tol")) cfg.ssc_rel_tol = config["ssc_rel_tol"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("bad value in config " + path.string() + ": " + e.what());
  }
}

RunReport run_experiment(const ExperimentConfig& cfg, const MultiViewDataset& ds) {
  cfg.validate();
  auto start = std::chrono::steady_clock::now();
  MultiViewDataset data = cfg.normalize ? normalize_unit_l2(ds) : ds;
  SpectralConfig spectral = resolve_spectral(cfg, data);

  RunReport report;
  report.method = method_name(cfg.method);
  report.config = cfg;
  report.config.spectral = spectral;
  report.dataset = DatasetSummary{cfg.dataset_manifest.string(), data.n_views(),
                                  data.n_samples(), data.n_clusters(),
                                  data.labels().has_value()};

  switch (cfg.method) {
    case Method::Rmsc: {
      RmscResult fit = fit_rmsc(data, cfg.solver);
      report.iterations = fit.trace.iterations_run;
      report.converged = fit.trace.converged;
      report.objective_trace = fit.trace.objective_values;
      report.weight_summary = summarize_weights(fit.weights.weights, 10);
      SpectralResult sc =
          spectral_cluster_detailed(similarity_from_representation(fit.reps.consensus), spectral);
      report.labels = sc.labels;
      report.evaluation = evaluate(sc.kmeans, data);
      break;
    }
    case Method::RmscWv: {
      RmscWvResult fit = fit_rmsc_wv(data, cfg.solver);
      report.iterations = fit.trace.iterations_run;
      report.converged = fit.trace.converged;
      report.objective_trace = fit.trace.objective_values;
      WeightSummary summary;
      for (Eigen::Index v = 0; v < fit.weights.weights.size(); ++v)
        summary.per_view_mean_weight.push_back(fit.weights.weights(v));
      report.weight_summary = std::move(summary);
      SpectralResult sc =
          spectral_cluster_detailed(similarity_from_representation(fit.reps.consensus), spectral);
      report.labels = sc.labels;
      report.evaluation = evaluate(sc.kmeans, data);
      break;
    }
    case Method::SscAvg: {
      std::vector<Eigen::MatrixXd> reps;
      for (int v = 0; v < data.n_views(); ++v)
        reps.push_back(fit_ssc_single(data.view(v), cfg.solver.beta, cfg.ssc_max_iters,
                                      cfg.ssc_rel_tol));
      SimilarityMatrix sim{naive_average_similarity(reps)};
      SpectralResult sc = spectral_cluster_detailed(sim, spectral);
      report.labels = sc.labels;
      report.evaluation = evaluate(sc.kmeans, data);
      break;
    }
    case Method::SscBsv: {
      std::vector<SimilarityMatrix> sims;
      for (int v = 0; v < data.n_views(); ++v)
        sims.push_back(similarity_from_representation(fit_ssc_single(
            data.view(v), cfg.solver.beta, cfg.ssc_max_iters, cfg.ssc_rel_tol)));
      run_best_single_view(data, spectral, sims, report);
      break;
    }
    case Method::ScBsv: {
      std::vector<SimilarityMatrix> sims;
      for (int v = 0; v < data.n_views(); ++v)
        sims.push_back(gaussian_knn_graph(data.view(v), spectral));
      run_best_single_view(data, spectral, sims, report);
      break;
    }
  }
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

nlohmann::json report_to_json(const RunReport& report) {
  const ExperimentConfig& cfg = report.config;
  nlohmann::json hyper{{"lambda", cfg.solver.lambda},
                       {"beta", cfg.solver.beta},
                       {"gamma", cfg.solver.gamma},
                       {"max_iters", cfg.solver.max_iters},
                       {"rel_tol", cfg.solver.rel_tol},
                       {"init_policy", init_policy_name(cfg.solver.init_policy)},
                       {"n_clusters", cfg.spectral.n_clusters},
                       {"kmeans_restarts", cfg.spectral.kmeans_restarts},
                       {"kmeans_max_iters", cfg.spectral.kmeans_max_iters},
                       {"knn_k", cfg.spectral.knn_k},
                       {"seed", cfg.spectral.seed},
                       {"normalize", cfg.normalize},
                       {"ssc_max_iters", cfg.ssc_max_iters},
                       {"ssc_rel_tol", cfg.ssc_rel_tol}};
  if (cfg.spectral.sigma_policy == SigmaPolicy::Fixed)
    hyper["sigma"] = cfg.spectral.fixed_sigma;
  else
    hyper["sigma"] = "median";

  nlohmann::json dataset{{"manifest", report.dataset.manifest},
                         {"n_views", report.dataset.n_views},
                         {"n_samples", report.dataset.n_samples},
                         {"has_labels", report.dataset.has_labels}};
  if (report.dataset.n_clusters) dataset["n_clusters"] = *report.dataset.n_clusters;

  nlohmann::json out{{"method", report.method},
                     {"hyperparameters", hyper},
                     {"dataset", dataset},
                     {"iterations", report.iterations},
                     {"converged", report.converged},
                     {"objective_trace", report.objective_trace},
                     {"labels", report.labels}};
  if (report.evaluation) out["evaluation"] = evaluation_to_json(*report.evaluation);
  if (report.weight_summary) {
    nlohmann::json lows = nlohmann::json::array();
    for (const auto& entry : report.weight_summary->lowest_weight_samples)
      lows.push_back(
          {{"view", entry.view}, {"sample", entry.sample}, {"weight", entry.weight}});
    out["weight_summary"] = {
        {"per_view_mean_weight", report.weight_summary->per_view_mean_weight},
        {"lowest_weight_samples", lows}};
  }
  if (!report.views.empty()) {
    nlohmann::json views = nlohmann::json::array();
    for (const auto& view : report.views) {
      nlohmann::json entry{{"name", view.name}};
      if (view.evaluation) entry["evaluation"] = evaluation_to_json(*view.evaluation);
      views.push_back(std::move(entry));
    }
    out["views"] = std::move(views);
  }
  if (report.best_view) out["best_view"] = *report.best_view;
  return out;
}

std::filesystem::path cmd_gen(const SyntheticSpec& spec, const std::filesystem::path& out) {
  SyntheticDataset generated = generate_synthetic(spec);
  ensure_output_dir(out);
  auto manifest = save_dataset(generated.dataset, out);
  std::ofstream outliers = open_output(out / "outliers.txt");
  for (int idx : generated.outlier_indices) outliers << idx << "\n";
  std::cout << manifest.string() << "\n";
  return manifest;
}

RunReport cmd_fit(const ExperimentConfig& cfg) {
  MultiViewDataset ds = load_input_dataset(cfg);
  RunReport report = run_experiment(cfg, ds);
  ensure_output_dir(cfg.output_dir);

  auto json_out = open_output(cfg.output_dir / "report.json");
  json_out << report_to_json(report).dump(2) << "\n";

  auto metrics = open_output(cfg.output_dir / "metrics.csv");
  metrics << "restart,accuracy,nmi\n";
  if (report.evaluation) {
    for (size_t r = 0; r < report.evaluation->per_run_accuracy.size(); ++r)
      metrics << r << "," << format_double(report.evaluation->per_run_accuracy[r]) << ","
              << format_double(report.evaluation->per_run_nmi[r]) << "\n";
  }

  auto labels = open_output(cfg.output_dir / "labels.csv");
  labels << "sample,label\n";
  for (size_t i = 0; i < report.labels.size(); ++i)
    labels << i << "," << report.labels[i] << "\n";

  std::cout << report.method << ": ";
  if (report.evaluation)
    std::cout << "accuracy " << report.evaluation->mean_accuracy << " +/- "
              << report.evaluation->std_accuracy << ", nmi " << report.evaluation->mean_nmi
              << " +/- " << report.evaluation->std_nmi << ", ";
  std::cout << report.iterations << " iterations, " << report.wall_clock_seconds
            << " s (timing is console-only)\n";
  return report;
}

void cmd_sweep(const ExperimentConfig& cfg, const std::vector<double>& lambda_grid,
               const std::vector<double>& beta_grid) {
  if (lambda_grid.empty() || beta_grid.empty())
    throw ValidationError("sweep grids must be non-empty");
  MultiViewDataset ds = load_input_dataset(cfg);
  ensure_output_dir(cfg.output_dir);
  auto out = open_output(cfg.output_dir / "sweep.csv");
  out << "lambda,beta,mean_acc,std_acc,mean_nmi,std_nmi\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double lambda : lambda_grid) {
    for (double beta : beta_grid) {
      ExperimentConfig cell = cfg;
      cell.solver.lambda = lambda;
      cell.solver.beta = beta;
      double mean_acc = nan, std_acc = nan, mean_nmi = nan, std_nmi = nan;
      try {
        RunReport report = run_experiment(cell, ds);
        if (!report.evaluation)
          throw std::runtime_error("dataset has no labels, cannot score sweep cell");
        mean_acc = report.evaluation->mean_accuracy;
        std_acc = report.evaluation->std_accuracy;
        mean_nmi = report.evaluation->mean_nmi;
        std_nmi = report.evaluation->std_nmi;
      } catch (const std::exception& e) {
        std::cerr << "warning: sweep cell (lambda=" << lambda << ", beta=" << beta
                  << ") failed: " << e.what() << "\n";
      }
      out << format_double(lambda) << "," << format_double(beta) << ","
          << format_double(mean_acc) << "," << format_double(std_acc) << ","
          << format_double(mean_nmi) << "," << format_double(std_nmi) << "\n";
    }
  }
}

void cmd_trace(const ExperimentConfig& cfg) {
  if (cfg.method != Method::Rmsc && cfg.method != Method::RmscWv)
    throw ValidationError("trace requires method RMSC or RMSC-WV");
  cfg.validate();
  MultiViewDataset ds = load_input_dataset(cfg);
  MultiViewDataset data = cfg.normalize ? normalize_unit_l2(ds) : ds;
  SolverTrace trace = cfg.method == Method::Rmsc ? fit_rmsc(data, cfg.solver).trace
                                                 : fit_rmsc_wv(data, cfg.solver).trace;
  ensure_output_dir(cfg.output_dir);
  auto out = open_output(cfg.output_dir / "trace.csv");
  out << "iteration,objective\n";
  for (size_t t = 0; t < trace.objective_values.size(); ++t)
    out << (t + 1) << "," << format_double(trace.objective_values[t]) << "\n";
}

void cmd_weights(const ExperimentConfig& cfg) {
  if (cfg.method != Method::Rmsc)
    throw ValidationError("weights requires method RMSC");
  cfg.validate();
  MultiViewDataset ds = load_input_dataset(cfg);
  MultiViewDataset data = cfg.normalize ? normalize_unit_l2(ds) : ds;
  RmscResult fit = fit_rmsc(data, cfg.solver);
  ensure_output_dir(cfg.output_dir);

  std::vector<std::string> header;
  for (int j = 0; j < data.n_samples(); ++j) header.push_back("sample_" + std::to_string(j));
  write_matrix_csv(cfg.output_dir / "weights.csv", fit.weights.weights, header);

  WeightSummary summary =
      summarize_weights(fit.weights.weights, data.n_views() * data.n_samples());
  auto ranked = open_output(cfg.output_dir / "weights_ranked.csv");
  ranked << "view,sample,weight\n";
  for (const auto& entry : summary.lowest_weight_samples)
    ranked << entry.view << "," << entry.sample << "," << format_double(entry.weight) << "\n";
}

}  // namespace mvsc
