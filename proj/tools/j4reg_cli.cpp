// Command-line front end for the regression-as-classification pipeline:
// transform, solve, regressability, train, predict, evaluate, synth,
// plot-data, compare-bibennett.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "j4reg/dataset.hpp"
#include "j4reg/equivalence.hpp"
#include "j4reg/linmap.hpp"
#include "j4reg/model_io.hpp"
#include "j4reg/pipeline.hpp"
#include "j4reg/regressability.hpp"
#include "j4reg/svc.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace j4reg;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNonConvergence = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name,
                       std::string* path_out = nullptr) {
  fs::create_directories(cfg.out_dir);
  const std::string path = (fs::path(cfg.out_dir) / name).string();
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out.precision(12);
  if (path_out != nullptr) *path_out = path;
  return out;
}

RegressionDataset load_input(const RunConfig& cfg) {
  if (cfg.input_path.empty()) throw ConfigError("--input is required");
  return load_csv(cfg.input_path, cfg.target_column);
}

json json_vector(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

void cmd_transform(const RunConfig& cfg) {
  const RegressionDataset ds = load_input(cfg);
  auto [centered, ref] = center(ds);
  const double tau = cfg.tau > 0.0 ? cfg.tau : default_tau(centered.targets);
  const auto eq = to_classification(centered, tau);

  std::string path;
  auto out = open_out(cfg, "transform_points.csv", &path);
  for (Eigen::Index j = 0; j < eq.points.cols(); ++j) out << "u" << j << ',';
  out << "label,source_index\n";
  for (Eigen::Index i = 0; i < eq.num_points(); ++i) {
    for (Eigen::Index j = 0; j < eq.points.cols(); ++j) out << eq.points(i, j) << ',';
    out << static_cast<int>(eq.labels(i)) << ',' << eq.source_index[static_cast<std::size_t>(i)]
        << '\n';
  }
  json rec{{"command", "transform"},
           {"points", eq.num_points()},
           {"dropped", eq.dropped.size()},
           {"tau", tau},
           {"output", path},
           {"config", json::parse(serialize_config(cfg))}};
  std::cout << rec.dump() << '\n';
}

void cmd_solve(const RunConfig& cfg) {
  const RegressionDataset ds = load_input(cfg);
  auto [centered, ref] = center(ds);
  const double tau = cfg.tau > 0.0 ? cfg.tau : default_tau(centered.targets);
  const auto eq = to_classification(centered, tau);
  SvcProblem prob{eq.points, eq.labels, cfg.c};
  const DualSolution sol = solve_dual(prob, cfg.tol, cfg.max_iter);

  std::array<int, 10> hist{};
  for (Eigen::Index i = 0; i < sol.lambda.size(); ++i) {
    const double frac = (sol.lambda(i) + cfg.c) / (2.0 * cfg.c);
    hist[std::min<std::size_t>(9, static_cast<std::size_t>(frac * 10.0))]++;
  }
  int interior = 0, lower = 0, upper = 0;
  for (const KktStatus s : sol.kkt_status) {
    if (s == KktStatus::kInterior) ++interior;
    else if (s == KktStatus::kAtLower) ++lower;
    else ++upper;
  }
  json rec{{"command", "solve"},
           {"w", json_vector(sol.w)},
           {"lambda_histogram", hist},
           {"kkt_counts", {{"interior", interior}, {"at_lower", lower}, {"at_upper", upper}}},
           {"dual_objective", sol.dual_objective},
           {"primal_objective", sol.primal_objective},
           {"duality_gap", sol.primal_objective + sol.dual_objective},
           {"iterations", sol.iterations},
           {"converged", sol.converged},
           {"config", json::parse(serialize_config(cfg))}};
  std::cout << rec.dump() << '\n';
  if (!sol.converged) {
    throw ConvergenceError("dual solver stopped at max_iter without reaching tol");
  }
}

void cmd_regressability(const RunConfig& cfg) {
  const RegressionDataset ds = load_input(cfg);
  const RegressabilityReport rep = regressability(ds, cfg.d_percentile, cfg.tau, cfg.seed);

  std::array<int, 20> hist{};  // C values in [-1, 1], bin width 0.1
  for (const double c : rep.per_sample) {
    const double frac = (c + 1.0) / 2.0;
    hist[std::min<std::size_t>(19, static_cast<std::size_t>(frac * 20.0))]++;
  }
  json rec{{"command", "regressability"},
           {"score", rep.score},
           {"d", rep.d},
           {"d_percentile", rep.d_percentile},
           {"c_histogram", hist},
           {"config", json::parse(serialize_config(cfg))}};
  std::cout << rec.dump() << '\n';
}

void cmd_train(const RunConfig& cfg, const std::string& model_out, bool emit_pca) {
  const RegressionDataset ds = load_input(cfg);
  std::vector<double> trace;
  const TrainedModel model = train_pipeline(ds, cfg, cfg.seed, &trace);

  fs::create_directories(cfg.out_dir);
  const std::string model_path =
      model_out.empty() ? (fs::path(cfg.out_dir) / "model.txt").string() : model_out;
  save_model(model, model_path);

  {
    auto out = open_out(cfg, "loss_trace.csv");
    out << "epoch,j4_loss\n";
    for (std::size_t e = 0; e < trace.size(); ++e) out << e << ',' << trace[e] << '\n';
  }
  if (emit_pca) {
    RunConfig plot_cfg = cfg;
    run_plotdata(ds, plot_cfg);
  }
  json rec{{"command", "train"},
           {"model", model_path},
           {"final_loss", trace.empty() ? 0.0 : trace.back()},
           {"train_r2", model.head.train_r2},
           {"train_mse", model.head.train_mse},
           {"config", json::parse(serialize_config(cfg))}};
  std::cout << rec.dump() << '\n';
}

void cmd_predict(const RunConfig& cfg, const std::string& model_path) {
  if (model_path.empty()) throw ConfigError("--model is required");
  const TrainedModel model = load_model(model_path);
  const RegressionDataset ds = load_input(cfg);

  std::string path;
  auto out = open_out(cfg, "predictions.csv", &path);
  out << "prediction,target\n";
  Eigen::VectorXd pred(ds.num_samples());
  for (Eigen::Index i = 0; i < ds.num_samples(); ++i) {
    pred(i) = model.predict(ds.features.row(i).transpose());
    out << pred(i) << ',' << ds.targets(i) << '\n';
  }
  const double ss_res = (pred - ds.targets).squaredNorm();
  const double ss_tot = (ds.targets.array() - ds.targets.mean()).square().sum();
  json rec{{"command", "predict"},
           {"output", path},
           {"samples", ds.num_samples()},
           {"r2", ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0},
           {"config", json::parse(serialize_config(cfg))}};
  std::cout << rec.dump() << '\n';
}

void cmd_evaluate(const RunConfig& cfg) {
  const RegressionDataset ds = load_input(cfg);
  const EvaluationReport rep = run_evaluate(ds, cfg);

  std::string path;
  auto out = open_out(cfg, "evaluation.jsonl", &path);
  for (const auto& f : rep.folds) {
    json rec{{"fold", f.fold},
             {"test_r2", f.test_r2},
             {"test_mse", f.test_mse},
             {"train_r2", f.train_r2},
             {"final_loss", f.final_loss},
             {"config", json::parse(rep.config_echo)}};
    out << rec.dump() << '\n';
  }
  json agg{{"aggregate", true},
           {"r2", rep.aggregate_r2},
           {"mse", rep.aggregate_mse},
           {"regressability", rep.regressability_score},
           {"wall_seconds", rep.wall_seconds},
           {"config", json::parse(rep.config_echo)}};
  out << agg.dump() << '\n';
  std::cout << agg.dump() << '\n';
}

void cmd_synth(const RunConfig& cfg, const std::string& function, Eigen::Index m,
               double lo, double hi, double sigma, const std::string& output) {
  const SynthFunction f = synth_function_from_name(function);
  const RegressionDataset ds = synth_generate(f, m, lo, hi, sigma, cfg.seed);
  fs::create_directories(cfg.out_dir);
  const std::string path =
      output.empty() ? (fs::path(cfg.out_dir) / (function + ".csv")).string() : output;
  save_csv(ds, path);
  json rec{{"command", "synth"}, {"function", function}, {"samples", m}, {"output", path},
           {"config", json::parse(serialize_config(cfg))}};
  std::cout << rec.dump() << '\n';
}

void cmd_plotdata(const RunConfig& cfg) {
  const RegressionDataset ds = load_input(cfg);
  const auto files = run_plotdata(ds, cfg);
  json rec{{"command", "plot-data"}, {"files", files},
           {"config", json::parse(serialize_config(cfg))}};
  std::cout << rec.dump() << '\n';
}

void cmd_compare_bibennett(const RunConfig& cfg) {
  const RegressionDataset ds = load_input(cfg);
  const BiBennettComparison cmp = run_compare_bibennett(ds, cfg);
  json rec{{"command", "compare-bibennett"},
           {"equivalence_r2", cmp.equivalence_r2},
           {"bi_bennett_r2", cmp.bi_bennett_r2},
           {"epsilon", cfg.epsilon},
           {"config", json::parse(serialize_config(cfg))}};
  std::cout << rec.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;

  // --config preloads defaults; explicit flags still win.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        cfg = parse_config(read_file(argv[i + 1]));
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
      }
    }
  }

  CLI::App app{"Regression via equivalent classification: transform, solve, score, train"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file with defaults");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--out-dir", cfg.out_dir, "output directory");
  app.add_option("--time-limit", cfg.time_limit_seconds, "wall-clock budget in seconds");

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input_path, "input CSV path");
    sub->add_option("--target", cfg.target_column, "target column name");
  };

  auto* transform = app.add_subcommand("transform", "emit the equivalent classification dataset");
  add_input(transform);
  transform->add_option("--tau", cfg.tau, "near-zero target threshold (0 = auto)");

  auto* solve = app.add_subcommand("solve", "solve the SVC dual on the transformed data");
  add_input(solve);
  solve->add_option("--c", cfg.c, "box bound C");
  solve->add_option("--tol", cfg.tol, "convergence tolerance");
  solve->add_option("--max-iter", cfg.max_iter, "sweep limit");
  solve->add_option("--tau", cfg.tau, "near-zero target threshold (0 = auto)");

  auto* reg = app.add_subcommand("regressability", "score dataset difficulty");
  add_input(reg);
  reg->add_option("--d-percentile", cfg.d_percentile, "pairwise-distance percentile for d");
  reg->add_option("--tau", cfg.tau, "near-zero target threshold (0 = auto)");

  std::string model_out, model_path;
  bool emit_pca = false;
  auto* train = app.add_subcommand("train", "train the linearizing map and linear head");
  add_input(train);
  train->add_option("--arch", cfg.arch, "layer sizes after the input layer, e.g. 5 10");
  train->add_option("--lr", cfg.lr, "learning rate");
  train->add_option("--epochs", cfg.epochs, "training epochs");
  train->add_option("--tau", cfg.tau, "near-zero target threshold (0 = auto)");
  train->add_option("--eps-div", cfg.eps_div, "denominator guard for the scatter ratio");
  train->add_flag("--standardize,!--no-standardize", cfg.standardize,
                  "standardize features before training (default on)");
  train->add_option("--model-out", model_out, "model file path");
  train->add_flag("--emit-pca", emit_pca, "also write PCA projection CSVs");

  auto* predict = app.add_subcommand("predict", "predict targets with a saved model");
  add_input(predict);
  predict->add_option("--model", model_path, "model file path")->required();

  auto* evaluate = app.add_subcommand("evaluate", "k-fold cross validation of the pipeline");
  add_input(evaluate);
  evaluate->add_option("--k", cfg.k_folds, "fold count");
  evaluate->add_option("--arch", cfg.arch, "layer sizes after the input layer");
  evaluate->add_option("--lr", cfg.lr, "learning rate");
  evaluate->add_option("--epochs", cfg.epochs, "training epochs");
  evaluate->add_option("--tau", cfg.tau, "near-zero target threshold (0 = auto)");
  evaluate->add_flag("--standardize,!--no-standardize", cfg.standardize,
                     "standardize features per fold");

  std::string synth_fn = "linear", synth_out;
  Eigen::Index synth_m = 500;
  double synth_lo = -3.0, synth_hi = 3.0, synth_sigma = 0.0;
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset CSV");
  synth->add_option("--function", synth_fn,
                    "linear|square|cube|pow5|sin|sin_sq|square_plus_sin_sq|poly_a|poly_b|poly_c");
  synth->add_option("--m", synth_m, "sample count");
  synth->add_option("--domain-lo", synth_lo, "domain lower bound");
  synth->add_option("--domain-hi", synth_hi, "domain upper bound");
  synth->add_option("--noise-sigma", synth_sigma, "Gaussian noise standard deviation");
  synth->add_option("--output", synth_out, "output CSV path");

  auto* plot = app.add_subcommand("plot-data", "emit CSVs behind the diagnostic plots");
  add_input(plot);
  plot->add_option("--epochs", cfg.epochs, "training epochs for the loss trace");
  plot->add_option("--d-percentile", cfg.d_percentile, "pairwise-distance percentile for d");

  auto* compare = app.add_subcommand("compare-bibennett", "compare the two linear constructions");
  add_input(compare);
  compare->add_option("--epsilon", cfg.epsilon, "vertical shift of the augmented construction");
  compare->add_option("--c", cfg.c, "box bound C");
  compare->add_option("--k", cfg.k_folds, "fold count");

  for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (transform->parsed()) cmd_transform(cfg);
    else if (solve->parsed()) cmd_solve(cfg);
    else if (reg->parsed()) cmd_regressability(cfg);
    else if (train->parsed()) cmd_train(cfg, model_out, emit_pca);
    else if (predict->parsed()) cmd_predict(cfg, model_path);
    else if (evaluate->parsed()) cmd_evaluate(cfg);
    else if (synth->parsed()) cmd_synth(cfg, synth_fn, synth_m, synth_lo, synth_hi, synth_sigma, synth_out);
    else if (plot->parsed()) cmd_plotdata(cfg);
    else if (compare->parsed()) cmd_compare_bibennett(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
