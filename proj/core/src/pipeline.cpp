#include "j4reg/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "j4reg/equivalence.hpp"
#include "j4reg/linmap.hpp"
#include "j4reg/regressability.hpp"
#include "j4reg/svc.hpp"

namespace j4reg {

namespace {

using nlohmann::json;

void validate_config(const RunConfig& cfg) {
  if (!(cfg.c > 0.0)) throw ConfigError("c must be positive");
  if (!(cfg.tol > 0.0)) throw ConfigError("tol must be positive");
  if (cfg.max_iter < 1) throw ConfigError("max_iter must be positive");
  if (cfg.tau < 0.0) throw ConfigError("tau must be nonnegative");
  if (!(cfg.d_percentile > 0.0) || !(cfg.d_percentile < 100.0)) {
    throw ConfigError("d_percentile must be in (0, 100)");
  }
  if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (cfg.arch.empty()) throw ConfigError("arch must name at least the output layer");
  for (const int d : cfg.arch) {
    if (d < 1) throw ConfigError("arch entries must be positive");
  }
  if (!(cfg.lr > 0.0)) throw ConfigError("lr must be positive");
  if (cfg.epochs < 1) throw ConfigError("epochs must be at least 1");
  if (!(cfg.eps_div > 0.0)) throw ConfigError("eps_div must be positive");
  if (cfg.k_folds < 2) throw ConfigError("k_folds must be at least 2");
  if (cfg.time_limit_seconds < 0.0) throw ConfigError("time_limit must be nonnegative");
}

class Deadline {
 public:
  explicit Deadline(double seconds)
      : enabled_(seconds > 0.0),
        end_(std::chrono::steady_clock::now() +
             std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                 std::chrono::duration<double>(seconds))) {}

  void check(const std::string& where) const {
    if (enabled_ && std::chrono::steady_clock::now() > end_) {
      throw ConvergenceError("time limit exceeded during " + where);
    }
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point end_;
};

std::vector<Eigen::Index> full_dims(Eigen::Index input, const std::vector<int>& arch) {
  std::vector<Eigen::Index> dims{input};
  for (const int d : arch) dims.push_back(d);
  return dims;
}

double mean_of(const std::vector<FoldReport>& folds, double FoldReport::*field) {
  double s = 0.0;
  for (const auto& f : folds) s += f.*field;
  return folds.empty() ? 0.0 : s / static_cast<double>(folds.size());
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid config JSON: ") + e.what());
  }
  RunConfig cfg;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "input_path") cfg.input_path = value.get<std::string>();
      else if (key == "target_column") cfg.target_column = value.get<std::string>();
      else if (key == "out_dir") cfg.out_dir = value.get<std::string>();
      else if (key == "c") cfg.c = value.get<double>();
      else if (key == "tol") cfg.tol = value.get<double>();
      else if (key == "max_iter") cfg.max_iter = value.get<int>();
      else if (key == "tau") cfg.tau = value.get<double>();
      else if (key == "d_percentile") cfg.d_percentile = value.get<double>();
      else if (key == "epsilon") cfg.epsilon = value.get<double>();
      else if (key == "arch") cfg.arch = value.get<std::vector<int>>();
      else if (key == "lr") cfg.lr = value.get<double>();
      else if (key == "epochs") cfg.epochs = value.get<int>();
      else if (key == "eps_div") cfg.eps_div = value.get<double>();
      else if (key == "standardize") cfg.standardize = value.get<bool>();
      else if (key == "k_folds") cfg.k_folds = value.get<int>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "time_limit_seconds") cfg.time_limit_seconds = value.get<double>();
      else throw ConfigError("unknown config key '" + key + "'");
    } catch (const json::exception& e) {
      throw ConfigError("bad value for config key '" + key + "': " + e.what());
    }
  }
  validate_config(cfg);
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  json j;
  j["input_path"] = cfg.input_path;
  j["target_column"] = cfg.target_column;
  j["out_dir"] = cfg.out_dir;
  j["c"] = cfg.c;
  j["tol"] = cfg.tol;
  j["max_iter"] = cfg.max_iter;
  j["tau"] = cfg.tau;
  j["d_percentile"] = cfg.d_percentile;
  j["epsilon"] = cfg.epsilon;
  j["arch"] = cfg.arch;
  j["lr"] = cfg.lr;
  j["epochs"] = cfg.epochs;
  j["eps_div"] = cfg.eps_div;
  j["standardize"] = cfg.standardize;
  j["k_folds"] = cfg.k_folds;
  j["seed"] = cfg.seed;
  j["time_limit_seconds"] = cfg.time_limit_seconds;
  return j.dump();
}

TrainedModel train_pipeline(const RegressionDataset& train, const RunConfig& cfg,
                            std::uint64_t seed, std::vector<double>* loss_trace) {
  validate_config(cfg);
  RegressionDataset work = train;
  std::optional<StandardScaler> scaler;
  if (cfg.standardize) {
    auto [scaled, sc] = standardize(train);
    work = std::move(scaled);
    scaler = std::move(sc);
  }
  // Center features about their mean so tanh works near its linear range, but
  // leave the targets untouched: the scatter images divide by z, and shifting
  // targets across zero manufactures unbounded images out of ordinary samples.
  ReferencePoint ref;
  ref.x0 = work.features.colwise().mean().transpose();
  ref.z0 = 0.0;
  work.features.rowwise() -= ref.x0.transpose();

  J4TrainResult trained = train_j4(work, full_dims(work.num_features(), cfg.arch),
                                   cfg.lr, cfg.epochs, seed, cfg.tau, cfg.eps_div);
  TrainedModel model;
  model.head = fit_linear_head(trained.net, work);
  model.net = std::move(trained.net);
  model.ref = std::move(ref);
  model.scaler = std::move(scaler);
  if (loss_trace != nullptr) *loss_trace = std::move(trained.loss_trace);
  return model;
}

std::pair<double, double> score_model(const TrainedModel& model,
                                      const RegressionDataset& test) {
  test.validate();
  if (test.num_samples() < 1) throw DataError("empty test split");
  Eigen::VectorXd pred(test.num_samples());
  for (Eigen::Index i = 0; i < test.num_samples(); ++i) {
    pred(i) = model.predict(test.features.row(i).transpose());
  }
  const Eigen::VectorXd resid = pred - test.targets;
  const double mse = resid.squaredNorm() / static_cast<double>(test.num_samples());
  const double ss_tot = (test.targets.array() - test.targets.mean()).square().sum();
  const double r2 = ss_tot > 0.0 ? 1.0 - resid.squaredNorm() / ss_tot : 0.0;
  return {r2, mse};
}

EvaluationReport run_evaluate(const RegressionDataset& ds, const RunConfig& cfg) {
  validate_config(cfg);
  ds.validate();
  const auto start = std::chrono::steady_clock::now();
  const Deadline deadline(cfg.time_limit_seconds);

  const FoldAssignment folds = split_folds(ds, cfg.k_folds, cfg.seed);
  EvaluationReport report;
  for (int f = 0; f < cfg.k_folds; ++f) {
    deadline.check("fold " + std::to_string(f));
    auto [train, test] = split_by_fold(ds, folds, f);
    try {
      std::vector<double> trace;
      const TrainedModel model = train_pipeline(train, cfg, cfg.seed + static_cast<std::uint64_t>(f), &trace);
      const auto [r2, mse] = score_model(model, test);
      FoldReport fr;
      fr.fold = f;
      fr.test_r2 = r2;
      fr.test_mse = mse;
      fr.train_r2 = model.head.train_r2;
      fr.final_loss = trace.empty() ? 0.0 : trace.back();
      report.folds.push_back(fr);
    } catch (const ConvergenceError&) {
      throw;
    } catch (const std::exception& e) {
      throw DataError("fold " + std::to_string(f) + ": " + e.what());
    }
  }
  report.aggregate_r2 = mean_of(report.folds, &FoldReport::test_r2);
  report.aggregate_mse = mean_of(report.folds, &FoldReport::test_mse);
  report.regressability_score =
      regressability(ds, cfg.d_percentile, cfg.tau, cfg.seed).score;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.config_echo = serialize_config(cfg);
  return report;
}

BiBennettComparison run_compare_bibennett(const RegressionDataset& ds, const RunConfig& cfg) {
  validate_config(cfg);
  ds.validate();
  const FoldAssignment folds = split_folds(ds, cfg.k_folds, cfg.seed);

  double eq_sum = 0.0;
  double bb_sum = 0.0;
  for (int f = 0; f < cfg.k_folds; ++f) {
    auto [train, test] = split_by_fold(ds, folds, f);
    auto [centered, ref] = center(train);
    const Eigen::Index n = centered.num_features();

    // route 1: x/z equivalence, weights are the regressor
    const double tau = cfg.tau > 0.0 ? cfg.tau : default_tau(centered.targets);
    const auto eq = to_classification(centered, tau);
    SvcProblem peq{eq.points, eq.labels, cfg.c};
    const DualSolution seq = solve_dual(peq, cfg.tol, cfg.max_iter);

    // route 2: augmented (x, z +- eps, 1) baseline
    const auto bb = bi_bennett_transform(centered, cfg.epsilon);
    SvcProblem pbb;
    pbb.points.resize(bb.points.rows(), n + 2);
    pbb.points.leftCols(n + 1) = bb.points;
    pbb.points.col(n + 1).setOnes();
    pbb.labels = bb.labels;
    pbb.c = cfg.c;
    const DualSolution sbb = solve_dual(pbb, cfg.tol, cfg.max_iter);
    const Eigen::VectorXd w_bb = sbb.w.head(n);
    const double eta = sbb.w(n);
    const double b = sbb.w(n + 1);

    auto r2_of = [&](auto&& predict_one) {
      Eigen::VectorXd pred(test.num_samples());
      for (Eigen::Index i = 0; i < test.num_samples(); ++i) {
        pred(i) = predict_one(Eigen::VectorXd(test.features.row(i).transpose()));
      }
      const double ss_res = (pred - test.targets).squaredNorm();
      const double ss_tot = (test.targets.array() - test.targets.mean()).square().sum();
      return ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
    };
    eq_sum += r2_of([&](const Eigen::VectorXd& x) {
      return predict_from_weights(seq.w, ref, x);
    });
    bb_sum += r2_of([&](const Eigen::VectorXd& x) {
      if (eta == 0.0) return ref.z0;  // degenerate classifier, no z dependence
      return bi_bennett_predict(w_bb, b, eta, Eigen::VectorXd(x - ref.x0)) + ref.z0;
    });
  }
  BiBennettComparison cmp;
  cmp.equivalence_r2 = eq_sum / cfg.k_folds;
  cmp.bi_bennett_r2 = bb_sum / cfg.k_folds;
  return cmp;
}

std::vector<std::string> run_plotdata(const RegressionDataset& ds, const RunConfig& cfg) {
  validate_config(cfg);
  ds.validate();
  if (ds.num_samples() < 1) throw DataError("empty dataset");

  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  std::vector<std::string> written;
  auto open = [&](const std::string& name) {
    const std::string path = (fs::path(cfg.out_dir) / name).string();
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out.precision(12);
    written.push_back(path);
    return out;
  };

  auto [centered, ref] = center(ds);
  const double tau = cfg.tau > 0.0 ? cfg.tau : default_tau(centered.targets);
  const auto eq = to_classification(centered, tau);

  {
    auto out = open("transform_points.csv");
    for (Eigen::Index j = 0; j < eq.points.cols(); ++j) out << "u" << j << ',';
    out << "label,source_index\n";
    for (Eigen::Index i = 0; i < eq.num_points(); ++i) {
      for (Eigen::Index j = 0; j < eq.points.cols(); ++j) out << eq.points(i, j) << ',';
      out << static_cast<int>(eq.labels(i)) << ',' << eq.source_index[static_cast<std::size_t>(i)]
          << '\n';
    }
  }
  {
    const RegressabilityReport rep = regressability(ds, cfg.d_percentile, cfg.tau, cfg.seed);
    auto out = open("classifiability.csv");
    out << "point,c_value,neighborhood_size\n";
    for (std::size_t i = 0; i < rep.per_sample.size(); ++i) {
      out << i << ',' << rep.per_sample[i] << ',' << rep.neighborhood_sizes[i] << '\n';
    }
  }
  {
    std::vector<double> trace;
    train_pipeline(ds, cfg, cfg.seed, &trace);
    auto out = open("loss_trace.csv");
    out << "epoch,j4_loss\n";
    for (std::size_t e = 0; e < trace.size(); ++e) out << e << ',' << trace[e] << '\n';
  }
  for (const int snap : {100, 500, 1000}) {
    RunConfig snap_cfg = cfg;
    snap_cfg.epochs = snap;
    const TrainedModel model = train_pipeline(ds, snap_cfg, cfg.seed, nullptr);
    RegressionDataset work = ds;
    if (model.scaler) {
      for (Eigen::Index i = 0; i < work.num_samples(); ++i) {
        work.features.row(i) = model.scaler->apply(work.features.row(i).transpose()).transpose();
      }
    }
    work.features.rowwise() -= model.ref.x0.transpose();
    const Eigen::MatrixXd phi = model.net.forward_batch(work.features);
    const Eigen::MatrixXd pc1 = pca_project(phi, 1);
    auto out = open("pca_epoch_" + std::to_string(snap) + ".csv");
    out << "pc1,z\n";
    for (Eigen::Index i = 0; i < pc1.rows(); ++i) {
      out << pc1(i, 0) << ',' << ds.targets(i) << '\n';
    }
  }
  return written;
}

}  // namespace j4reg
