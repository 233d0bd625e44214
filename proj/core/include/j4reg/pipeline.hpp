#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "j4reg/dataset.hpp"
#include "j4reg/model_io.hpp"

namespace j4reg {

/// Parameters shared by the CLI subcommands. Serializable to and from JSON;
/// unknown keys are rejected.
struct RunConfig {
  std::string input_path;
  std::string target_column = "target";
  std::string out_dir = ".";

  double c = 10.0;            // SVC box bound
  double tol = 1e-8;          // SVC convergence tolerance
  int max_iter = 100000;      // SVC sweep limit
  double tau = 0.0;           // 0 selects the default 1e-6 * target std
  double d_percentile = 5.0;  // regressability neighborhood percentile
  double epsilon = 0.1;       // Bi-Bennett shift

  std::vector<int> arch = {5, 10};  // hidden..., output; input dim from data
  double lr = 0.01;
  int epochs = 10000;
  double eps_div = 1e-8;
  bool standardize = true;

  int k_folds = 10;
  std::uint64_t seed = 42;
  double time_limit_seconds = 0.0;  // 0 means unlimited

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& json_text);
std::string serialize_config(const RunConfig& cfg);

struct FoldReport {
  int fold = 0;
  double test_r2 = 0.0;
  double test_mse = 0.0;
  double train_r2 = 0.0;
  double final_loss = 0.0;
};

struct EvaluationReport {
  std::vector<FoldReport> folds;
  double aggregate_r2 = 0.0;   // mean over folds
  double aggregate_mse = 0.0;
  double regressability_score = 0.0;
  double wall_seconds = 0.0;
  std::string config_echo;  // serialized effective config
};

/// Trains the linearizing map plus linear head on one dataset: optional
/// standardization, centering, J4 training, least squares head.
TrainedModel train_pipeline(const RegressionDataset& train, const RunConfig& cfg,
                            std::uint64_t seed, std::vector<double>* loss_trace = nullptr);

/// R^2 and MSE of the model on a held-out set.
std::pair<double, double> score_model(const TrainedModel& model,
                                      const RegressionDataset& test);

/// k-fold cross validation of the full pipeline. Deterministic given the seed.
EvaluationReport run_evaluate(const RegressionDataset& ds, const RunConfig& cfg);

struct BiBennettComparison {
  double equivalence_r2 = 0.0;  // x/z transform + SVC weights, per fold mean
  double bi_bennett_r2 = 0.0;   // augmented-space baseline, per fold mean
};

/// Compares the two linear constructions under the same folds.
BiBennettComparison run_compare_bibennett(const RegressionDataset& ds, const RunConfig& cfg);

/// Files emitted by the plot-data subcommand (paths returned for reporting).
std::vector<std::string> run_plotdata(const RegressionDataset& ds, const RunConfig& cfg);

}  // namespace j4reg
