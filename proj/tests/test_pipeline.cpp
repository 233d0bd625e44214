#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "j4reg/model_io.hpp"
#include "j4reg/pipeline.hpp"

using namespace j4reg;

TEST_CASE("config round trip is the identity") {
  RunConfig cfg;
  cfg.input_path = "some.csv";
  cfg.target_column = "y";
  cfg.c = 3.5;
  cfg.arch = {7, 9, 4};
  cfg.standardize = true;
  cfg.seed = 123456789;
  const RunConfig back = parse_config(serialize_config(cfg));
  CHECK(back == cfg);
  const RunConfig back2 = parse_config(serialize_config(back));
  CHECK(back2 == cfg);
}

TEST_CASE("unknown config keys are rejected") {
  CHECK_THROWS_AS(parse_config(R"({"no_such_key": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"c": -1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"k_folds": 1})"), ConfigError);
}

TEST_CASE("model save/load round trip") {
  auto ds = synth_generate(SynthFunction::kSquare, 120, -2.0, 3.0, 0.5, 3);
  RunConfig cfg;
  cfg.epochs = 60;
  cfg.standardize = true;
  const TrainedModel model = train_pipeline(ds, cfg, 42, nullptr);

  const std::string path = "test_model_tmp.txt";
  save_model(model, path);
  const TrainedModel back = load_model(path);
  std::remove(path.c_str());

  for (Eigen::Index i = 0; i < 10; ++i) {
    Eigen::VectorXd x = ds.features.row(i).transpose();
    CHECK(back.predict(x) == doctest::Approx(model.predict(x)).epsilon(1e-12));
  }
  CHECK(back.scaler.has_value());
  CHECK_THROWS_AS(load_model("missing_model.txt"), DataError);
}

TEST_CASE("run_evaluate on noiseless linear data is near-perfect each fold") {
  const auto ds = synth_generate(SynthFunction::kLinear, 120, 0.5, 2.0, 0.0, 17);
  RunConfig cfg;
  cfg.k_folds = 5;
  cfg.epochs = 400;
  const EvaluationReport rep = run_evaluate(ds, cfg);
  REQUIRE(rep.folds.size() == 5);
  for (const auto& f : rep.folds) CHECK(f.test_r2 >= 0.999);
  CHECK(rep.aggregate_r2 >= 0.999);
  CHECK(rep.regressability_score == doctest::Approx(1.0));
  CHECK(!rep.config_echo.empty());
  // report echoes the effective config
  CHECK(parse_config(rep.config_echo) == cfg);
}

TEST_CASE("constant targets are rejected as unevaluable data") {
  RegressionDataset ds;
  ds.features.resize(40, 1);
  for (Eigen::Index i = 0; i < 40; ++i) ds.features(i, 0) = static_cast<double>(i);
  ds.targets = Eigen::VectorXd::Constant(40, 5.0);
  RunConfig cfg;
  cfg.k_folds = 4;
  cfg.epochs = 5;
  // constant targets center to all-zero, so the equivalence transform inside
  // the regressability report has no sample to keep
  CHECK_THROWS_AS(run_evaluate(ds, cfg), DataError);
}

TEST_CASE("run_evaluate is deterministic given the seed") {
  const auto ds = synth_generate(SynthFunction::kSquare, 80, -2.0, 3.0, 1.0, 29);
  RunConfig cfg;
  cfg.k_folds = 4;
  cfg.epochs = 30;
  const auto a = run_evaluate(ds, cfg);
  const auto b = run_evaluate(ds, cfg);
  REQUIRE(a.folds.size() == b.folds.size());
  for (std::size_t i = 0; i < a.folds.size(); ++i) {
    CHECK(a.folds[i].test_r2 == b.folds[i].test_r2);
    CHECK(a.folds[i].final_loss == b.folds[i].final_loss);
  }
}

TEST_CASE("time limit aborts cleanly") {
  const auto ds = synth_generate(SynthFunction::kSquare, 500, -2.0, 3.0, 1.0, 7);
  RunConfig cfg;
  cfg.k_folds = 10;
  cfg.epochs = 100000;
  cfg.time_limit_seconds = 0.2;
  CHECK_THROWS_AS(run_evaluate(ds, cfg), ConvergenceError);
}

TEST_CASE("compare-bibennett: both linear routes are exact on a line") {
  auto ds = synth_generate(SynthFunction::kLinear, 60, 0.5, 2.0, 0.0, 41);
  ds.targets = 2.0 * ds.features.col(0).array() + 1.0;  // z = 2x + 1
  RunConfig cfg;
  cfg.k_folds = 3;
  cfg.epsilon = 0.05;
  cfg.c = 1e5;
  cfg.tol = 1e-10;
  cfg.max_iter = 500000;
  const BiBennettComparison cmp = run_compare_bibennett(ds, cfg);
  CHECK(cmp.equivalence_r2 > 0.999);
  CHECK(cmp.bi_bennett_r2 > 0.99);
}

TEST_CASE("both linear routes are poor on z = x^2") {
  const auto ds = synth_generate(SynthFunction::kSquare, 150, -2.0, 3.0, 0.5, 43);
  RunConfig cfg;
  cfg.k_folds = 3;
  cfg.max_iter = 20000;
  const BiBennettComparison cmp = run_compare_bibennett(ds, cfg);
  CHECK(cmp.equivalence_r2 < 0.8);
  CHECK(cmp.bi_bennett_r2 < 0.8);
}

TEST_CASE("run_plotdata writes its files inside out_dir, errors early on empty data") {
  namespace fs = std::filesystem;
  const auto ds = synth_generate(SynthFunction::kSquare, 100, -2.0, 3.0, 1.0, 3);
  RunConfig cfg;
  cfg.out_dir = "plotdata_tmp";
  cfg.epochs = 1100;
  const auto files = run_plotdata(ds, cfg);
  CHECK(files.size() == 6);
  for (const auto& f : files) {
    CHECK(fs::exists(f));
    CHECK(fs::path(f).parent_path() == fs::path("plotdata_tmp"));
  }
  fs::remove_all("plotdata_tmp");

  RegressionDataset empty;
  empty.features.resize(0, 1);
  empty.targets.resize(0);
  CHECK_THROWS_AS(run_plotdata(empty, cfg), DataError);
  CHECK(!fs::exists("plotdata_tmp"));
}
