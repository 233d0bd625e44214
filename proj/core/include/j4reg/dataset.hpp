#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "j4reg/errors.hpp"

namespace j4reg {

/// A tabular regression dataset: M samples with n real features and a real
/// target each. Immutable after construction.
struct RegressionDataset {
  Eigen::MatrixXd features;  // M x n, one row per sample
  Eigen::VectorXd targets;   // M
  std::vector<std::string> feature_names;
  std::string source;

  Eigen::Index num_samples() const { return features.rows(); }
  Eigen::Index num_features() const { return features.cols(); }

  /// Throws DataError on shape mismatch or non-finite entries.
  void validate() const;
};

/// The point subtracted from a dataset so the regressor passes through the
/// origin. Always the sample mean.
struct ReferencePoint {
  Eigen::VectorXd x0;  // n
  double z0 = 0.0;
};

/// Per-column affine rescaling to zero mean / unit variance, kept around so
/// predictions can map new inputs the same way.
struct StandardScaler {
  Eigen::VectorXd mean;   // n
  Eigen::VectorXd scale;  // n, 1.0 for constant columns

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
};

struct FoldAssignment {
  std::vector<int> fold_of_sample;  // M entries in [0, k)
  int k = 0;
  std::uint64_t seed = 0;
};

enum class SynthFunction {
  kLinear,          // z = x
  kSquare,          // z = x^2
  kCube,            // z = x^3
  kPow5,            // z = x^5
  kSin,             // z = sin(x)
  kSinSq,           // z = sin(x^2)
  kSquarePlusSinSq, // z = x^2 + sin(x^2)
  kPolyA,           // z = (x+1)^2 (x-3)^2
  kPolyB,           // z = (x+3)^3 ((x-2)(x+1)(x+2))^2
  kPolyC,           // z = (x+3)^2 ((x+1)(x+2))^2
};

/// Parses names like "linear", "sin_sq", "poly_b". Throws ConfigError.
SynthFunction synth_function_from_name(const std::string& name);
std::string synth_function_name(SynthFunction f);
double synth_eval(SynthFunction f, double x);

/// Reads a comma-delimited file with a header row. The target column is
/// removed from the features. Row order is preserved.
RegressionDataset load_csv(const std::string& path, const std::string& target_column);

/// Writes the dataset back in the same shape load_csv reads.
void save_csv(const RegressionDataset& ds, const std::string& path);

/// Subtracts the sample means from features and targets; returns the centered
/// data and the reference point holding the means.
std::pair<RegressionDataset, ReferencePoint> center(const RegressionDataset& ds);

/// Rescales each feature column to zero mean, unit variance. Constant columns
/// keep scale 1.
std::pair<RegressionDataset, StandardScaler> standardize(const RegressionDataset& ds);

/// Deterministic shuffled partition into k folds whose sizes differ by at
/// most one.
FoldAssignment split_folds(const RegressionDataset& ds, int k, std::uint64_t seed);

/// One-dimensional synthetic data: x uniform on [domain_lo, domain_hi],
/// z = f(x) + Gaussian noise with standard deviation noise_sigma.
RegressionDataset synth_generate(SynthFunction f, Eigen::Index m, double domain_lo,
                                 double domain_hi, double noise_sigma,
                                 std::uint64_t seed);

/// Rows of ds whose index has fold != test_fold (train) or == test_fold (test).
std::pair<RegressionDataset, RegressionDataset> split_by_fold(
    const RegressionDataset& ds, const FoldAssignment& folds, int test_fold);

}  // namespace j4reg
