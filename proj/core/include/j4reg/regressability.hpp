#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "j4reg/dataset.hpp"
#include "j4reg/equivalence.hpp"

namespace j4reg {

/// Model-free difficulty estimate: the classifiability of the dataset's
/// equivalent classification problem.
struct RegressabilityReport {
  double score = 0.0;                   // in [-1, 1]
  std::vector<double> per_sample;       // C(x_i) for each classification point
  double d = 0.0;                       // neighborhood radius
  double d_percentile = 5.0;
  std::vector<int> neighborhood_sizes;
};

/// Indices j (including i) with ||x_j - x_i|| <= d.
std::vector<Eigen::Index> neighborhood(const Eigen::MatrixXd& points, Eigen::Index i,
                                       double d);

/// (p+ - p-) * y_i over the d-neighborhood of point i, where p+/p- are the
/// empirical label fractions. In [-1, 1]; equals 1 when the neighborhood is
/// pure in i's class.
double classifiability_at(const Eigen::MatrixXd& points, const Eigen::VectorXd& labels,
                          Eigen::Index i, double d);

/// Weighted mean of per-point classifiability, each point weighted by its
/// neighborhood occupancy |N_i|/N, normalized so the score stays in [-1, 1].
RegressabilityReport classifiability(const Eigen::MatrixXd& points,
                                     const Eigen::VectorXd& labels, double d);

/// Distance at the given percentile of the pairwise-distance distribution,
/// subsampled to at most max_pairs pairs for large inputs.
double percentile_pair_distance(const Eigen::MatrixXd& points, double pct,
                                std::uint64_t seed, std::size_t max_pairs = 100000);

/// Centers ds, builds the equivalent classification dataset with threshold
/// tau (<= 0 means the default 1e-6 * target std), picks d at d_percentile of
/// pairwise distances, and scores classifiability.
RegressabilityReport regressability(const RegressionDataset& ds, double d_percentile = 5.0,
                                    double tau = 0.0, std::uint64_t seed = 42);

}  // namespace j4reg
