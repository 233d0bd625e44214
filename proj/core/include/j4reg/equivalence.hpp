#pragma once

#include <Eigen/Core>
#include <vector>

#include "j4reg/dataset.hpp"

namespace j4reg {

/// Binary classification problem equivalent to a centered regression dataset:
/// each retained sample (x, z) contributes (x/z, +1) and (-x/z, -1).
struct EquivalentClassificationDataset {
  Eigen::MatrixXd points;   // 2M' x n
  Eigen::VectorXd labels;   // 2M', entries +1 / -1
  std::vector<Eigen::Index> source_index;  // 2M', regression sample of origin
  std::vector<Eigen::Index> dropped;       // samples excluded for |z| < tau

  Eigen::Index num_points() const { return points.rows(); }
};

/// Augmented-space construction: (x, z + eps) labeled +1 and (x, z - eps)
/// labeled -1, the classifier recovering the regressor through its extra
/// coordinate.
struct BiBennettDataset {
  Eigen::MatrixXd points;  // 2M x (n+1), last coordinate is z +- eps
  Eigen::VectorXd labels;
  double epsilon = 0.0;
};

/// Default threshold below which a centered target counts as zero:
/// 1e-6 times the standard deviation of the centered targets.
double default_tau(const Eigen::VectorXd& centered_targets);

/// Builds the equivalent classification dataset. Samples with |z| < tau are
/// dropped (and reported); throws DataError if nothing survives.
EquivalentClassificationDataset to_classification(const RegressionDataset& centered,
                                                  double tau);

/// z = w.(x - x0) + z0: the classifier weights applied as a regressor.
double predict_from_weights(const Eigen::VectorXd& w, const ReferencePoint& ref,
                            const Eigen::VectorXd& x);

BiBennettDataset bi_bennett_transform(const RegressionDataset& ds, double epsilon);

/// z = -(w.x + b) / eta.
double bi_bennett_predict(const Eigen::VectorXd& w, double b, double eta,
                          const Eigen::VectorXd& x);

/// The +1/-1 constraints of a pair are identical, so the dual objective only
/// depends on the pair sum and any split is optimal. Averaging each pair
/// (layout: rows 2r, 2r+1) picks the symmetric representative without moving
/// w or the objective.
void symmetrize_paired_multipliers(Eigen::VectorXd& lambda);

}  // namespace j4reg
