#pragma once

#include <Eigen/Core>
#include <vector>

#include "j4reg/errors.hpp"

namespace j4reg {

/// L1-error support vector classifier through the origin: the dual multipliers
/// are free within [-c, c] and there is no equality constraint.
struct SvcProblem {
  Eigen::MatrixXd points;  // N x n
  Eigen::VectorXd labels;  // N, entries +1 / -1
  double c = 10.0;

  Eigen::Index num_points() const { return points.rows(); }
  void validate() const;
};

enum class KktStatus { kInterior, kAtLower, kAtUpper };

struct DualSolution {
  Eigen::VectorXd lambda;  // N
  Eigen::VectorXd w;       // n
  double dual_objective = 0.0;
  double primal_objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<KktStatus> kkt_status;
};

/// Cyclic coordinate descent on the dual
///   min 1/2 sum_ij lambda_i lambda_j y_i y_j x_i.x_j - sum_i lambda_i
///   s.t. -C <= lambda_i <= C.
/// Each coordinate update is the exact box-clipped 1-D minimizer. Stops when
/// the largest projected-gradient residual drops below tol. Zero-norm points
/// are skipped (their multiplier stays 0); if every point has zero norm,
/// throws DataError.
DualSolution solve_dual(const SvcProblem& p, double tol = 1e-8, int max_iter = 10000);

/// w = sum_i lambda_i y_i x_i.
Eigen::VectorXd recover_weights(const Eigen::VectorXd& lambda, const SvcProblem& p);

/// Labels each multiplier interior / at_lower / at_upper relative to the box,
/// with tolerance tol on the bound.
std::vector<KktStatus> kkt_classify(const DualSolution& sol, const SvcProblem& p, double tol);

/// 1/2 |w|^2 + C sum_i |1 - y_i w.x_i|.
double primal_objective(const Eigen::VectorXd& w, const SvcProblem& p);

/// Value of the dual minimization objective at lambda.
double dual_objective(const Eigen::VectorXd& lambda, const SvcProblem& p);

const char* kkt_status_name(KktStatus s);

}  // namespace j4reg
