#include "j4reg/svc.hpp"

#include <algorithm>
#include <cmath>

namespace j4reg {

void SvcProblem::validate() const {
  if (points.rows() < 1) throw DataError("SVC problem has no points");
  if (points.rows() != labels.size()) throw DataError("points/labels length mismatch");
  if (!(c > 0.0)) throw ConfigError("box bound C must be positive");
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels(i) != 1.0 && labels(i) != -1.0) {
      throw DataError("label at index " + std::to_string(i) + " is not +1/-1");
    }
  }
}

namespace {

// Projected-gradient optimality violation for one coordinate of the dual
// minimization. g is the plain gradient y_i (w.x_i) - 1.
double box_violation(double lambda, double g, double c, double bound_tol) {
  if (lambda >= c - bound_tol) return std::max(0.0, g);     // can only decrease
  if (lambda <= -c + bound_tol) return std::max(0.0, -g);   // can only increase
  return std::abs(g);
}

}  // namespace

DualSolution solve_dual(const SvcProblem& p, double tol, int max_iter) {
  p.validate();
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be positive");

  const Eigen::Index nn = p.num_points();
  const Eigen::Index dim = p.points.cols();
  Eigen::VectorXd sqnorm(nn);
  bool any_nonzero = false;
  for (Eigen::Index i = 0; i < nn; ++i) {
    sqnorm(i) = p.points.row(i).squaredNorm();
    any_nonzero = any_nonzero || sqnorm(i) > 0.0;
  }
  if (!any_nonzero) throw DataError("all points have zero norm");

  DualSolution sol;
  sol.lambda = Eigen::VectorXd::Zero(nn);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);

  const double bound_tol = 1e-12 * p.c;
  int sweep = 0;
  for (; sweep < max_iter; ++sweep) {
    double max_violation = 0.0;
    for (Eigen::Index i = 0; i < nn; ++i) {
      if (sqnorm(i) == 0.0) continue;
      const double g = p.labels(i) * p.points.row(i).dot(w) - 1.0;
      max_violation = std::max(max_violation, box_violation(sol.lambda(i), g, p.c, bound_tol));
      const double next = std::clamp(sol.lambda(i) - g / sqnorm(i), -p.c, p.c);
      const double delta = next - sol.lambda(i);
      if (delta != 0.0) {
        sol.lambda(i) = next;
        w += delta * p.labels(i) * p.points.row(i).transpose();
      }
    }
    if (max_violation <= tol) {
      sol.converged = true;
      ++sweep;
      break;
    }
  }
  sol.iterations = sweep;

  // recompute from scratch to cancel incremental drift
  sol.w = recover_weights(sol.lambda, p);
  sol.dual_objective = dual_objective(sol.lambda, p);
  sol.primal_objective = primal_objective(sol.w, p);
  sol.kkt_status = kkt_classify(sol, p, 1e-9 * p.c);
  return sol;
}

Eigen::VectorXd recover_weights(const Eigen::VectorXd& lambda, const SvcProblem& p) {
  if (lambda.size() != p.num_points()) throw ConfigError("lambda length mismatch");
  return p.points.transpose() * lambda.cwiseProduct(p.labels);
}

std::vector<KktStatus> kkt_classify(const DualSolution& sol, const SvcProblem& p, double tol) {
  std::vector<KktStatus> out(static_cast<std::size_t>(sol.lambda.size()));
  for (Eigen::Index i = 0; i < sol.lambda.size(); ++i) {
    KktStatus s = KktStatus::kInterior;
    if (sol.lambda(i) >= p.c - tol) {
      s = KktStatus::kAtUpper;
    } else if (sol.lambda(i) <= -p.c + tol) {
      s = KktStatus::kAtLower;
    }
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

double primal_objective(const Eigen::VectorXd& w, const SvcProblem& p) {
  if (w.size() != p.points.cols()) throw ConfigError("weight dimension mismatch");
  const Eigen::VectorXd margins = p.labels.cwiseProduct(p.points * w);
  return 0.5 * w.squaredNorm() + p.c * (1.0 - margins.array()).abs().sum();
}

double dual_objective(const Eigen::VectorXd& lambda, const SvcProblem& p) {
  const Eigen::VectorXd w = recover_weights(lambda, p);
  return 0.5 * w.squaredNorm() - lambda.sum();
}

const char* kkt_status_name(KktStatus s) {
  switch (s) {
    case KktStatus::kInterior: return "interior";
    case KktStatus::kAtLower: return "at_lower";
    case KktStatus::kAtUpper: return "at_upper";
  }
  return "?";
}

}  // namespace j4reg
