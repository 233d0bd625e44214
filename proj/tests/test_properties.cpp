// Cross-module property checks on seeded random instances.
#include <doctest.h>

#include <random>

#include "j4reg/equivalence.hpp"
#include "j4reg/regressability.hpp"
#include "j4reg/svc.hpp"
#include "oracles.hpp"

using namespace j4reg;

namespace {

RegressionDataset random_regression(std::mt19937_64& rng, Eigen::Index m, Eigen::Index n) {
  std::normal_distribution<double> g;
  RegressionDataset ds;
  ds.features.resize(m, n);
  ds.targets.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) ds.features(i, j) = g(rng);
    ds.targets(i) = g(rng);
  }
  return ds;
}

}  // namespace

TEST_CASE("box feasibility and weight consistency on random solves") {
  std::mt19937_64 rng(100);
  for (int t = 0; t < 40; ++t) {
    std::uniform_real_distribution<double> uc(0.1, 10.0);
    const double c = uc(rng);
    std::normal_distribution<double> g;
    std::bernoulli_distribution coin;
    const Eigen::Index n = 3 + (t % 15);
    SvcProblem p;
    p.points.resize(n, 2);
    p.labels.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      p.points(i, 0) = g(rng);
      p.points(i, 1) = g(rng);
      p.labels(i) = coin(rng) ? 1.0 : -1.0;
    }
    p.c = c;
    const auto sol = solve_dual(p, 1e-9, 200000);
    CHECK(sol.lambda.maxCoeff() <= c);
    CHECK(sol.lambda.minCoeff() >= -c);
    const Eigen::VectorXd recomputed = recover_weights(sol.lambda, p);
    CHECK((sol.w - recomputed).norm() <= 1e-10 * (1.0 + sol.w.norm()));
  }
}

TEST_CASE("weak duality and vanishing gap at convergence") {
  std::mt19937_64 rng(200);
  std::normal_distribution<double> g;
  std::bernoulli_distribution coin;
  for (int t = 0; t < 25; ++t) {
    const Eigen::Index n = 4 + (t % 10);
    SvcProblem p;
    p.points.resize(n, 3);
    p.labels.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int j = 0; j < 3; ++j) p.points(i, j) = g(rng);
      p.labels(i) = coin(rng) ? 1.0 : -1.0;
    }
    p.c = 1.0;
    const auto sol = solve_dual(p, 1e-10, 500000);
    REQUIRE(sol.converged);
    // dual max value is -dual_objective (minimization form)
    CHECK(sol.primal_objective >= -sol.dual_objective - 1e-9);
    const double gap = sol.primal_objective + sol.dual_objective;
    CHECK(std::abs(gap) <= 1e-5 * (1.0 + std::abs(sol.primal_objective)));
  }
}

TEST_CASE("paired multipliers agree after symmetrization, objective unchanged") {
  std::mt19937_64 rng(300);
  for (int t = 0; t < 20; ++t) {
    RegressionDataset ds = random_regression(rng, 15, 2);
    ds.targets.array() += 3.0;  // keep targets away from zero
    auto [centered, ref] = center(ds);
    const auto eq = to_classification(centered, default_tau(centered.targets));
    SvcProblem p{eq.points, eq.labels, 2.0};
    auto sol = solve_dual(p, 1e-10, 500000);
    const double before = dual_objective(sol.lambda, p);
    const Eigen::VectorXd w_before = sol.w;

    symmetrize_paired_multipliers(sol.lambda);
    for (Eigen::Index r = 0; r < sol.lambda.size() / 2; ++r) {
      CHECK(sol.lambda(2 * r) == sol.lambda(2 * r + 1));
    }
    CHECK(dual_objective(sol.lambda, p) == doctest::Approx(before).epsilon(1e-10));
    CHECK((recover_weights(sol.lambda, p) - w_before).norm() <= 1e-10 * (1.0 + w_before.norm()));
  }
}

TEST_CASE("KKT status tracks the per-sample margin on equivalence problems") {
  std::mt19937_64 rng(400);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int t = 0; t < 10; ++t) {
    // linear data plus a handful of perturbed targets
    Eigen::VectorXd w_star(2);
    w_star << u(rng), -u(rng);
    RegressionDataset ds;
    ds.features.resize(30, 2);
    ds.targets.resize(30);
    std::normal_distribution<double> g;
    for (Eigen::Index i = 0; i < 30; ++i) {
      ds.features(i, 0) = g(rng);
      ds.features(i, 1) = g(rng);
      ds.targets(i) = w_star.dot(ds.features.row(i).transpose()) + 5.0;
    }
    ds.targets(3) += 4.0;
    ds.targets(17) -= 4.0;

    auto [centered, ref] = center(ds);
    const auto eq = to_classification(centered, default_tau(centered.targets));
    SvcProblem p{eq.points, eq.labels, 3.0};
    const auto sol = solve_dual(p, 1e-10, 500000);
    REQUIRE(sol.converged);

    for (Eigen::Index k = 0; k < eq.num_points(); ++k) {
      const Eigen::Index i = eq.source_index[static_cast<std::size_t>(k)];
      const double z = centered.targets(i);
      const double s = sol.w.dot(centered.features.row(i).transpose()) / z;
      switch (sol.kkt_status[static_cast<std::size_t>(k)]) {
        case KktStatus::kInterior:
          CHECK(std::abs(s - 1.0) <= 1e-6);
          break;
        case KktStatus::kAtUpper:
          CHECK(s <= 1.0 + 1e-6);  // margin short of the proximal plane
          break;
        case KktStatus::kAtLower:
          CHECK(s >= 1.0 - 1e-6);  // margin beyond the proximal plane
          break;
      }
    }
  }
}

TEST_CASE("j4 loss nonnegative on random batches") {
  std::mt19937_64 rng(500);
  std::uniform_real_distribution<double> uz(0.2, 3.0);
  std::bernoulli_distribution coin;
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index m = 2 + (t % 12);
    const Eigen::Index p = 1 + (t % 6);
    const Eigen::MatrixXd phi = oracles::random_matrix(m, p, rng);
    Eigen::VectorXd z(m);
    for (Eigen::Index i = 0; i < m; ++i) z(i) = (coin(rng) ? 1.0 : -1.0) * uz(rng);
    CHECK(j4_loss(phi, z, 1e-8) >= 0.0);
  }
}

TEST_CASE("regressability bounds on random datasets") {
  std::mt19937_64 rng(600);
  for (int t = 0; t < 30; ++t) {
    RegressionDataset ds = random_regression(rng, 30 + (t % 50), 1 + (t % 3));
    const auto rep = regressability(ds, 5.0, 0.0, t);
    CHECK(rep.score >= -1.0);
    CHECK(rep.score <= 1.0);
  }
}
