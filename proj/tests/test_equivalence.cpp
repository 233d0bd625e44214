#include <doctest.h>

#include <random>

#include "j4reg/equivalence.hpp"
#include "j4reg/svc.hpp"

using namespace j4reg;

namespace {

RegressionDataset make_ds(std::initializer_list<double> xs, std::initializer_list<double> zs) {
  RegressionDataset ds;
  ds.features.resize(static_cast<Eigen::Index>(xs.size()), 1);
  ds.targets.resize(static_cast<Eigen::Index>(zs.size()));
  Eigen::Index i = 0;
  for (const double x : xs) ds.features(i++, 0) = x;
  i = 0;
  for (const double z : zs) ds.targets(i++) = z;
  return ds;
}

}  // namespace

TEST_CASE("to_classification collapses z = 2x samples onto +-1/2") {
  const auto ds = make_ds({0.5, 1.0, 2.0}, {1.0, 2.0, 4.0});
  const auto eq = to_classification(ds, 1e-9);
  REQUIRE(eq.num_points() == 6);
  for (Eigen::Index i = 0; i < eq.num_points(); ++i) {
    if (eq.labels(i) > 0) {
      CHECK(eq.points(i, 0) == doctest::Approx(0.5).epsilon(1e-15));
    } else {
      CHECK(eq.points(i, 0) == doctest::Approx(-0.5).epsilon(1e-15));
    }
  }
}

TEST_CASE("to_classification on a single unit sample") {
  const auto ds = make_ds({1.0}, {1.0});
  const auto eq = to_classification(ds, 1e-9);
  REQUIRE(eq.num_points() == 2);
  CHECK(eq.points(0, 0) == 1.0);
  CHECK(eq.labels(0) == 1.0);
  CHECK(eq.points(1, 0) == -1.0);
  CHECK(eq.labels(1) == -1.0);
  CHECK(eq.source_index[0] == 0);
  CHECK(eq.source_index[1] == 0);
}

TEST_CASE("near-zero targets are dropped and reported") {
  const auto ds = make_ds({3.0, 1.0}, {1e-12, 2.0});
  const auto eq = to_classification(ds, 1e-6);
  CHECK(eq.num_points() == 2);
  REQUIRE(eq.dropped.size() == 1);
  CHECK(eq.dropped[0] == 0);

  const auto all_small = make_ds({1.0}, {1e-12});
  CHECK_THROWS_AS(to_classification(all_small, 1e-6), DataError);
}

TEST_CASE("negation symmetry is exact") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  RegressionDataset ds;
  ds.features.resize(40, 3);
  ds.targets.resize(40);
  for (Eigen::Index i = 0; i < 40; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) ds.features(i, j) = g(rng);
    ds.targets(i) = g(rng) + 2.0;
  }
  const auto eq = to_classification(ds, 1e-8);
  for (Eigen::Index r = 0; r < eq.num_points() / 2; ++r) {
    CHECK((eq.points.row(2 * r) + eq.points.row(2 * r + 1)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(eq.labels(2 * r) == 1.0);
    CHECK(eq.labels(2 * r + 1) == -1.0);
  }
}

TEST_CASE("separability lemma: exact-hyperplane samples land on their proximal planes") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Eigen::VectorXd w_star(3);
  w_star << 1.5, -0.7, 2.2;
  RegressionDataset ds;
  ds.features.resize(30, 3);
  ds.targets.resize(30);
  for (Eigen::Index i = 0; i < 30; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) ds.features(i, j) = u(rng);
    ds.targets(i) = w_star.dot(ds.features.row(i).transpose());
  }
  const auto eq = to_classification(ds, 1e-9);
  for (Eigen::Index i = 0; i < eq.num_points(); ++i) {
    CHECK(eq.points.row(i).dot(w_star) == doctest::Approx(eq.labels(i)).epsilon(1e-10));
  }
}

TEST_CASE("predict_from_weights applies the reference point") {
  ReferencePoint ref;
  ref.x0 = Eigen::VectorXd::Zero(1);
  ref.z0 = 0.0;
  Eigen::VectorXd w(1), x(1);
  w << 2.0;
  x << 1.0;
  CHECK(predict_from_weights(w, ref, x) == doctest::Approx(2.0));

  ref.x0 << 1.0;
  ref.z0 = 2.0;
  CHECK(predict_from_weights(w, ref, x) == doctest::Approx(2.0));

  ReferencePoint ref2;
  ref2.x0 = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd w2(2), x2(2);
  w2 << 1.0, 1.0;
  x2 << 0.3, 0.7;
  CHECK(predict_from_weights(w2, ref2, x2) == doctest::Approx(1.0));

  Eigen::VectorXd bad(3);
  CHECK_THROWS_AS(predict_from_weights(w2, ref2, bad), ConfigError);
}

TEST_CASE("round trip: solve the equivalent problem and reproduce linear targets") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.5, 2.5);
  Eigen::VectorXd w_star(2);
  w_star << 1.2, -0.4;
  RegressionDataset ds;
  ds.features.resize(25, 2);
  ds.targets.resize(25);
  for (Eigen::Index i = 0; i < 25; ++i) {
    ds.features(i, 0) = u(rng);
    ds.features(i, 1) = u(rng);
    ds.targets(i) = w_star.dot(ds.features.row(i).transpose());
  }
  auto [centered, ref] = center(ds);
  const auto eq = to_classification(centered, default_tau(centered.targets));
  SvcProblem p{eq.points, eq.labels, 1e6};
  const auto sol = solve_dual(p, 1e-10, 200000);
  for (Eigen::Index i = 0; i < ds.num_samples(); ++i) {
    const double z = predict_from_weights(sol.w, ref, ds.features.row(i).transpose());
    CHECK(z == doctest::Approx(ds.targets(i)).epsilon(1e-8));
  }
}

TEST_CASE("bi_bennett_transform shifts targets by +-epsilon") {
  const auto ds = make_ds({1.0}, {3.0});
  const auto bb = bi_bennett_transform(ds, 0.5);
  REQUIRE(bb.points.rows() == 2);
  CHECK(bb.points(0, 0) == 1.0);
  CHECK(bb.points(0, 1) == doctest::Approx(3.5));
  CHECK(bb.labels(0) == 1.0);
  CHECK(bb.points(1, 1) == doctest::Approx(2.5));
  CHECK(bb.labels(1) == -1.0);

  CHECK_THROWS_AS(bi_bennett_transform(ds, 0.0), ConfigError);
}

TEST_CASE("bi_bennett pair gap is exactly 2 epsilon") {
  const auto ds = make_ds({0.0, 1.0, 2.0}, {1.0, 2.0, 3.0});
  const double eps = 0.25;
  const auto bb = bi_bennett_transform(ds, eps);
  for (Eigen::Index i = 0; i < ds.num_samples(); ++i) {
    CHECK((bb.points.row(2 * i) - bb.points.row(2 * i + 1)).head(1).cwiseAbs().maxCoeff() == 0.0);
    CHECK(bb.points(2 * i, 1) - bb.points(2 * i + 1, 1) == doctest::Approx(2.0 * eps));
  }
}

TEST_CASE("bi_bennett augmented data from a line is linearly separable") {
  const auto ds = make_ds({0.0, 0.5, 1.0, 1.5}, {1.0, 2.0, 3.0, 4.0});  // z = 2x + 1
  auto [centered, ref] = center(ds);
  const auto bb = bi_bennett_transform(centered, 0.1);
  SvcProblem p;
  p.points.resize(bb.points.rows(), 3);
  p.points.leftCols(2) = bb.points;
  p.points.col(2).setOnes();
  p.labels = bb.labels;
  p.c = 1e6;
  const auto sol = solve_dual(p, 1e-10, 500000);
  const Eigen::VectorXd margins = p.labels.cwiseProduct(p.points * sol.w);
  CHECK(margins.minCoeff() > 0.0);  // separated
}

TEST_CASE("bi_bennett_predict") {
  Eigen::VectorXd w(1), x(1);
  w << 1.0;
  x << 2.0;
  CHECK(bi_bennett_predict(w, 0.0, -1.0, x) == doctest::Approx(2.0));
  w << 2.0;
  x << 0.0;
  CHECK(bi_bennett_predict(w, 1.0, -1.0, x) == doctest::Approx(1.0));

  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd wr(3), xr(3);
    for (int j = 0; j < 3; ++j) {
      wr(j) = g(rng);
      xr(j) = g(rng);
    }
    const double b = g(rng);
    double eta = g(rng);
    if (eta == 0.0) eta = 1.0;
    double dot = 0.0;
    for (int j = 0; j < 3; ++j) dot += wr(j) * xr(j);
    CHECK(bi_bennett_predict(wr, b, eta, xr) == doctest::Approx(-(dot + b) / eta));
  }
  CHECK_THROWS_AS(bi_bennett_predict(w, 0.0, 0.0, x), ConfigError);
}
