#include "j4reg/equivalence.hpp"

#include <cmath>

namespace j4reg {

double default_tau(const Eigen::VectorXd& centered_targets) {
  const Eigen::Index m = centered_targets.size();
  if (m == 0) return 1e-6;
  const double mean = centered_targets.mean();
  const double var = (centered_targets.array() - mean).square().sum() / static_cast<double>(m);
  return 1e-6 * std::sqrt(var);
}

EquivalentClassificationDataset to_classification(const RegressionDataset& centered,
                                                  double tau) {
  centered.validate();
  if (!(tau > 0.0)) throw ConfigError("tau must be positive");

  std::vector<Eigen::Index> keep, dropped;
  for (Eigen::Index i = 0; i < centered.num_samples(); ++i) {
    (std::abs(centered.targets(i)) >= tau ? keep : dropped).push_back(i);
  }
  if (keep.empty()) {
    throw DataError("all " + std::to_string(centered.num_samples()) +
                    " samples have |target| < tau = " + std::to_string(tau));
  }

  const Eigen::Index mp = static_cast<Eigen::Index>(keep.size());
  EquivalentClassificationDataset out;
  out.points.resize(2 * mp, centered.num_features());
  out.labels.resize(2 * mp);
  out.source_index.resize(static_cast<std::size_t>(2 * mp));
  for (Eigen::Index r = 0; r < mp; ++r) {
    const Eigen::Index i = keep[static_cast<std::size_t>(r)];
    const Eigen::RowVectorXd u = centered.features.row(i) / centered.targets(i);
    out.points.row(2 * r) = u;
    out.labels(2 * r) = 1.0;
    out.source_index[static_cast<std::size_t>(2 * r)] = i;
    out.points.row(2 * r + 1) = -u;
    out.labels(2 * r + 1) = -1.0;
    out.source_index[static_cast<std::size_t>(2 * r + 1)] = i;
  }
  out.dropped = std::move(dropped);
  return out;
}

double predict_from_weights(const Eigen::VectorXd& w, const ReferencePoint& ref,
                            const Eigen::VectorXd& x) {
  if (w.size() != x.size() || w.size() != ref.x0.size()) {
    throw ConfigError("dimension mismatch in predict_from_weights");
  }
  return w.dot(x - ref.x0) + ref.z0;
}

BiBennettDataset bi_bennett_transform(const RegressionDataset& ds, double epsilon) {
  ds.validate();
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");

  const Eigen::Index m = ds.num_samples();
  const Eigen::Index n = ds.num_features();
  BiBennettDataset out;
  out.epsilon = epsilon;
  out.points.resize(2 * m, n + 1);
  out.labels.resize(2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    out.points.row(2 * i).head(n) = ds.features.row(i);
    out.points(2 * i, n) = ds.targets(i) + epsilon;
    out.labels(2 * i) = 1.0;
    out.points.row(2 * i + 1).head(n) = ds.features.row(i);
    out.points(2 * i + 1, n) = ds.targets(i) - epsilon;
    out.labels(2 * i + 1) = -1.0;
  }
  return out;
}

double bi_bennett_predict(const Eigen::VectorXd& w, double b, double eta,
                          const Eigen::VectorXd& x) {
  if (eta == 0.0) throw ConfigError("eta must be nonzero");
  if (w.size() != x.size()) throw ConfigError("dimension mismatch in bi_bennett_predict");
  return -(w.dot(x) + b) / eta;
}

void symmetrize_paired_multipliers(Eigen::VectorXd& lambda) {
  if (lambda.size() % 2 != 0) throw ConfigError("multiplier vector is not paired");
  for (Eigen::Index r = 0; r < lambda.size() / 2; ++r) {
    const double avg = 0.5 * (lambda(2 * r) + lambda(2 * r + 1));
    lambda(2 * r) = avg;
    lambda(2 * r + 1) = avg;
  }
}

}  // namespace j4reg
