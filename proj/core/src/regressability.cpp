#include "j4reg/regressability.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace j4reg {

std::vector<Eigen::Index> neighborhood(const Eigen::MatrixXd& points, Eigen::Index i,
                                       double d) {
  if (!(d > 0.0)) throw ConfigError("neighborhood radius must be positive");
  std::vector<Eigen::Index> out;
  const double d2 = d * d;
  for (Eigen::Index j = 0; j < points.rows(); ++j) {
    if ((points.row(j) - points.row(i)).squaredNorm() <= d2) out.push_back(j);
  }
  return out;
}

double classifiability_at(const Eigen::MatrixXd& points, const Eigen::VectorXd& labels,
                          Eigen::Index i, double d) {
  const auto nb = neighborhood(points, i, d);
  int plus = 0;
  for (const Eigen::Index j : nb) {
    if (labels(j) > 0.0) ++plus;
  }
  const double p_plus = static_cast<double>(plus) / static_cast<double>(nb.size());
  return (2.0 * p_plus - 1.0) * labels(i);
}

RegressabilityReport classifiability(const Eigen::MatrixXd& points,
                                     const Eigen::VectorXd& labels, double d) {
  if (points.rows() != labels.size()) throw DataError("points/labels length mismatch");
  if (points.rows() < 1) throw DataError("no points to score");

  const Eigen::Index n = points.rows();
  RegressabilityReport rep;
  rep.d = d;
  rep.per_sample.resize(static_cast<std::size_t>(n));
  rep.neighborhood_sizes.resize(static_cast<std::size_t>(n));

  double weighted = 0.0;
  double total_weight = 0.0;
  const double d2 = d * d;
  for (Eigen::Index i = 0; i < n; ++i) {
    int size = 0;
    int plus = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if ((points.row(j) - points.row(i)).squaredNorm() <= d2) {
        ++size;
        if (labels(j) > 0.0) ++plus;
      }
    }
    const double p_plus = static_cast<double>(plus) / static_cast<double>(size);
    const double c_i = (2.0 * p_plus - 1.0) * labels(i);
    const double weight = static_cast<double>(size) / static_cast<double>(n);
    rep.per_sample[static_cast<std::size_t>(i)] = c_i;
    rep.neighborhood_sizes[static_cast<std::size_t>(i)] = size;
    weighted += weight * c_i;
    total_weight += weight;
  }
  rep.score = weighted / total_weight;
  return rep;
}

double percentile_pair_distance(const Eigen::MatrixXd& points, double pct,
                                std::uint64_t seed, std::size_t max_pairs) {
  if (!(pct > 0.0) || !(pct < 100.0)) throw ConfigError("percentile must be in (0, 100)");
  const Eigen::Index n = points.rows();
  if (n < 2) throw DataError("need at least two points for pairwise distances");

  std::vector<double> dist;
  const std::size_t total = static_cast<std::size_t>(n) * (static_cast<std::size_t>(n) - 1) / 2;
  if (total <= max_pairs) {
    dist.reserve(total);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        dist.push_back((points.row(i) - points.row(j)).norm());
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    dist.reserve(max_pairs);
    while (dist.size() < max_pairs) {
      const Eigen::Index i = pick(rng);
      const Eigen::Index j = pick(rng);
      if (i == j) continue;
      dist.push_back((points.row(i) - points.row(j)).norm());
    }
  }
  std::sort(dist.begin(), dist.end());
  const double rank = pct / 100.0 * static_cast<double>(dist.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(rank);
  const std::size_t hi = std::min(lo + 1, dist.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return dist[lo] * (1.0 - frac) + dist[hi] * frac;
}

RegressabilityReport regressability(const RegressionDataset& ds, double d_percentile,
                                    double tau, std::uint64_t seed) {
  auto [centered, ref] = center(ds);
  const double tau_eff = tau > 0.0 ? tau : default_tau(centered.targets);
  if (!(tau_eff > 0.0)) {
    throw DataError("targets are constant after centering; every sample would be dropped");
  }
  const auto eq = to_classification(centered, tau_eff);

  double d = percentile_pair_distance(eq.points, d_percentile, seed);
  if (d <= 0.0) {
    // degenerate geometry (many coincident points): fall back to the smallest
    // positive pair distance, or an arbitrary unit for fully coincident data
    double smallest = 0.0;
    for (Eigen::Index i = 0; i < eq.points.rows() && smallest == 0.0; ++i) {
      for (Eigen::Index j = i + 1; j < eq.points.rows(); ++j) {
        const double dij = (eq.points.row(i) - eq.points.row(j)).norm();
        if (dij > 0.0 && (smallest == 0.0 || dij < smallest)) smallest = dij;
      }
    }
    d = smallest > 0.0 ? smallest / 2.0 : 1.0;
  }

  RegressabilityReport rep = classifiability(eq.points, eq.labels, d);
  rep.d_percentile = d_percentile;
  return rep;
}

}  // namespace j4reg
