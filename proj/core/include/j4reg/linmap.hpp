#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "j4reg/dataset.hpp"

namespace j4reg {

/// Feed-forward network with tanh on every layer including the output.
/// Produces the feature map phi(x).
struct MlpNetwork {
  std::vector<Eigen::MatrixXd> weights;  // per layer, shape out x in
  std::vector<Eigen::VectorXd> biases;   // per layer, shape out

  static MlpNetwork random_init(const std::vector<Eigen::Index>& layer_dims,
                                std::uint64_t seed);

  std::vector<Eigen::Index> layer_dims() const;
  Eigen::Index input_dim() const { return weights.front().cols(); }
  Eigen::Index output_dim() const { return weights.back().rows(); }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  /// One row of phi per input row.
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x) const;

  void validate() const;
};

/// Class statistics of the equivalence images u_i = phi(x_i)/z_i and -u_i.
struct ScatterStats {
  Eigen::VectorXd mu_plus;
  Eigen::VectorXd mu_minus;  // always -mu_plus for equivalence batches
  double sw_trace = 0.0;
  double sb_trace = 0.0;
};

struct LinearHead {
  Eigen::VectorXd w;
  double train_mse = 0.0;
  double train_r2 = 0.0;
};

struct MlpGradients {
  std::vector<Eigen::MatrixXd> d_weights;
  std::vector<Eigen::VectorXd> d_biases;
};

struct J4TrainResult {
  MlpNetwork net;
  std::vector<double> loss_trace;  // one entry per epoch
};

ScatterStats scatter_stats(const Eigen::MatrixXd& phi, const Eigen::VectorXd& z);

/// trace(S_w) / (trace(S_b) + eps_div) over the equivalence images of
/// (phi, z). All |z_i| must be nonzero (callers pre-filter by tau).
double j4_loss(const Eigen::MatrixXd& phi, const Eigen::VectorXd& z, double eps_div);

/// Reverse-mode gradient of j4_loss(forward(x), z) with respect to every
/// weight and bias. Also reports the loss value at the current parameters.
MlpGradients j4_gradient(const MlpNetwork& net, const Eigen::MatrixXd& x,
                         const Eigen::VectorXd& z, double eps_div, double* loss_out = nullptr);

/// Full-batch gradient descent on the J4 loss on the targets as given (no
/// centering: the images divide by z, so targets shifted across zero blow
/// up). Samples with |z| < tau are excluded from the loss; tau <= 0 selects
/// the default of half the target standard deviation. Throws
/// ConvergenceError if the loss becomes NaN.
J4TrainResult train_j4(const RegressionDataset& ds, const std::vector<Eigen::Index>& arch,
                       double lr, int epochs, std::uint64_t seed, double tau = 0.0,
                       double eps_div = 1e-8);

/// Least squares fit of z ~ w.phi(x) by normal equations with a small ridge
/// jitter. Uses every sample of ds, including any the J4 loss dropped.
LinearHead fit_linear_head(const MlpNetwork& net, const RegressionDataset& ds);

/// Projection of mean-centered rows onto the top-k principal components.
Eigen::MatrixXd pca_project(const Eigen::MatrixXd& phi, Eigen::Index k);

/// head.w . phi(x - x0) + z0.
double predict(const MlpNetwork& net, const LinearHead& head, const ReferencePoint& ref,
               const Eigen::VectorXd& x);

}  // namespace j4reg
