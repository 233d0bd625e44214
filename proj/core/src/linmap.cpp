#include "j4reg/linmap.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "j4reg/equivalence.hpp"

namespace j4reg {

MlpNetwork MlpNetwork::random_init(const std::vector<Eigen::Index>& layer_dims,
                                   std::uint64_t seed) {
  if (layer_dims.size() < 2) throw ConfigError("network needs at least input and output dims");
  for (const Eigen::Index d : layer_dims) {
    if (d < 1) throw ConfigError("layer dimensions must be positive");
  }
  std::mt19937_64 rng(seed);
  MlpNetwork net;
  for (std::size_t l = 1; l < layer_dims.size(); ++l) {
    const Eigen::Index fan_in = layer_dims[l - 1];
    const Eigen::Index fan_out = layer_dims[l];
    const double r = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> u(-r, r);
    Eigen::MatrixXd w(fan_out, fan_in);
    for (Eigen::Index i = 0; i < fan_out; ++i) {
      for (Eigen::Index j = 0; j < fan_in; ++j) w(i, j) = u(rng);
    }
    Eigen::VectorXd b(fan_out);
    for (Eigen::Index i = 0; i < fan_out; ++i) b(i) = u(rng);
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  return net;
}

std::vector<Eigen::Index> MlpNetwork::layer_dims() const {
  std::vector<Eigen::Index> dims;
  dims.push_back(input_dim());
  for (const auto& w : weights) dims.push_back(w.rows());
  return dims;
}

void MlpNetwork::validate() const {
  if (weights.empty() || weights.size() != biases.size()) {
    throw ConfigError("malformed network");
  }
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (weights[l].rows() != biases[l].size()) throw ConfigError("weight/bias shape mismatch");
    if (l > 0 && weights[l].cols() != weights[l - 1].rows()) {
      throw ConfigError("inconsistent layer dimensions");
    }
    if (!weights[l].allFinite() || !biases[l].allFinite()) {
      throw ConfigError("network parameters are not finite");
    }
  }
}

Eigen::VectorXd MlpNetwork::forward(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim()) throw ConfigError("input dimension mismatch");
  Eigen::VectorXd a = x;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    a = ((weights[l] * a + biases[l]).array().tanh()).matrix();
  }
  return a;
}

Eigen::MatrixXd MlpNetwork::forward_batch(const Eigen::MatrixXd& x) const {
  if (x.cols() != input_dim()) throw ConfigError("input dimension mismatch");
  Eigen::MatrixXd a = x;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    a = ((a * weights[l].transpose()).rowwise() + biases[l].transpose()).array().tanh();
  }
  return a;
}

ScatterStats scatter_stats(const Eigen::MatrixXd& phi, const Eigen::VectorXd& z) {
  if (phi.rows() != z.size()) throw DataError("phi/z length mismatch");
  if (phi.rows() < 1) throw DataError("empty batch");
  const Eigen::Index m = phi.rows();

  Eigen::MatrixXd u = phi.array().colwise() / z.array();
  ScatterStats st;
  st.mu_plus = u.colwise().mean();
  st.mu_minus = -st.mu_plus;
  st.sw_trace = (u.rowwise() - st.mu_plus.transpose()).squaredNorm() / static_cast<double>(m);
  st.sb_trace = 4.0 * st.mu_plus.squaredNorm();
  return st;
}

double j4_loss(const Eigen::MatrixXd& phi, const Eigen::VectorXd& z, double eps_div) {
  if (!(eps_div > 0.0)) throw ConfigError("eps_div must be positive");
  const ScatterStats st = scatter_stats(phi, z);
  return st.sw_trace / (st.sb_trace + eps_div);
}

MlpGradients j4_gradient(const MlpNetwork& net, const Eigen::MatrixXd& x,
                         const Eigen::VectorXd& z, double eps_div, double* loss_out) {
  net.validate();
  if (x.rows() != z.size()) throw DataError("batch/target length mismatch");
  if (x.rows() < 1) throw DataError("empty batch");
  const Eigen::Index m = x.rows();
  const double mf = static_cast<double>(m);

  // forward, keeping every activation
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(net.weights.size() + 1);
  acts.push_back(x);
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    acts.push_back(((acts.back() * net.weights[l].transpose()).rowwise() +
                    net.biases[l].transpose())
                       .array()
                       .tanh());
  }
  const Eigen::MatrixXd& phi = acts.back();

  const Eigen::MatrixXd u = phi.array().colwise() / z.array();
  const Eigen::RowVectorXd mu = u.colwise().mean();
  const Eigen::MatrixXd centered = u.rowwise() - mu;
  const double sw = centered.squaredNorm() / mf;
  const double sb = 4.0 * mu.squaredNorm();
  const double denom = sb + eps_div;
  const double loss = sw / denom;
  if (loss_out != nullptr) *loss_out = loss;

  // dL/du_i = [(2/m)(u_i - mu) * denom - sw * (8/m) mu] / denom^2
  Eigen::MatrixXd d_u =
      (2.0 / mf / denom) * centered -
      ((8.0 * sw) / (mf * denom * denom)) * Eigen::MatrixXd::Ones(m, 1) * mu;
  Eigen::MatrixXd grad = d_u.array().colwise() / z.array();  // dL/dphi

  MlpGradients g;
  g.d_weights.resize(net.weights.size());
  g.d_biases.resize(net.weights.size());
  for (std::size_t l = net.weights.size(); l-- > 0;) {
    const Eigen::MatrixXd dz =
        grad.array() * (1.0 - acts[l + 1].array().square());  // tanh'
    g.d_weights[l] = dz.transpose() * acts[l];
    g.d_biases[l] = dz.colwise().sum();
    if (l > 0) grad = dz * net.weights[l];
  }
  return g;
}

J4TrainResult train_j4(const RegressionDataset& ds, const std::vector<Eigen::Index>& arch,
                       double lr, int epochs, std::uint64_t seed, double tau,
                       double eps_div) {
  ds.validate();
  if (!(lr > 0.0)) throw ConfigError("learning rate must be positive");
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (arch.size() < 2) throw ConfigError("architecture needs at least input and output dims");
  if (arch.front() != ds.num_features()) {
    throw ConfigError("architecture input dim " + std::to_string(arch.front()) +
                      " does not match dataset feature count " +
                      std::to_string(ds.num_features()));
  }

  // Training needs a far stronger small-|z| guard than the exact transform:
  // every kept sample contributes an image phi(x)/z, and a target an order of
  // magnitude below the spread turns one noisy sample into the whole loss.
  // Half the target standard deviation keeps images within a few spread units.
  const double std_z = ds.num_samples() > 1
                           ? std::sqrt((ds.targets.array() - ds.targets.mean()).square().sum() /
                                       static_cast<double>(ds.num_samples() - 1))
                           : 0.0;
  const double tau_eff = tau > 0.0 ? tau : 0.5 * std_z;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ds.num_samples(); ++i) {
    if (std::abs(ds.targets(i)) >= tau_eff) keep.push_back(i);
  }
  if (keep.empty()) throw DataError("all targets below tau; nothing to train on");

  Eigen::MatrixXd x(static_cast<Eigen::Index>(keep.size()), ds.num_features());
  Eigen::VectorXd z(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t r = 0; r < keep.size(); ++r) {
    x.row(static_cast<Eigen::Index>(r)) = ds.features.row(keep[r]);
    z(static_cast<Eigen::Index>(r)) = ds.targets(keep[r]);
  }

  J4TrainResult res;
  res.net = MlpNetwork::random_init(arch, seed);
  res.loss_trace.reserve(static_cast<std::size_t>(epochs));
  for (int epoch = 0; epoch < epochs; ++epoch) {
    double loss = 0.0;
    const MlpGradients g = j4_gradient(res.net, x, z, eps_div, &loss);
    if (!std::isfinite(loss)) {
      throw ConvergenceError("J4 loss diverged at epoch " + std::to_string(epoch));
    }
    res.loss_trace.push_back(loss);
    for (std::size_t l = 0; l < res.net.weights.size(); ++l) {
      res.net.weights[l] -= lr * g.d_weights[l];
      res.net.biases[l] -= lr * g.d_biases[l].transpose();
    }
  }
  return res;
}

LinearHead fit_linear_head(const MlpNetwork& net, const RegressionDataset& ds) {
  ds.validate();
  if (ds.num_samples() < 1) throw DataError("empty dataset");
  const Eigen::MatrixXd phi = net.forward_batch(ds.features);
  const Eigen::Index p = phi.cols();

  Eigen::MatrixXd gram = phi.transpose() * phi;
  const double jitter = 1e-10 * gram.trace() / static_cast<double>(p);
  gram.diagonal().array() += jitter > 0.0 ? jitter : 1e-12;

  LinearHead head;
  head.w = gram.ldlt().solve(phi.transpose() * ds.targets);

  const Eigen::VectorXd resid = phi * head.w - ds.targets;
  head.train_mse = resid.squaredNorm() / static_cast<double>(ds.num_samples());
  const double ss_tot = (ds.targets.array() - ds.targets.mean()).square().sum();
  head.train_r2 = ss_tot > 0.0 ? 1.0 - resid.squaredNorm() / ss_tot : 0.0;
  return head;
}

Eigen::MatrixXd pca_project(const Eigen::MatrixXd& phi, Eigen::Index k) {
  if (k < 1 || k > phi.cols()) throw ConfigError("component count out of range");
  const Eigen::RowVectorXd mean = phi.colwise().mean();
  const Eigen::MatrixXd centered = phi.rowwise() - mean;
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / std::max<double>(1.0, static_cast<double>(phi.rows() - 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  // eigenvalues ascending; take the last k columns in reverse
  Eigen::MatrixXd components(phi.cols(), k);
  for (Eigen::Index j = 0; j < k; ++j) {
    components.col(j) = eig.eigenvectors().col(phi.cols() - 1 - j);
  }
  return centered * components;
}

double predict(const MlpNetwork& net, const LinearHead& head, const ReferencePoint& ref,
               const Eigen::VectorXd& x) {
  if (x.size() != ref.x0.size()) throw ConfigError("input/reference dimension mismatch");
  return head.w.dot(net.forward(x - ref.x0)) + ref.z0;
}

}  // namespace j4reg
