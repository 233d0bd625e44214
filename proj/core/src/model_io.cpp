#include "j4reg/model_io.hpp"

#include <fstream>
#include <sstream>

namespace j4reg {

double TrainedModel::predict(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd xs = scaler ? scaler->apply(x) : x;
  return j4reg::predict(net, head, ref, xs);
}

namespace {

constexpr const char* kMagic = "j4reg-model";
constexpr int kVersion = 1;

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
  out << v.size();
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << v(i);
  out << '\n';
}

Eigen::VectorXd read_vector(std::istream& in) {
  Eigen::Index n = 0;
  if (!(in >> n) || n < 0) throw DataError("malformed model file: bad vector length");
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(in >> v(i))) throw DataError("malformed model file: truncated vector");
  }
  return v;
}

}  // namespace

void save_model(const TrainedModel& model, const std::string& path) {
  model.net.validate();
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model file: " + path);
  out.precision(17);

  out << kMagic << ' ' << kVersion << '\n';
  const auto dims = model.net.layer_dims();
  out << "dims";
  for (const auto d : dims) out << ' ' << d;
  out << '\n';
  for (std::size_t l = 0; l < model.net.weights.size(); ++l) {
    const auto& w = model.net.weights[l];
    out << "layer " << l << '\n';
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) out << w(i, j) << (j + 1 < w.cols() ? ' ' : '\n');
    }
    out << "bias ";
    write_vector(out, model.net.biases[l]);
  }
  out << "head ";
  write_vector(out, model.head.w);
  out << "head_mse " << model.head.train_mse << " head_r2 " << model.head.train_r2 << '\n';
  out << "ref ";
  write_vector(out, model.ref.x0);
  out << "ref_z0 " << model.ref.z0 << '\n';
  out << "scaler " << (model.scaler ? 1 : 0) << '\n';
  if (model.scaler) {
    out << "mean ";
    write_vector(out, model.scaler->mean);
    out << "scale ";
    write_vector(out, model.scaler->scale);
  }
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file: " + path);

  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != kMagic) throw DataError("not a model file: " + path);
  if (version != kVersion) {
    throw DataError("unsupported model version " + std::to_string(version));
  }

  std::string tok;
  in >> tok;
  if (tok != "dims") throw DataError("malformed model file: missing dims");
  std::string rest;
  std::getline(in, rest);
  std::istringstream ds(rest);
  std::vector<Eigen::Index> dims;
  Eigen::Index d = 0;
  while (ds >> d) dims.push_back(d);
  if (dims.size() < 2) throw DataError("malformed model file: bad dims");

  TrainedModel model;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    std::size_t idx = 0;
    in >> tok >> idx;
    if (tok != "layer" || idx != l) throw DataError("malformed model file: layer order");
    Eigen::MatrixXd w(dims[l + 1], dims[l]);
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        if (!(in >> w(i, j))) throw DataError("malformed model file: truncated layer");
      }
    }
    in >> tok;
    if (tok != "bias") throw DataError("malformed model file: missing bias");
    model.net.weights.push_back(std::move(w));
    model.net.biases.push_back(read_vector(in));
  }

  in >> tok;
  if (tok != "head") throw DataError("malformed model file: missing head");
  model.head.w = read_vector(in);
  in >> tok >> model.head.train_mse >> tok >> model.head.train_r2;
  in >> tok;
  if (tok != "ref") throw DataError("malformed model file: missing reference point");
  model.ref.x0 = read_vector(in);
  in >> tok >> model.ref.z0;
  int has_scaler = 0;
  in >> tok >> has_scaler;
  if (tok != "scaler") throw DataError("malformed model file: missing scaler flag");
  if (has_scaler != 0) {
    StandardScaler sc;
    in >> tok;
    sc.mean = read_vector(in);
    in >> tok;
    sc.scale = read_vector(in);
    model.scaler = std::move(sc);
  }
  model.net.validate();
  return model;
}

}  // namespace j4reg
