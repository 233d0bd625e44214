#include "j4reg/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace j4reg {

void RegressionDataset::validate() const {
  if (features.rows() != targets.size()) {
    throw DataError("feature row count (" + std::to_string(features.rows()) +
                    ") does not match target length (" + std::to_string(targets.size()) + ")");
  }
  if (!features.allFinite() || !targets.allFinite()) {
    throw DataError("dataset contains NaN or infinite entries");
  }
}

Eigen::VectorXd StandardScaler::apply(const Eigen::VectorXd& x) const {
  return (x - mean).cwiseQuotient(scale);
}

SynthFunction synth_function_from_name(const std::string& name) {
  if (name == "linear") return SynthFunction::kLinear;
  if (name == "square") return SynthFunction::kSquare;
  if (name == "cube") return SynthFunction::kCube;
  if (name == "pow5") return SynthFunction::kPow5;
  if (name == "sin") return SynthFunction::kSin;
  if (name == "sin_sq") return SynthFunction::kSinSq;
  if (name == "square_plus_sin_sq") return SynthFunction::kSquarePlusSinSq;
  if (name == "poly_a") return SynthFunction::kPolyA;
  if (name == "poly_b") return SynthFunction::kPolyB;
  if (name == "poly_c") return SynthFunction::kPolyC;
  throw ConfigError("unknown synthetic function '" + name + "'");
}

std::string synth_function_name(SynthFunction f) {
  switch (f) {
    case SynthFunction::kLinear: return "linear";
    case SynthFunction::kSquare: return "square";
    case SynthFunction::kCube: return "cube";
    case SynthFunction::kPow5: return "pow5";
    case SynthFunction::kSin: return "sin";
    case SynthFunction::kSinSq: return "sin_sq";
    case SynthFunction::kSquarePlusSinSq: return "square_plus_sin_sq";
    case SynthFunction::kPolyA: return "poly_a";
    case SynthFunction::kPolyB: return "poly_b";
    case SynthFunction::kPolyC: return "poly_c";
  }
  throw ConfigError("unknown synthetic function id");
}

double synth_eval(SynthFunction f, double x) {
  switch (f) {
    case SynthFunction::kLinear: return x;
    case SynthFunction::kSquare: return x * x;
    case SynthFunction::kCube: return x * x * x;
    case SynthFunction::kPow5: return std::pow(x, 5);
    case SynthFunction::kSin: return std::sin(x);
    case SynthFunction::kSinSq: return std::sin(x * x);
    case SynthFunction::kSquarePlusSinSq: return x * x + std::sin(x * x);
    case SynthFunction::kPolyA: {
      const double a = (x + 1.0) * (x - 3.0);
      return a * a;
    }
    case SynthFunction::kPolyB: {
      const double c = (x + 3.0);
      const double p = (x - 2.0) * (x + 1.0) * (x + 2.0);
      return c * c * c * p * p;
    }
    case SynthFunction::kPolyC: {
      const double c = (x + 3.0);
      const double p = (x + 1.0) * (x + 2.0);
      return c * c * p * p;
    }
  }
  throw ConfigError("unknown synthetic function id");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, std::size_t row, const std::string& col) {
  const std::string s = trim(raw);
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError("non-numeric cell '" + raw + "' at row " + std::to_string(row) +
                    ", column '" + col + "'");
  }
}

}  // namespace

RegressionDataset load_csv(const std::string& path, const std::string& target_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: " + path);
  if (!line.empty() && line.front() == '\xEF') line = line.substr(3);  // UTF-8 BOM

  std::vector<std::string> header = split_line(line);
  for (auto& h : header) h = trim(h);

  int target_idx = -1;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == target_column) {
      if (target_idx >= 0) throw DataError("column '" + target_column + "' appears more than once");
      target_idx = static_cast<int>(j);
    }
  }
  if (target_idx < 0) throw DataError("no column named '" + target_column + "' in " + path);

  std::vector<std::vector<double>> rows;
  std::vector<double> zs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw DataError("row " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                      " cells, expected " + std::to_string(header.size()));
    }
    std::vector<double> feats;
    feats.reserve(header.size() - 1);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const double v = parse_cell(cells[j], lineno, header[j]);
      if (static_cast<int>(j) == target_idx) {
        zs.push_back(v);
      } else {
        feats.push_back(v);
      }
    }
    rows.push_back(std::move(feats));
  }
  if (rows.empty()) throw DataError("no data rows in " + path);

  RegressionDataset ds;
  const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index n = static_cast<Eigen::Index>(header.size()) - 1;
  ds.features.resize(m, n);
  ds.targets.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) ds.features(i, j) = rows[i][j];
    ds.targets(i) = zs[i];
  }
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (static_cast<int>(j) != target_idx) ds.feature_names.push_back(header[j]);
  }
  ds.source = path;
  ds.validate();
  return ds;
}

void save_csv(const RegressionDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out.precision(17);
  for (Eigen::Index j = 0; j < ds.num_features(); ++j) {
    const std::string name = static_cast<std::size_t>(j) < ds.feature_names.size()
                                 ? ds.feature_names[j]
                                 : "x" + std::to_string(j);
    out << name << ',';
  }
  out << "target\n";
  for (Eigen::Index i = 0; i < ds.num_samples(); ++i) {
    for (Eigen::Index j = 0; j < ds.num_features(); ++j) out << ds.features(i, j) << ',';
    out << ds.targets(i) << '\n';
  }
}

std::pair<RegressionDataset, ReferencePoint> center(const RegressionDataset& ds) {
  ds.validate();
  if (ds.num_samples() < 1) throw DataError("cannot center an empty dataset");
  ReferencePoint ref;
  ref.x0 = ds.features.colwise().mean();
  ref.z0 = ds.targets.mean();
  RegressionDataset out = ds;
  out.features.rowwise() -= ref.x0.transpose();
  out.targets.array() -= ref.z0;
  return {std::move(out), std::move(ref)};
}

std::pair<RegressionDataset, StandardScaler> standardize(const RegressionDataset& ds) {
  ds.validate();
  StandardScaler sc;
  sc.mean = ds.features.colwise().mean();
  sc.scale.resize(ds.num_features());
  const double m = static_cast<double>(ds.num_samples());
  for (Eigen::Index j = 0; j < ds.num_features(); ++j) {
    const double var = (ds.features.col(j).array() - sc.mean(j)).square().sum() / m;
    const double sd = std::sqrt(var);
    sc.scale(j) = sd > 0.0 ? sd : 1.0;
  }
  RegressionDataset out = ds;
  out.features = (ds.features.rowwise() - sc.mean.transpose()).array().rowwise() /
                 sc.scale.transpose().array();
  return {std::move(out), std::move(sc)};
}

FoldAssignment split_folds(const RegressionDataset& ds, int k, std::uint64_t seed) {
  const Eigen::Index m = ds.num_samples();
  if (k < 2) throw ConfigError("fold count must be at least 2, got " + std::to_string(k));
  if (m < k) throw ConfigError("dataset has " + std::to_string(m) + " samples, fewer than k=" +
                               std::to_string(k));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  FoldAssignment fa;
  fa.k = k;
  fa.seed = seed;
  fa.fold_of_sample.assign(static_cast<std::size_t>(m), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    fa.fold_of_sample[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos % k);
  }
  return fa;
}

RegressionDataset synth_generate(SynthFunction f, Eigen::Index m, double domain_lo,
                                 double domain_hi, double noise_sigma, std::uint64_t seed) {
  if (m < 1) throw ConfigError("sample count must be positive");
  if (!(domain_lo < domain_hi)) throw ConfigError("empty domain");
  if (noise_sigma < 0.0) throw ConfigError("noise sigma must be nonnegative");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(domain_lo, domain_hi);
  std::normal_distribution<double> noise(0.0, 1.0);

  RegressionDataset ds;
  ds.features.resize(m, 1);
  ds.targets.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double x = ux(rng);
    ds.features(i, 0) = x;
    ds.targets(i) = synth_eval(f, x) + (noise_sigma > 0.0 ? noise_sigma * noise(rng) : 0.0);
  }
  ds.feature_names = {"x"};
  ds.source = "synth:" + synth_function_name(f);
  return ds;
}

std::pair<RegressionDataset, RegressionDataset> split_by_fold(const RegressionDataset& ds,
                                                              const FoldAssignment& folds,
                                                              int test_fold) {
  if (folds.fold_of_sample.size() != static_cast<std::size_t>(ds.num_samples())) {
    throw ConfigError("fold assignment does not match dataset size");
  }
  std::vector<Eigen::Index> train_idx, test_idx;
  for (std::size_t i = 0; i < folds.fold_of_sample.size(); ++i) {
    (folds.fold_of_sample[i] == test_fold ? test_idx : train_idx)
        .push_back(static_cast<Eigen::Index>(i));
  }
  auto take = [&](const std::vector<Eigen::Index>& idx) {
    RegressionDataset out;
    out.features.resize(static_cast<Eigen::Index>(idx.size()), ds.num_features());
    out.targets.resize(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r) {
      out.features.row(static_cast<Eigen::Index>(r)) = ds.features.row(idx[r]);
      out.targets(static_cast<Eigen::Index>(r)) = ds.targets(idx[r]);
    }
    out.feature_names = ds.feature_names;
    out.source = ds.source;
    return out;
  };
  return {take(train_idx), take(test_idx)};
}

}  // namespace j4reg
