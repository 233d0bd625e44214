#pragma once

#include <optional>
#include <string>

#include "j4reg/dataset.hpp"
#include "j4reg/linmap.hpp"

namespace j4reg {

/// Everything needed to map a raw input to a prediction: optional feature
/// scaler, reference point, feature map, and linear head.
struct TrainedModel {
  MlpNetwork net;
  LinearHead head;
  ReferencePoint ref;
  std::optional<StandardScaler> scaler;

  double predict(const Eigen::VectorXd& x) const;
};

/// Versioned plain-text model file: layer dims, row-major weight matrices,
/// biases, head vector, reference point, optional scaler.
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace j4reg
