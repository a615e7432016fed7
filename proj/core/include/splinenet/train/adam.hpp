#pragma once

#include <Eigen/Core>
#include <optional>

#include "splinenet/train/mlp.hpp"

namespace splinenet::train {

struct AdamState {
  Eigen::VectorXd m;  ///< first moments
  Eigen::VectorXd v;  ///< second moments
  long step = 0;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

AdamState adam_init(long size, double learning_rate = 1e-3);

/// One bias-corrected Adam update of p.theta. With weight_clip the affine
/// weights and biases are clamped to +-clip afterwards (layer-norm gains and
/// offsets are left alone). Throws std::invalid_argument on a size mismatch.
void adam_step(AdamState& s, MLPParams& p, const Eigen::VectorXd& grad,
               const std::optional<double>& weight_clip = std::nullopt);

}  // namespace splinenet::train
