#include "splinenet/train/adam.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splinenet::train {

AdamState adam_init(long size, double learning_rate) {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("adam_init: learning rate must be positive");
  AdamState s;
  s.m = Eigen::VectorXd::Zero(size);
  s.v = Eigen::VectorXd::Zero(size);
  s.learning_rate = learning_rate;
  return s;
}

void adam_step(AdamState& s, MLPParams& p, const Eigen::VectorXd& grad, const std::optional<double>& weight_clip) {
  if (grad.size() != p.size() || s.m.size() != p.size()) {
    throw std::invalid_argument("adam_step: parameter, gradient and state sizes differ");
  }
  ++s.step;
  s.m = s.beta1 * s.m + (1.0 - s.beta1) * grad;
  s.v = s.beta2 * s.v + (1.0 - s.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
  const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
  p.theta.array() -= s.learning_rate * (s.m.array() / c1) / ((s.v.array() / c2).sqrt() + s.eps);
  if (weight_clip) {
    const double c = *weight_clip;
    const Eigen::VectorXd mask = p.linear_mask();
    for (long i = 0; i < p.size(); ++i) {
      if (mask[i] != 0.0) p.theta[i] = std::clamp(p.theta[i], -c, c);
    }
  }
}

}  // namespace splinenet::train
