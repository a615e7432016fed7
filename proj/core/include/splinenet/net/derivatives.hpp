#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "splinenet/net/network.hpp"

namespace splinenet::net {

/// Value and derivatives of every network output at one point.
struct NetDerivatives {
  Eigen::VectorXd value;                 ///< m outputs
  Eigen::MatrixXd gradient;              ///< m x d Jacobian
  std::vector<Eigen::MatrixXd> hessian;  ///< m matrices d x d (order 2 only)
  /// Set when order 2 passed through an exponent-1 unit: its second
  /// derivative is taken as zero, which is wrong exactly at the kink.
  bool kink_convention_used = false;
};

/// Forward-mode derivatives of order 1 or 2. At z = 0 the derivative of
/// max(z,0)^t uses the right-limit convention (value 0 for t >= 2, and 0
/// for t = 1 as well). Throws std::invalid_argument for other orders or a
/// dimension mismatch.
NetDerivatives net_deriv(const Network& net, std::span<const double> x, int order);

/// Gradient of output 0.
Eigen::VectorXd net_gradient(const Network& net, std::span<const double> x);

}  // namespace splinenet::net
