#pragma once

#include <limits>

#include "splinenet/net/network.hpp"

namespace splinenet::net {

/// Closed interval of values a channel can take; used only to drop units
/// that vanish identically. The realized identities hold for all reals.
struct Interval {
  double lo = -1.0;
  double hi = 1.0;

  static Interval everywhere() {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
};

/// x -> x^2 with one hidden layer of max(., 0)^(k-1) units. Requires k >= 3.
Network build_square_net(int k, Interval domain = {});

/// x -> x with one hidden layer of max(., 0)^(k-1) units. Requires k >= 3.
Network build_identity_net(int k, Interval domain = {});

/// (x, y) -> x y via x y = ((x+y)^2 - (x-y)^2) / 4, one hidden layer.
Network build_mult2_net(int k, Interval x = {}, Interval y = {});

/// Product of n inputs in [-1, 1]. Pairs are multiplied stage by stage; an
/// unpaired channel goes through the identity net (a product with the
/// padding constant 1). Depth ceil(log2 n). Requires n >= 2, k >= 3.
Network build_mult_net(int n, int k);

/// Network with no input dependence whose single output equals `count`,
/// realized as `count` units max(0 x + 1, 0)^exponent = 1 with output weight 1.
Network constant_bank_net(int in_dim, int count, int exponent);

}  // namespace splinenet::net
