#pragma once

#include "splinenet/net/network.hpp"

namespace splinenet::net {

/// Network computing d(net)/d(x_axis) exactly, for a scalar-output network
/// whose hidden units all use one exponent t >= 2. The chain rule
/// D_l = t max(z_l,0)^(t-1) * (W_l D_{l-1}) is realized layer by layer:
/// the elementwise products go through multiplication subnetworks and the
/// forward values are carried along by identity subnetworks. The result uses
/// exponents t-1 and t only and has 1 + 2(L-1) hidden layers for L >= 1.
/// Throws std::invalid_argument if the exponent condition fails or the
/// axis is out of range.
Network build_derivative_net(const Network& net, int axis);

}  // namespace splinenet::net
