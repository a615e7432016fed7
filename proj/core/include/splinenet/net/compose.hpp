#pragma once

#include <vector>

#include "splinenet/net/network.hpp"

namespace splinenet::net {

/// Affine network x -> A x + c.
Network affine_net(const Eigen::MatrixXd& a, const Eigen::VectorXd& c);

/// Affine network picking the listed coordinates of an in_dim input.
Network select_net(int in_dim, const std::vector<int>& channels);

/// One hidden layer of units max(A x + c, 0)^exponent, returned as outputs.
Network activation_net(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, int exponent);

/// second(first(x)): the affine output of `first` is folded into the first
/// layer of `second`, so depth(result) = depth(first) + depth(second).
Network compose(const Network& first, const Network& second);

/// All parts read the same input; outputs are concatenated in order.
/// Throws std::invalid_argument unless input dims and depths agree.
Network parallel(const std::vector<Network>& parts);

/// Block-diagonal combination: part p reads its own slice of the
/// concatenated input. Depths must agree.
Network stack(const std::vector<Network>& parts);

/// `unary` applied independently to each of n channels.
Network channelwise(const Network& unary, int n);

/// Splits hidden units whose outgoing weights exceed 1 in magnitude into
/// ceil(max |w|) identical copies sharing the outgoing weight equally.
/// Realized function is unchanged. Processes layers front to back.
Network replicate_for_bound(const Network& net);

/// Removes hidden units whose outgoing weights are all zero, back to front.
Network remove_dead_units(const Network& net);

}  // namespace splinenet::net
