#pragma once

#include <vector>

#include "splinenet/net/network.hpp"

namespace splinenet::net {

/// x^l = sum_i coeffs[i] * (x + nodes[i])^exponent for every real x.
struct PowerDecomposition {
  int power = 0;                 ///< l
  int exponent = 0;              ///< k (activation exponent)
  std::vector<double> nodes;     ///< k+1 equispaced nodes spanning [center-1, center+1]
  std::vector<double> coeffs;    ///< k+1 coefficients
  double bound = 0.0;            ///< M(l, k), envelope on |coeffs[i]|

  [[nodiscard]] double evaluate(double x) const;
};

/// Solves the coefficient-matching system for x^l in terms of shifted k-th
/// powers. Throws std::invalid_argument unless 1 <= l < exponent.
PowerDecomposition power_decomposition(int l, int exponent, double center = 0.0);

/// Same solve without the 1 <= l < k restriction (0 <= l <= k); used for the
/// square fragment when the activation exponent is 2.
PowerDecomposition power_decomposition_any(int l, int exponent, double center = 0.0);

/// M(l,k) = (k+1) k^k C(k, ceil(k/2)) max(M^(k+1), 1) / (2^k (ceil(k/2)!)^2 C(k,l)),
/// with M the largest node magnitude.
double power_decomposition_bound(int l, int exponent, double max_node);

/// One-hidden-layer network computing sum_l poly[l] x^l using max(., 0)^exponent
/// units built from the shared decomposition nodes, via
/// (x+b)^k = (x+b)_+^k + (-1)^k (-x-b)_+^k. Units that vanish on [lo, hi]
/// are dropped. Requires poly.size() - 1 <= exponent.
Network poly_net(const std::vector<double>& poly, int exponent, double lo = -1.0, double hi = 1.0);

}  // namespace splinenet::net
