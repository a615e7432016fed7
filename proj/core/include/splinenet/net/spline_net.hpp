#pragma once

#include <string>
#include <vector>

#include "splinenet/net/network.hpp"
#include "splinenet/spline/knot_vector.hpp"
#include "splinenet/spline/quasi_interpolant.hpp"

namespace splinenet::net {

enum class BuildMode { plain, bounded };

std::string to_string(BuildMode mode);
BuildMode parse_build_mode(const std::string& text);

/// Bounded mode is supported for k <= 5, N <= 32, d <= 2.
struct BoundedEnvelope {
  static constexpr int max_order = 5;
  static constexpr int max_interior = 32;
  static constexpr int max_dim = 2;
};

/// Factor by which each restoration stage multiplies a channel.
inline constexpr int kRestoreFactor = 4;

enum class SplineRegime { left, interior, right };

/// left: support starts at a repeated knot 0; right: support ends at a
/// repeated knot 1 (and not left); interior: all knots simple.
SplineRegime spline_regime(const spline::KnotVector& kv, int i);

/// B_i on [0,1] as sum_m poly[m] x^m + sum_j knot_weights[j] (x - j/N)_+^(k-1)
/// with m < k-1 and j = 0..N-1. Computed from the right Taylor expansion at 0
/// and the jumps of the (k-1)-th derivative at the interior knots.
struct TruncatedPowerForm {
  std::vector<double> poly;
  std::vector<double> knot_weights;
};
TruncatedPowerForm truncated_power_form(const spline::KnotVector& kv, int i);

/// Interior B_i: N^(k-1)/(k-1)! (-1)^j C(k,j) on the knot t_i + j/N, as
/// knot_weights (terms at x = 1 are dropped). Throws unless i is interior.
TruncatedPowerForm interior_truncated_power_form(const spline::KnotVector& kv, int i);

/// Number of restoration stages used per axis in bounded mode (depends on k only).
int axis_restoration_stages(int k);

/// Network with N+k-1 outputs, output i equal to B_i(x) on [0,1].
/// Throws std::invalid_argument for k < 3 or a bounded build outside the envelope.
Network build_spline_basis_net(const spline::KnotVector& kv, BuildMode mode);

/// Scalar network computing the quasi-interpolant on [0,1]^d.
/// Plain: d <= 3; bounded: within BoundedEnvelope, all parameters in [-1, 1].
Network build_qi_net(const spline::QuasiInterpolant& qi, BuildMode mode);

}  // namespace splinenet::net
