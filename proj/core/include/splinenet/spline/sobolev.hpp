#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "splinenet/spline/quasi_interpolant.hpp"

namespace splinenet::spline {

inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();

/// Every multi-index alpha in N^dim with |alpha| <= max_order, ordered by
/// total degree and then lexicographically (descending in axis 0).
std::vector<std::vector<int>> multi_indices(int dim, int max_order);

/// D^alpha f at x.
using DerivativeField = std::function<double(std::span<const double> x, std::span<const int> alpha)>;

/// Writes D^{alphas[m]} g(x) into out[m] for all m in one call.
using DerivativeBundle =
    std::function<void(std::span<const double> x, const std::vector<std::vector<int>>& alphas,
                       std::span<double> out)>;

/// W^s_p distance between f and g on [0,1]^dim, using a uniform grid of
/// grid_n points per axis. For finite p the result is
/// (sum_alpha ||D^alpha (f - g)||_p^p)^(1/p) with trapezoid weights; for
/// p = infinity it is the maximum of |D^alpha (f - g)| over grid and alpha.
double sobolev_distance(int dim, const DerivativeField& f, const DerivativeBundle& g, int s, double p,
                        int grid_n);

/// sobolev_distance between f and the quasi-interpolant. Throws
/// std::invalid_argument unless 0 <= s < k, grid_n >= 2 and p >= 1.
double sobolev_error(const DerivativeField& f, const QuasiInterpolant& qi, int s, double p,
                     int grid_n);

/// Same with the default grid: 2048 points per axis for d = 1, 256 otherwise.
double sobolev_error(const DerivativeField& f, const QuasiInterpolant& qi, int s, double p);

}  // namespace splinenet::spline
