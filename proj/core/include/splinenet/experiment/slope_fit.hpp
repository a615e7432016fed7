#pragma once

#include <span>

namespace splinenet::experiment {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;  ///< 1 when the data have no spread to explain
};

/// Ordinary least squares of log10(y) on log10(x). Throws
/// std::invalid_argument for fewer than 3 points, mismatched lengths, a
/// nonpositive value, or xs that are all equal.
SlopeFit fit_loglog(std::span<const double> xs, std::span<const double> ys);

}  // namespace splinenet::experiment
