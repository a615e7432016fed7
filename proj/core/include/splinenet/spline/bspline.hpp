#pragma once

#include <Eigen/Core>

#include "splinenet/spline/knot_vector.hpp"

namespace splinenet::spline {

/// The k basis functions that can be nonzero at a point, with derivatives.
struct LocalBasis {
  int first = 0;            ///< index of the first basis function in the block
  Eigen::MatrixXd values;   ///< values(r, j) = D^r B_{first + j}(x), r = 0..max_order
};

/// Cox-de Boor evaluation of all nonzero basis functions at x together with
/// derivatives up to max_order (max_order <= k-1).
LocalBasis local_basis(const KnotVector& kv, double x, int max_order = 0);

/// Value of B_i at x in [0,1]; right-continuous, left limit at x == 1.
/// Throws std::out_of_range for an invalid index.
double bspline_eval(const KnotVector& kv, int i, double x);

/// order-th derivative of B_i at x. Throws std::invalid_argument if order >= k.
double bspline_deriv(const KnotVector& kv, int i, double x, int order);

/// Upper bound (2N)^s (k-1)!/(k-s-1)! on sup |D^s B_i| over [0,1].
double bspline_derivative_bound(const KnotVector& kv, int order);

}  // namespace splinenet::spline
