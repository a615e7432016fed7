#pragma once

#include <functional>
#include <vector>

#include "splinenet/spline/knot_vector.hpp"

namespace splinenet::spline {

/// Point-evaluation functional: J(f) = sum_j weights[j] * f(points[j]).
struct DualFunctional {
  int interval = 0;              ///< knot interval [t_l, t_{l+1}) holding every point
  std::vector<double> points;    ///< k distinct points, strictly inside the interval
  std::vector<double> weights;   ///< k weights

  double apply(const std::function<double(double)>& f) const;
};

/// One functional per basis function, dual to the B-spline basis:
/// functionals[i].apply(B_j) == (i == j).
struct DualFunctionalSet {
  KnotVector knots;
  std::vector<DualFunctional> functionals;

  [[nodiscard]] int size() const noexcept { return static_cast<int>(functionals.size()); }
  [[nodiscard]] const DualFunctional& operator[](int i) const {
    return functionals.at(static_cast<std::size_t>(i));
  }
};

/// Builds point-evaluation duals. Basis i uses the middle nonempty knot
/// interval of its support and the k points t_l + (j+1)h/(k+1), j = 0..k-1;
/// weights come from inverting the local collocation matrix.
DualFunctionalSet dual_functionals(const KnotVector& kv);

/// Envelope (2k+1) 9^(k-1) on sum_j |weights[j]|.
double dual_weight_bound(int order);

}  // namespace splinenet::spline
