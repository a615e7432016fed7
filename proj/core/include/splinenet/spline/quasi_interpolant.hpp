#pragma once

#include <functional>
#include <span>
#include <vector>

#include "splinenet/spline/dual_functionals.hpp"
#include "splinenet/spline/knot_vector.hpp"

namespace splinenet::spline {

/// d-fold tensor product of one univariate spline space.
class TensorSplineSpace {
 public:
  /// Throws std::invalid_argument for dim < 1 (and as KnotVector for N, k).
  TensorSplineSpace(int dim, int interior_count, int order);

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] int order() const noexcept { return axis_.order(); }
  [[nodiscard]] int interior_count() const noexcept { return axis_.interior_count(); }
  [[nodiscard]] int basis_per_axis() const noexcept { return axis_.basis_count(); }
  [[nodiscard]] long total_basis() const noexcept;
  [[nodiscard]] const KnotVector& axis(int a) const;

  /// Row-major flattening of (i_0, ..., i_{d-1}); axis 0 is most significant.
  [[nodiscard]] long flat_index(std::span<const int> idx) const;
  [[nodiscard]] std::vector<int> unflatten(long flat) const;

 private:
  int dim_;
  KnotVector axis_;
};

using ScalarField = std::function<double(std::span<const double>)>;

/// Coefficients of Jf = sum_I coeffs[I] B_I, stored flat in row-major order.
struct QuasiInterpolant {
  TensorSplineSpace space;
  std::vector<double> coeffs;

  [[nodiscard]] double coeff(std::span<const int> idx) const {
    return coeffs[static_cast<std::size_t>(space.flat_index(idx))];
  }
};

/// Applies the tensor product of the univariate dual functionals to f.
/// Throws std::domain_error if f is non-finite at a required point.
QuasiInterpolant quasi_interpolate(const TensorSplineSpace& space, const ScalarField& f);

/// D^alpha of the spline at x. Throws std::invalid_argument if some
/// alpha component is >= k or the dimensions disagree.
double spline_eval(const QuasiInterpolant& qi, std::span<const double> x,
                   std::span<const int> alpha = {});

/// All derivatives listed in `alphas` at once; out[m] = D^{alphas[m]} Jf(x).
void spline_eval_many(const QuasiInterpolant& qi, std::span<const double> x,
                      const std::vector<std::vector<int>>& alphas, std::span<double> out);

}  // namespace splinenet::spline
