#pragma once

#include <span>
#include <vector>

namespace splinenet::spline {

/// Augmented uniform partition of [0,1] for splines of order k (degree k-1).
///
/// Holds N+2k-1 knots: k copies of 0, the interior knots 1/N, ..., (N-1)/N,
/// and k copies of 1. Basis functions are indexed from 0 to N+k-2; basis i
/// is supported on [knot(i), knot(i+k)].
class KnotVector {
 public:
  /// Throws std::invalid_argument unless interior_count >= 1 and order >= 2.
  KnotVector(int interior_count, int order);

  [[nodiscard]] int order() const noexcept { return order_; }
  [[nodiscard]] int degree() const noexcept { return order_ - 1; }
  [[nodiscard]] int interior_count() const noexcept { return interior_count_; }
  [[nodiscard]] int basis_count() const noexcept { return interior_count_ + order_ - 1; }
  [[nodiscard]] double spacing() const noexcept { return 1.0 / interior_count_; }

  [[nodiscard]] std::span<const double> knots() const noexcept { return knots_; }
  [[nodiscard]] double operator[](int i) const { return knots_.at(static_cast<std::size_t>(i)); }

  /// Index l of the knot interval [t_l, t_{l+1}) containing x. Intervals are
  /// right-open except the last one, so x == 1 maps to the final nonempty
  /// interval (left-limit convention at the right boundary).
  /// Throws std::domain_error for x outside [0,1].
  [[nodiscard]] int find_span(double x) const;

  /// Position of the uniform breakpoint j/N inside knots(), j in [0, N].
  [[nodiscard]] int breakpoint_index(int j) const noexcept { return order_ - 1 + j; }

 private:
  int order_;
  int interior_count_;
  std::vector<double> knots_;
};

KnotVector make_knots(int interior_count, int order);

}  // namespace splinenet::spline
