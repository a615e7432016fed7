#include "splinenet/spline/knot_vector.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace splinenet::spline {

KnotVector::KnotVector(int interior_count, int order)
    : order_(order), interior_count_(interior_count) {
  if (interior_count < 1) {
    throw std::invalid_argument("KnotVector: interior count N must be >= 1, got " +
                                std::to_string(interior_count));
  }
  if (order < 2) {
    throw std::invalid_argument("KnotVector: order k must be >= 2, got " + std::to_string(order));
  }
  knots_.reserve(static_cast<std::size_t>(interior_count + 2 * order - 1));
  knots_.insert(knots_.end(), static_cast<std::size_t>(order), 0.0);
  for (int j = 1; j < interior_count; ++j) {
    knots_.push_back(static_cast<double>(j) / interior_count);
  }
  knots_.insert(knots_.end(), static_cast<std::size_t>(order), 1.0);
}

int KnotVector::find_span(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("KnotVector::find_span: x = " + std::to_string(x) +
                            " is outside [0, 1]");
  }
  const int last = interior_count_ + order_ - 2;  // last nonempty interval
  if (x >= 1.0) return last;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  const int l = static_cast<int>(std::distance(knots_.begin(), it)) - 1;
  return std::clamp(l, order_ - 1, last);
}

KnotVector make_knots(int interior_count, int order) { return {interior_count, order}; }

}  // namespace splinenet::spline
