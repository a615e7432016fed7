#include "splinenet/spline/quasi_interpolant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "splinenet/spline/bspline.hpp"

namespace splinenet::spline {

TensorSplineSpace::TensorSplineSpace(int dim, int interior_count, int order)
    : dim_(dim), axis_(interior_count, order) {
  if (dim < 1) {
    throw std::invalid_argument("TensorSplineSpace: dim must be >= 1, got " + std::to_string(dim));
  }
}

long TensorSplineSpace::total_basis() const noexcept {
  long total = 1;
  for (int a = 0; a < dim_; ++a) total *= basis_per_axis();
  return total;
}

const KnotVector& TensorSplineSpace::axis(int a) const {
  if (a < 0 || a >= dim_) throw std::out_of_range("TensorSplineSpace::axis: bad axis");
  return axis_;
}

long TensorSplineSpace::flat_index(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != dim_) {
    throw std::invalid_argument("TensorSplineSpace::flat_index: wrong index arity");
  }
  long flat = 0;
  for (int a = 0; a < dim_; ++a) {
    const int i = idx[static_cast<std::size_t>(a)];
    if (i < 0 || i >= basis_per_axis()) throw std::out_of_range("TensorSplineSpace: index out of range");
    flat = flat * basis_per_axis() + i;
  }
  return flat;
}

std::vector<int> TensorSplineSpace::unflatten(long flat) const {
  std::vector<int> idx(static_cast<std::size_t>(dim_));
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = static_cast<int>(flat % basis_per_axis());
    flat /= basis_per_axis();
  }
  return idx;
}

QuasiInterpolant quasi_interpolate(const TensorSplineSpace& space, const ScalarField& f) {
  const int d = space.dim();
  const int k = space.order();
  const DualFunctionalSet duals = dual_functionals(space.axis(0));

  QuasiInterpolant qi{space, std::vector<double>(static_cast<std::size_t>(space.total_basis()))};
  std::vector<double> x(static_cast<std::size_t>(d));
  long terms = 1;
  for (int a = 0; a < d; ++a) terms *= k;

  for (long flat = 0; flat < space.total_basis(); ++flat) {
    const std::vector<int> idx = space.unflatten(flat);
    double acc = 0.0;
    for (long t = 0; t < terms; ++t) {
      long rem = t;
      double w = 1.0;
      for (int a = d - 1; a >= 0; --a) {
        const auto ja = static_cast<std::size_t>(rem % k);
        rem /= k;
        const DualFunctional& fn = duals[idx[static_cast<std::size_t>(a)]];
        x[static_cast<std::size_t>(a)] = fn.points[ja];
        w *= fn.weights[ja];
      }
      const double v = f(x);
      if (!std::isfinite(v)) {
        throw std::domain_error("quasi_interpolate: target is not finite at a dual point");
      }
      acc += w * v;
    }
    qi.coeffs[static_cast<std::size_t>(flat)] = acc;
  }
  return qi;
}

void spline_eval_many(const QuasiInterpolant& qi, std::span<const double> x,
                      const std::vector<std::vector<int>>& alphas, std::span<double> out) {
  const TensorSplineSpace& space = qi.space;
  const int d = space.dim();
  const int k = space.order();
  if (static_cast<int>(x.size()) != d) throw std::invalid_argument("spline_eval: point has wrong dimension");
  if (out.size() < alphas.size()) throw std::invalid_argument("spline_eval: output buffer too small");

  int max_order = 0;
  for (const auto& alpha : alphas) {
    if (static_cast<int>(alpha.size()) != d) {
      throw std::invalid_argument("spline_eval: multi-index has wrong dimension");
    }
    for (int a : alpha) {
      if (a < 0 || a >= k) {
        throw std::invalid_argument("spline_eval: derivative order " + std::to_string(a) +
                                    " outside [0, k-1]");
      }
      max_order = std::max(max_order, a);
    }
  }

  std::vector<LocalBasis> local;
  local.reserve(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) local.push_back(local_basis(space.axis(a), x[static_cast<std::size_t>(a)], max_order));

  long terms = 1;
  for (int a = 0; a < d; ++a) terms *= k;
  std::vector<int> idx(static_cast<std::size_t>(d));
  std::vector<int> j(static_cast<std::size_t>(d));
  for (std::size_t m = 0; m < alphas.size(); ++m) out[m] = 0.0;
  for (long t = 0; t < terms; ++t) {
    long rem = t;
    for (int a = d - 1; a >= 0; --a) {
      j[static_cast<std::size_t>(a)] = static_cast<int>(rem % k);
      rem /= k;
      idx[static_cast<std::size_t>(a)] = local[static_cast<std::size_t>(a)].first + j[static_cast<std::size_t>(a)];
    }
    const double c = qi.coeff(idx);
    if (c == 0.0) continue;
    for (std::size_t m = 0; m < alphas.size(); ++m) {
      double prod = c;
      for (int a = 0; a < d; ++a) {
        const auto sa = static_cast<std::size_t>(a);
        prod *= local[sa].values(alphas[m][sa], j[sa]);
      }
      out[m] += prod;
    }
  }
}

double spline_eval(const QuasiInterpolant& qi, std::span<const double> x, std::span<const int> alpha) {
  std::vector<int> a(alpha.begin(), alpha.end());
  if (a.empty()) a.assign(static_cast<std::size_t>(qi.space.dim()), 0);
  double out = 0.0;
  spline_eval_many(qi, x, {a}, std::span<double>(&out, 1));
  return out;
}

}  // namespace splinenet::spline
