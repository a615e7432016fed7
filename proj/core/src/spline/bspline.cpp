#include "splinenet/spline/bspline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace splinenet::spline {

namespace {

void check_index(const KnotVector& kv, int i) {
  if (i < 0 || i >= kv.basis_count()) {
    throw std::out_of_range("B-spline index " + std::to_string(i) + " outside [0, " +
                            std::to_string(kv.basis_count()) + ")");
  }
}

void check_order(const KnotVector& kv, int order) {
  if (order < 0 || order >= kv.order()) {
    throw std::invalid_argument("derivative order " + std::to_string(order) +
                                " must lie in [0, k-1] for k = " + std::to_string(kv.order()));
  }
}

}  // namespace

LocalBasis local_basis(const KnotVector& kv, double x, int max_order) {
  check_order(kv, max_order);
  const int p = kv.degree();
  const int span = kv.find_span(x);
  const auto t = kv.knots();

  // Triangular table: ndu(j, r) holds basis values (j >= r) and knot differences (j < r).
  Eigen::MatrixXd ndu(p + 1, p + 1);
  std::vector<double> left(static_cast<std::size_t>(p + 1));
  std::vector<double> right(static_cast<std::size_t>(p + 1));
  ndu(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - t[static_cast<std::size_t>(span + 1 - j)];
    right[j] = t[static_cast<std::size_t>(span + j)] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right[r + 1] + left[j - r];
      const double temp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu(j, j) = saved;
  }

  LocalBasis out;
  out.first = span - p;
  out.values.setZero(max_order + 1, p + 1);
  for (int j = 0; j <= p; ++j) out.values(0, j) = ndu(j, p);

  Eigen::MatrixXd a(2, p + 1);
  for (int r = 0; r <= p; ++r) {
    int s1 = 0;
    int s2 = 1;
    a.setZero();
    a(0, 0) = 1.0;
    for (int kk = 1; kk <= max_order; ++kk) {
      double d = 0.0;
      const int rk = r - kk;
      const int pk = p - kk;
      if (r >= kk) {
        a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
        d = a(s2, 0) * ndu(rk, pk);
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? kk - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
        d += a(s2, j) * ndu(rk + j, pk);
      }
      if (r <= pk) {
        a(s2, kk) = -a(s1, kk - 1) / ndu(pk + 1, r);
        d += a(s2, kk) * ndu(r, pk);
      }
      out.values(kk, r) = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int kk = 1; kk <= max_order; ++kk) {
    out.values.row(kk) *= factor;
    factor *= (p - kk);
  }
  return out;
}

double bspline_eval(const KnotVector& kv, int i, double x) { return bspline_deriv(kv, i, x, 0); }

double bspline_deriv(const KnotVector& kv, int i, double x, int order) {
  check_index(kv, i);
  check_order(kv, order);
  const LocalBasis lb = local_basis(kv, x, order);
  const int j = i - lb.first;
  if (j < 0 || j >= kv.order()) return 0.0;
  return lb.values(order, j);
}

double bspline_derivative_bound(const KnotVector& kv, int order) {
  check_order(kv, order);
  const int k = kv.order();
  double falling = 1.0;  // (k-1)!/(k-order-1)!
  for (int j = 0; j < order; ++j) falling *= (k - 1 - j);
  return std::pow(2.0 * kv.interior_count(), order) * falling;
}

}  // namespace splinenet::spline
