#include "splinenet/spline/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splinenet::spline {

namespace {

void append_with_total(int dim, int total, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
  const int axis = static_cast<int>(prefix.size());
  if (axis == dim - 1) {
    prefix.push_back(total);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int a = total; a >= 0; --a) {
    prefix.push_back(a);
    append_with_total(dim, total - a, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> multi_indices(int dim, int max_order) {
  if (dim < 1 || max_order < 0) throw std::invalid_argument("multi_indices: need dim >= 1, order >= 0");
  std::vector<std::vector<int>> out;
  std::vector<int> prefix;
  for (int total = 0; total <= max_order; ++total) append_with_total(dim, total, prefix, out);
  return out;
}

double sobolev_distance(int dim, const DerivativeField& f, const DerivativeBundle& g, int s, double p,
                        int grid_n) {
  if (grid_n < 2) throw std::invalid_argument("sobolev_distance: grid_n must be >= 2");
  if (!(p >= 1.0)) throw std::invalid_argument("sobolev_distance: p must be >= 1");
  const auto alphas = multi_indices(dim, s);
  const bool sup = std::isinf(p);
  const double step = 1.0 / (grid_n - 1);

  long points = 1;
  for (int a = 0; a < dim; ++a) points *= grid_n;

  std::vector<double> acc(alphas.size(), 0.0);
  std::vector<double> gv(alphas.size());
  std::vector<double> x(static_cast<std::size_t>(dim));
  std::vector<int> grid(static_cast<std::size_t>(dim));
  for (long flat = 0; flat < points; ++flat) {
    long rem = flat;
    double w = 1.0;
    for (int a = dim - 1; a >= 0; --a) {
      const int i = static_cast<int>(rem % grid_n);
      rem /= grid_n;
      x[static_cast<std::size_t>(a)] = i == grid_n - 1 ? 1.0 : i * step;
      w *= (i == 0 || i == grid_n - 1) ? 0.5 * step : step;
    }
    g(x, alphas, gv);
    for (std::size_t m = 0; m < alphas.size(); ++m) {
      const double e = std::abs(f(x, alphas[m]) - gv[m]);
      if (sup) {
        acc[m] = std::max(acc[m], e);
      } else {
        acc[m] += w * std::pow(e, p);
      }
    }
  }
  if (sup) return *std::max_element(acc.begin(), acc.end());
  double total = 0.0;
  for (double a : acc) total += a;
  return std::pow(total, 1.0 / p);
}

double sobolev_error(const DerivativeField& f, const QuasiInterpolant& qi, int s, double p, int grid_n) {
  if (s < 0 || s >= qi.space.order()) {
    throw std::invalid_argument("sobolev_error: need 0 <= s < k");
  }
  const DerivativeBundle g = [&qi](std::span<const double> x, const std::vector<std::vector<int>>& alphas,
                                   std::span<double> out) { spline_eval_many(qi, x, alphas, out); };
  return sobolev_distance(qi.space.dim(), f, g, s, p, grid_n);
}

double sobolev_error(const DerivativeField& f, const QuasiInterpolant& qi, int s, double p) {
  return sobolev_error(f, qi, s, p, qi.space.dim() == 1 ? 2048 : 256);
}

}  // namespace splinenet::spline
