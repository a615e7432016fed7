#include "splinenet/spline/dual_functionals.hpp"

#include <Eigen/LU>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "splinenet/spline/bspline.hpp"

namespace splinenet::spline {

double DualFunctional::apply(const std::function<double(double)>& f) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) acc += weights[j] * f(points[j]);
  return acc;
}

DualFunctionalSet dual_functionals(const KnotVector& kv) {
  const int k = kv.order();
  const int n = kv.basis_count();
  const auto t = kv.knots();

  DualFunctionalSet out{kv, {}};
  out.functionals.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<int> nonempty;
    for (int l = i; l < i + k; ++l) {
      if (t[static_cast<std::size_t>(l + 1)] > t[static_cast<std::size_t>(l)]) nonempty.push_back(l);
    }
    assert(!nonempty.empty());
    const int l = nonempty[(nonempty.size() - 1) / 2];
    const double a = t[static_cast<std::size_t>(l)];
    const double h = t[static_cast<std::size_t>(l + 1)] - a;

    DualFunctional fn;
    fn.interval = l;
    fn.points.resize(static_cast<std::size_t>(k));
    // Collocation matrix M(j, m) = B_{l-k+1+m}(tau_j); duality needs w^T M = e_i.
    Eigen::MatrixXd m(k, k);
    for (int j = 0; j < k; ++j) {
      const double tau = a + (j + 1) * h / (k + 1);
      fn.points[static_cast<std::size_t>(j)] = tau;
      const LocalBasis lb = local_basis(kv, tau, 0);
      assert(lb.first == l - k + 1);
      m.row(j) = lb.values.row(0);
    }
    Eigen::VectorXd e = Eigen::VectorXd::Zero(k);
    e(i - (l - k + 1)) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m.transpose());
    if (!lu.isInvertible()) {
      throw std::runtime_error("dual_functionals: singular local collocation system");
    }
    const Eigen::VectorXd w = lu.solve(e);
    fn.weights.assign(w.data(), w.data() + k);
    out.functionals.push_back(std::move(fn));
  }
  return out;
}

double dual_weight_bound(int order) { return (2.0 * order + 1.0) * std::pow(9.0, order - 1); }

}  // namespace splinenet::spline
