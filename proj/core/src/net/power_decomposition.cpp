#include "splinenet/net/power_decomposition.hpp"

#include <Eigen/LU>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace splinenet::net {

namespace {

double binomial(int n, int r) {
  double b = 1.0;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

double PowerDecomposition::evaluate(double x) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) acc += coeffs[i] * std::pow(x + nodes[i], exponent);
  return acc;
}

double power_decomposition_bound(int l, int exponent, double max_node) {
  const int k = exponent;
  const int h = (k + 1) / 2;
  const double mk = std::max(std::pow(max_node, k + 1), 1.0);
  return (k + 1) * std::pow(k, k) * binomial(k, h) * mk /
         (std::pow(2.0, k) * factorial(h) * factorial(h) * binomial(k, l));
}

PowerDecomposition power_decomposition_any(int l, int exponent, double center) {
  if (exponent < 1) throw std::invalid_argument("power_decomposition: exponent must be >= 1");
  if (l < 0 || l > exponent) {
    throw std::invalid_argument("power_decomposition: power " + std::to_string(l) + " outside [0, " +
                                std::to_string(exponent) + "]");
  }
  if (!std::isfinite(center)) throw std::invalid_argument("power_decomposition: center must be finite");
  const int k = exponent;
  PowerDecomposition pd;
  pd.power = l;
  pd.exponent = k;
  pd.nodes.resize(static_cast<std::size_t>(k + 1));
  double max_node = 0.0;
  for (int i = 0; i <= k; ++i) {
    const double b = center - 1.0 + 2.0 * i / k;
    pd.nodes[static_cast<std::size_t>(i)] = b;
    max_node = std::max(max_node, std::abs(b));
  }
  // Coefficient of x^(k-m) in sum_i a_i (x + b_i)^k is sum_i C(k,m) b_i^m a_i.
  Eigen::MatrixXd a(k + 1, k + 1);
  for (int m = 0; m <= k; ++m) {
    for (int i = 0; i <= k; ++i) a(m, i) = binomial(k, m) * std::pow(pd.nodes[static_cast<std::size_t>(i)], m);
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(k + 1);
  y(k - l) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw std::runtime_error("power_decomposition: singular system");
  const Eigen::VectorXd sol = lu.solve(y);
  pd.coeffs.assign(sol.data(), sol.data() + sol.size());
  pd.bound = l >= 1 && l < k ? power_decomposition_bound(l, k, max_node)
                              : std::numeric_limits<double>::infinity();
  return pd;
}

PowerDecomposition power_decomposition(int l, int exponent, double center) {
  if (l < 1 || l >= exponent) {
    throw std::invalid_argument("power_decomposition: need 1 <= l < k, got l = " + std::to_string(l) +
                                ", k = " + std::to_string(exponent));
  }
  return power_decomposition_any(l, exponent, center);
}

Network poly_net(const std::vector<double>& poly, int exponent, double lo, double hi) {
  if (poly.empty()) throw std::invalid_argument("poly_net: empty polynomial");
  if (static_cast<int>(poly.size()) - 1 > exponent) {
    throw std::invalid_argument("poly_net: degree exceeds activation exponent");
  }
  const int k = exponent;
  std::vector<double> w(static_cast<std::size_t>(k + 1), 0.0);
  std::vector<double> nodes;
  for (std::size_t l = 1; l < poly.size(); ++l) {
    if (poly[l] == 0.0) continue;
    const PowerDecomposition pd = power_decomposition_any(static_cast<int>(l), k);
    nodes = pd.nodes;
    for (int i = 0; i <= k; ++i) w[static_cast<std::size_t>(i)] += poly[l] * pd.coeffs[static_cast<std::size_t>(i)];
  }
  // Coefficients that cancel exactly in theory come back as rounding noise.
  double wmax = 0.0;
  for (double v : w) wmax = std::max(wmax, std::abs(v));
  for (double& v : w) {
    if (std::abs(v) <= 64.0 * std::numeric_limits<double>::epsilon() * wmax) v = 0.0;
  }
  const double sign = k % 2 == 0 ? 1.0 : -1.0;

  // Rows: (slope, bias, outgoing weight).
  std::vector<std::array<double, 3>> units;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double b = nodes[i];
    if (w[i] == 0.0) continue;
    if (hi + b > 0.0) units.push_back({1.0, b, w[i]});
    if (lo + b < 0.0) units.push_back({-1.0, -b, sign * w[i]});
  }
  Eigen::MatrixXd a(static_cast<Eigen::Index>(units.size()), 1);
  Eigen::VectorXd c(static_cast<Eigen::Index>(units.size()));
  Eigen::MatrixXd out(1, static_cast<Eigen::Index>(units.size()));
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto r = static_cast<Eigen::Index>(u);
    a(r, 0) = units[u][0];
    c(r) = units[u][1];
    out(0, r) = units[u][2];
  }
  Network net;
  net.input_dim = 1;
  net.hidden.push_back(Layer{a.sparseView(), c, std::vector<int>(units.size(), k)});
  net.out_weights = out.sparseView();
  net.out_biases = Eigen::VectorXd::Constant(1, poly[0]);
  net.prune_zeros();
  return net;
}

}  // namespace splinenet::net
