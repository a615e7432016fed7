#include "splinenet/net/derivatives.hpp"

#include <stdexcept>
#include <string>

namespace splinenet::net {

namespace {

// Columns of the forward state: value, d first derivatives, then the
// d(d+1)/2 second derivatives in (i <= j) order.
int hess_col(int d, int i, int j) {
  if (i > j) std::swap(i, j);
  return 1 + d + i * d - i * (i - 1) / 2 + (j - i);
}

}  // namespace

NetDerivatives net_deriv(const Network& net, std::span<const double> x, int order) {
  if (order != 1 && order != 2) throw std::invalid_argument("net_deriv: order must be 1 or 2");
  const int d = net.input_dim;
  if (static_cast<int>(x.size()) != d) {
    throw std::invalid_argument("net_deriv: expected input dimension " + std::to_string(d) + ", got " +
                                std::to_string(x.size()));
  }
  const int cols = 1 + d + (order == 2 ? d * (d + 1) / 2 : 0);
  Eigen::MatrixXd state = Eigen::MatrixXd::Zero(d, cols);
  for (int i = 0; i < d; ++i) {
    state(i, 0) = x[static_cast<std::size_t>(i)];
    state(i, 1 + i) = 1.0;
  }

  NetDerivatives out;
  for (const Layer& layer : net.hidden) {
    Eigen::MatrixXd z = layer.weights * state;
    z.col(0) += layer.biases;
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
      const int t = layer.exponents[static_cast<std::size_t>(r)];
      const double zr = z(r, 0);
      // s1 = t max(z,0)^(t-1), s2 = t(t-1) max(z,0)^(t-2); both 0 for z <= 0.
      const double s0 = relu_power(zr, t);
      double s1 = 0.0;
      double s2 = 0.0;
      if (zr > 0.0) {
        s1 = t == 1 ? 1.0 : t * relu_power(zr, t - 1);
        if (t == 2) s2 = 2.0;
        if (t > 2) s2 = t * (t - 1) * relu_power(zr, t - 2);
      }
      if (order == 2 && t == 1) out.kink_convention_used = true;
      if (order == 2) {
        for (int i = 0; i < d; ++i) {
          for (int j = i; j < d; ++j) {
            const int c = hess_col(d, i, j);
            z(r, c) = s1 * z(r, c) + s2 * z(r, 1 + i) * z(r, 1 + j);
          }
        }
      }
      for (int i = 0; i < d; ++i) z(r, 1 + i) *= s1;
      z(r, 0) = s0;
    }
    state = std::move(z);
  }
  Eigen::MatrixXd o = net.out_weights * state;
  o.col(0) += net.out_biases;

  const auto m = o.rows();
  out.value = o.col(0);
  out.gradient = o.middleCols(1, d);
  if (order == 2) {
    out.hessian.assign(static_cast<std::size_t>(m), Eigen::MatrixXd::Zero(d, d));
    for (Eigen::Index r = 0; r < m; ++r) {
      for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
          const double v = o(r, hess_col(d, i, j));
          out.hessian[static_cast<std::size_t>(r)](i, j) = v;
          out.hessian[static_cast<std::size_t>(r)](j, i) = v;
        }
      }
    }
  }
  return out;
}

Eigen::VectorXd net_gradient(const Network& net, std::span<const double> x) {
  return net_deriv(net, x, 1).gradient.row(0).transpose();
}

}  // namespace splinenet::net
