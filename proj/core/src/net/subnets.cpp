#include "splinenet/net/subnets.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "splinenet/net/compose.hpp"
#include "splinenet/net/power_decomposition.hpp"

namespace splinenet::net {

namespace {

void require_order(int k, const char* who) {
  if (k < 3) {
    throw std::invalid_argument(std::string(who) + ": need k >= 3 (activation exponent >= 2), got k = " +
                                std::to_string(k));
  }
}

// Marks the bound when every parameter already satisfies it.
Network bounded_if_possible(Network net) {
  net = replicate_for_bound(net);
  if (net.max_abs_parameter() <= 1.0) net.weight_bound = 1.0;
  return net;
}

}  // namespace

Network build_square_net(int k, Interval domain) {
  require_order(k, "build_square_net");
  return poly_net({0.0, 0.0, 1.0}, k - 1, domain.lo, domain.hi);
}

Network build_identity_net(int k, Interval domain) {
  require_order(k, "build_identity_net");
  return poly_net({0.0, 1.0}, k - 1, domain.lo, domain.hi);
}

Network build_mult2_net(int k, Interval x, Interval y) {
  require_order(k, "build_mult2_net");
  const Interval sum{x.lo + y.lo, x.hi + y.hi};
  const Interval diff{x.lo - y.hi, x.hi - y.lo};
  Eigen::MatrixXd plus(1, 2);
  plus << 1.0, 1.0;
  Eigen::MatrixXd minus(1, 2);
  minus << 1.0, -1.0;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  const Network sq_plus = compose(affine_net(plus, zero), build_square_net(k, sum));
  const Network sq_minus = compose(affine_net(minus, zero), build_square_net(k, diff));
  Eigen::MatrixXd combine(1, 2);
  combine << 0.25, -0.25;
  return compose(parallel({sq_plus, sq_minus}), affine_net(combine, zero));
}

Network build_mult_net(int n, int k) {
  if (n < 2) throw std::invalid_argument("build_mult_net: need n >= 2, got " + std::to_string(n));
  require_order(k, "build_mult_net");
  Network net = select_net(n, [n] {
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
  }());
  const Network mult2 = build_mult2_net(k);
  const Network ident = build_identity_net(k);
  int m = n;
  while (m > 1) {
    std::vector<Network> parts;
    for (int i = 0; i + 1 < m; i += 2) parts.push_back(compose(select_net(m, {i, i + 1}), mult2));
    if (m % 2 == 1) parts.push_back(compose(select_net(m, {m - 1}), ident));
    net = compose(net, parallel(parts));
    m = (m + 1) / 2;
  }
  return bounded_if_possible(net);
}

Network constant_bank_net(int in_dim, int count, int exponent) {
  if (count < 1) throw std::invalid_argument("constant_bank_net: count must be >= 1");
  Network net = activation_net(Eigen::MatrixXd::Zero(count, in_dim), Eigen::VectorXd::Ones(count), exponent);
  net.out_weights = Eigen::MatrixXd::Ones(1, count).sparseView();
  net.out_biases = Eigen::VectorXd::Zero(1);
  return net;
}

}  // namespace splinenet::net
