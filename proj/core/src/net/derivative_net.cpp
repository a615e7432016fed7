#include "splinenet/net/derivative_net.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "splinenet/net/compose.hpp"
#include "splinenet/net/subnets.hpp"

namespace splinenet::net {

namespace {

Eigen::VectorXd zeros(Eigen::Index n) { return Eigen::VectorXd::Zero(n); }

// [W 0] or [0 W] acting on a concatenated (h, D) input.
Eigen::MatrixXd padded(const Eigen::MatrixXd& w, bool right) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(w.rows(), 2 * w.cols());
  m.middleCols(right ? w.cols() : 0, w.cols()) = w;
  return m;
}

std::vector<int> range(int first, int count) {
  std::vector<int> r(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) r[static_cast<std::size_t>(i)] = first + i;
  return r;
}

}  // namespace

Network build_derivative_net(const Network& net, int axis) {
  if (axis < 0 || axis >= net.input_dim) {
    throw std::invalid_argument("build_derivative_net: axis " + std::to_string(axis) + " out of range");
  }
  const int depth = net.depth();
  if (depth == 0) {
    const Eigen::MatrixXd w = net.out_weights;
    return affine_net(Eigen::MatrixXd::Zero(w.rows(), net.input_dim), w.col(axis));
  }
  const std::set<int> exps = net.exponent_set();
  if (exps.size() != 1 || *exps.begin() < 2) {
    throw std::invalid_argument("build_derivative_net: hidden layers must share one exponent t >= 2");
  }
  const int t = *exps.begin();
  const int k = t + 1;
  const Network ident = build_identity_net(k, Interval::everywhere());
  const Network mult2 = build_mult2_net(k, Interval::everywhere(), Interval::everywhere());

  const Eigen::MatrixXd w1 = net.hidden[0].weights;
  const Eigen::VectorXd& b1 = net.hidden[0].biases;
  const auto n1 = w1.rows();
  const Eigen::MatrixXd slope = (t * w1.col(axis)).asDiagonal();
  const Network d1 = compose(activation_net(w1, b1, t - 1), affine_net(slope, zeros(n1)));
  Network out = depth == 1 ? d1 : parallel({activation_net(w1, b1, t), d1});

  for (int l = 1; l < depth; ++l) {
    const Eigen::MatrixXd w = net.hidden[static_cast<std::size_t>(l)].weights;
    const Eigen::VectorXd& b = net.hidden[static_cast<std::size_t>(l)].biases;
    const int n = static_cast<int>(w.rows());
    const bool last = l == depth - 1;

    // Layer A: next values (unless last), g = t max(z,0)^(t-1), and s = W D passed through.
    std::vector<Network> a_parts;
    if (!last) a_parts.push_back(activation_net(padded(w, false), b, t));
    a_parts.push_back(compose(activation_net(padded(w, false), b, t - 1),
                              affine_net(Eigen::MatrixXd::Identity(n, n) * t, zeros(n))));
    a_parts.push_back(compose(affine_net(padded(w, true), zeros(n)), channelwise(ident, n)));
    out = compose(out, parallel(a_parts));

    // Layer B: carry values, D_l = g * s.
    const int h = last ? 0 : n;
    const int width = h + 2 * n;
    std::vector<Network> b_parts;
    if (!last) b_parts.push_back(compose(select_net(width, range(0, n)), channelwise(ident, n)));
    for (int j = 0; j < n; ++j) b_parts.push_back(compose(select_net(width, {h + j, h + n + j}), mult2));
    out = compose(out, parallel(b_parts));
  }

  const Eigen::MatrixXd wo = net.out_weights;
  out = compose(out, affine_net(wo, zeros(wo.rows())));
  out.prune_zeros();
  return out;
}

}  // namespace splinenet::net
