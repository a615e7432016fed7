#include "splinenet/net/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace splinenet::net {

namespace {

void prune_exact(SparseMatrix& m) {
  m.prune([](Eigen::Index, Eigen::Index, const double& v) { return v != 0.0; });
  m.makeCompressed();
}

long nonzeros(const Eigen::VectorXd& v) {
  long n = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) n += v[i] != 0.0;
  return n;
}

double max_abs(const SparseMatrix& m) {
  double r = 0.0;
  for (int o = 0; o < m.outerSize(); ++o) {
    for (SparseMatrix::InnerIterator it(m, o); it; ++it) r = std::max(r, std::abs(it.value()));
  }
  return r;
}

bool all_finite(const SparseMatrix& m) {
  for (int o = 0; o < m.outerSize(); ++o) {
    for (SparseMatrix::InnerIterator it(m, o); it; ++it) {
      if (!std::isfinite(it.value())) return false;
    }
  }
  return true;
}

void apply_activation(Eigen::MatrixXd& z, const std::vector<int>& exponents) {
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    const int t = exponents[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < z.cols(); ++c) z(r, c) = relu_power(z(r, c), t);
  }
}

}  // namespace

double relu_power(double z, int t) {
  if (z <= 0.0) return 0.0;
  double r = z;
  for (int i = 1; i < t; ++i) r *= z;
  return r;
}

Network::Network(SparseMatrix w, Eigen::VectorXd b)
    : input_dim(static_cast<int>(w.cols())), out_weights(std::move(w)), out_biases(std::move(b)) {}

std::vector<int> Network::widths() const {
  std::vector<int> w;
  w.reserve(hidden.size());
  for (const auto& layer : hidden) w.push_back(layer.out_dim());
  return w;
}

long Network::nonzero_count() const {
  long s = 0;
  for (const auto& layer : hidden) {
    for (int o = 0; o < layer.weights.outerSize(); ++o) {
      for (SparseMatrix::InnerIterator it(layer.weights, o); it; ++it) s += it.value() != 0.0;
    }
    s += nonzeros(layer.biases);
  }
  for (int o = 0; o < out_weights.outerSize(); ++o) {
    for (SparseMatrix::InnerIterator it(out_weights, o); it; ++it) s += it.value() != 0.0;
  }
  return s + nonzeros(out_biases);
}

double Network::max_abs_parameter() const {
  double r = 0.0;
  for (const auto& layer : hidden) {
    r = std::max(r, max_abs(layer.weights));
    if (layer.biases.size() > 0) r = std::max(r, layer.biases.cwiseAbs().maxCoeff());
  }
  r = std::max(r, max_abs(out_weights));
  if (out_biases.size() > 0) r = std::max(r, out_biases.cwiseAbs().maxCoeff());
  return r;
}

std::set<int> Network::exponent_set() const {
  std::set<int> s;
  for (const auto& layer : hidden) s.insert(layer.exponents.begin(), layer.exponents.end());
  return s;
}

void Network::validate() const {
  int in = input_dim;
  for (std::size_t l = 0; l < hidden.size(); ++l) {
    const Layer& layer = hidden[l];
    const std::string where = "layer " + std::to_string(l);
    if (layer.in_dim() != in) throw std::logic_error(where + ": input dimension mismatch");
    if (layer.biases.size() != layer.out_dim() ||
        static_cast<int>(layer.exponents.size()) != layer.out_dim()) {
      throw std::logic_error(where + ": bias/exponent count mismatch");
    }
    for (int t : layer.exponents) {
      if (t < 1) throw std::logic_error(where + ": activation exponent must be >= 1");
    }
    if (!all_finite(layer.weights) || !layer.biases.allFinite()) {
      throw std::logic_error(where + ": non-finite parameter");
    }
    in = layer.out_dim();
  }
  if (out_weights.cols() != in) throw std::logic_error("output layer: input dimension mismatch");
  if (out_biases.size() != out_weights.rows()) throw std::logic_error("output layer: bias count mismatch");
  if (!all_finite(out_weights) || !out_biases.allFinite()) {
    throw std::logic_error("output layer: non-finite parameter");
  }
  if (max_abs_parameter() > weight_bound) {
    throw std::logic_error("parameter magnitude " + std::to_string(max_abs_parameter()) +
                           " exceeds weight bound " + std::to_string(weight_bound));
  }
  if (nonzero_count() > parameter_budget) {
    throw std::logic_error("nonzero parameter count exceeds the declared budget");
  }
}

void Network::prune_zeros() {
  for (auto& layer : hidden) prune_exact(layer.weights);
  prune_exact(out_weights);
}

Eigen::MatrixXd net_eval_batch(const Network& net, const Eigen::MatrixXd& xs) {
  if (xs.rows() != net.input_dim) {
    throw std::invalid_argument("net_eval: expected input dimension " + std::to_string(net.input_dim) +
                                ", got " + std::to_string(xs.rows()));
  }
  Eigen::MatrixXd a = xs;
  for (const Layer& layer : net.hidden) {
    Eigen::MatrixXd z = layer.weights * a;
    z.colwise() += layer.biases;
    apply_activation(z, layer.exponents);
    a = std::move(z);
  }
  Eigen::MatrixXd out = net.out_weights * a;
  out.colwise() += net.out_biases;
  return out;
}

Eigen::VectorXd net_eval(const Network& net, std::span<const double> x) {
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  return net_eval_batch(net, Eigen::MatrixXd(xv)).col(0);
}

}  // namespace splinenet::net
