#include "splinenet/train/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace splinenet::train {

namespace {

double ipow(double z, int t) {
  double r = 1.0;
  for (int i = 0; i < t; ++i) r *= z;
  return r;
}

double act_value(double z, int t) { return z > 0.0 ? ipow(z, t) : 0.0; }
double act_slope(double z, int t) { return z > 0.0 ? t * ipow(z, t - 1) : 0.0; }

void require_finite(const Eigen::MatrixXd& m, const char* what, int layer) {
  if (!m.allFinite()) {
    throw std::runtime_error(std::string("non-finite ") + what + " in hidden layer " + std::to_string(layer));
  }
}

using JetRows = Eigen::Matrix<double, Eigen::Dynamic, 3>;
using HessRows = Eigen::Matrix<double, Eigen::Dynamic, 9>;

struct JetState {
  Eigen::VectorXd v;
  JetRows g;
  HessRows h;

  [[nodiscard]] Jet2 at(long j) const {
    Jet2 out(v[j]);
    out.g = g.row(j).transpose();
    out.h = Eigen::Map<const Eigen::Matrix3d>(h.row(j).eval().data());
    return out;
  }
  void set(long j, const Jet2& x) {
    v[j] = x.v;
    g.row(j) = x.g.transpose();
    h.row(j) = Eigen::Map<const Eigen::Matrix<double, 1, 9>>(x.h.data());
  }
};

}  // namespace

MLPConfig MLPConfig::uniform(int width, int depth, int k) {
  MLPConfig cfg;
  cfg.width = width;
  cfg.depth = depth;
  cfg.activation_pattern.assign(static_cast<std::size_t>(depth), k);
  return cfg;
}

void MLPConfig::validate() const {
  if (input_dim < 1) throw std::invalid_argument("MLPConfig: input_dim must be >= 1");
  if (width < 1) throw std::invalid_argument("MLPConfig: width must be >= 1");
  if (depth < 1) throw std::invalid_argument("MLPConfig: depth must be >= 1");
  if (static_cast<int>(activation_pattern.size()) != depth) {
    throw std::invalid_argument("MLPConfig: activation_pattern has " + std::to_string(activation_pattern.size()) +
                                " entries for depth " + std::to_string(depth));
  }
  for (int t : activation_pattern) {
    if (t < 1) throw std::invalid_argument("MLPConfig: activation exponents must be >= 1");
  }
  if (activation_clamp_max && !(*activation_clamp_max > 0.0)) {
    throw std::invalid_argument("MLPConfig: activation_clamp_max must be positive");
  }
  if (weight_clip && !(*weight_clip > 0.0)) throw std::invalid_argument("MLPConfig: weight_clip must be positive");
}

MLPParams::RowMajorMap MLPParams::weight(int l) {
  const auto& s = layers[static_cast<std::size_t>(l)];
  return {theta.data() + s.weights, s.rows, s.cols};
}
MLPParams::ConstRowMajorMap MLPParams::weight(int l) const {
  const auto& s = layers[static_cast<std::size_t>(l)];
  return {theta.data() + s.weights, s.rows, s.cols};
}
Eigen::Map<Eigen::VectorXd> MLPParams::bias(int l) {
  const auto& s = layers[static_cast<std::size_t>(l)];
  return {theta.data() + s.biases, s.rows};
}
Eigen::Map<const Eigen::VectorXd> MLPParams::bias(int l) const {
  const auto& s = layers[static_cast<std::size_t>(l)];
  return {theta.data() + s.biases, s.rows};
}

Eigen::VectorXd MLPParams::linear_mask() const {
  Eigen::VectorXd mask = Eigen::VectorXd::Ones(theta.size());
  for (const auto& s : layers) {
    if (s.gains >= 0) mask.segment(s.gains, s.rows).setZero();
    if (s.offsets >= 0) mask.segment(s.offsets, s.rows).setZero();
  }
  return mask;
}

MLPParams mlp_layout(const MLPConfig& cfg) {
  cfg.validate();
  MLPParams p;
  long at = 0;
  int fan_in = cfg.input_dim;
  for (int l = 0; l < cfg.depth; ++l) {
    LayerSlice s;
    s.rows = cfg.width;
    s.cols = fan_in;
    s.weights = at;
    at += static_cast<long>(s.rows) * s.cols;
    s.biases = at;
    at += s.rows;
    if (cfg.layer_norm) {
      s.gains = at;
      at += s.rows;
      s.offsets = at;
      at += s.rows;
    }
    p.layers.push_back(s);
    fan_in = cfg.width;
  }
  p.out_weights = at;
  at += cfg.width;
  p.out_bias = at;
  at += 1;
  p.theta = Eigen::VectorXd::Zero(at);
  for (const auto& s : p.layers) {
    if (s.gains >= 0) p.theta.segment(s.gains, s.rows).setOnes();
  }
  return p;
}

double half_normal_moment(int p) {
  return std::pow(2.0, 0.5 * p) * std::tgamma(0.5 * (p + 1)) / (2.0 * std::sqrt(std::numbers::pi));
}

double sk_scale(int k) {
  if (k < 1) throw std::invalid_argument("sk_scale: k must be >= 1");
  const auto variance = [](int t) {
    const double m = half_normal_moment(t);
    return half_normal_moment(2 * t) - m * m;
  };
  return std::sqrt(variance(1) / variance(k));
}

MLPParams mlp_init(const MLPConfig& cfg, std::uint64_t seed) {
  MLPParams p = mlp_layout(cfg);
  std::mt19937_64 rng(seed);
  const auto symmetric = [&rng](double a) { return a * (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0); };
  for (int l = 0; l < cfg.depth; ++l) {
    const auto& s = p.layers[static_cast<std::size_t>(l)];
    const double a = 1.0 / std::sqrt(static_cast<double>(s.cols));
    const double scale = (cfg.sk_rescale && l > 0) ? sk_scale(cfg.activation_pattern[static_cast<std::size_t>(l - 1)]) : 1.0;
    for (long i = 0; i < static_cast<long>(s.rows) * s.cols; ++i) p.theta[s.weights + i] = scale * symmetric(a);
    for (long i = 0; i < s.rows; ++i) p.theta[s.biases + i] = symmetric(a);
  }
  const double a = 1.0 / std::sqrt(static_cast<double>(cfg.width));
  const double scale = cfg.sk_rescale ? sk_scale(cfg.activation_pattern.back()) : 1.0;
  for (long i = 0; i < cfg.width; ++i) p.theta[p.out_weights + i] = scale * symmetric(a);
  p.theta[p.out_bias] = symmetric(a);
  if (cfg.weight_clip) {
    const Eigen::VectorXd mask = p.linear_mask();
    for (long i = 0; i < p.size(); ++i) {
      if (mask[i] != 0.0) p.theta[i] = std::clamp(p.theta[i], -*cfg.weight_clip, *cfg.weight_clip);
    }
  }
  return p;
}

Eigen::RowVectorXd mlp_forward(const MLPParams& p, const MLPConfig& cfg, const Eigen::MatrixXd& xs,
                               ForwardCache* cache) {
  if (xs.rows() != cfg.input_dim) {
    throw std::invalid_argument("mlp_forward: expected " + std::to_string(cfg.input_dim) + " input rows, got " +
                                std::to_string(xs.rows()));
  }
  if (xs.cols() == 0) throw std::invalid_argument("mlp_forward: empty batch");
  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  c = ForwardCache{};
  Eigen::MatrixXd a = xs;
  for (int l = 0; l < cfg.depth; ++l) {
    const auto& s = p.layers[static_cast<std::size_t>(l)];
    const int t = cfg.activation_pattern[static_cast<std::size_t>(l)];
    Eigen::MatrixXd z = p.weight(l) * a;
    z.colwise() += p.bias(l);
    require_finite(z, "pre-activation", l);
    Eigen::MatrixXd pre;
    if (cfg.layer_norm) {
      const Eigen::RowVectorXd mean = z.colwise().mean();
      Eigen::MatrixXd centered = z.rowwise() - mean;
      const Eigen::RowVectorXd var = centered.array().square().colwise().mean();
      const Eigen::RowVectorXd inv = (var.array() + kLayerNormEps).rsqrt();
      Eigen::MatrixXd zhat = centered.array().rowwise() * inv.array();
      const Eigen::Map<const Eigen::VectorXd> gain(p.theta.data() + s.gains, s.rows);
      const Eigen::Map<const Eigen::VectorXd> offset(p.theta.data() + s.offsets, s.rows);
      pre = (gain.asDiagonal() * zhat).colwise() + offset;
      if (cache) {
        c.normalized.push_back(std::move(zhat));
        c.inv_std.push_back(inv);
      }
    } else {
      pre = z;
    }
    Eigen::MatrixXd out = pre.unaryExpr([t](double v) { return act_value(v, t); });
    if (cfg.activation_clamp_max) out = out.cwiseMin(*cfg.activation_clamp_max);
    require_finite(out, "activation", l);
    if (cache) {
      c.affine.push_back(std::move(z));
      c.pre.push_back(std::move(pre));
      c.act.push_back(out);
    }
    a = std::move(out);
  }
  const Eigen::Map<const Eigen::VectorXd> w_out(p.theta.data() + p.out_weights, cfg.width);
  Eigen::RowVectorXd y = w_out.transpose() * a;
  y.array() += p.theta[p.out_bias];
  if (!y.allFinite()) throw std::runtime_error("non-finite network output");
  if (cache) c.output = y;
  return y;
}

double mlp_loss_grad(const MLPParams& p, const MLPConfig& cfg, const Eigen::MatrixXd& xs,
                     std::span<const double> targets, std::span<const double> weights, Eigen::VectorXd* grad) {
  const auto n = static_cast<std::size_t>(xs.cols());
  if (targets.size() != n || weights.size() != n) {
    throw std::invalid_argument("mlp_loss_grad: batch, targets and weights differ in length");
  }
  ForwardCache c;
  const Eigen::RowVectorXd y = mlp_forward(p, cfg, xs, grad ? &c : nullptr);
  const Eigen::Map<const Eigen::RowVectorXd> f(targets.data(), static_cast<long>(n));
  const Eigen::Map<const Eigen::RowVectorXd> w(weights.data(), static_cast<long>(n));
  const Eigen::RowVectorXd r = y - f;
  const double loss = (w.array() * r.array().square()).sum();
  if (!std::isfinite(loss)) throw std::runtime_error("non-finite loss");
  if (!grad) return loss;

  grad->setZero(p.size());
  const Eigen::RowVectorXd dout = 2.0 * (w.array() * r.array()).matrix();
  const Eigen::MatrixXd& last = c.act.back();
  grad->segment(p.out_weights, cfg.width) = last * dout.transpose();
  (*grad)[p.out_bias] = dout.sum();
  const Eigen::Map<const Eigen::VectorXd> w_out(p.theta.data() + p.out_weights, cfg.width);
  Eigen::MatrixXd da = w_out * dout;
  for (int l = cfg.depth - 1; l >= 0; --l) {
    const auto& s = p.layers[static_cast<std::size_t>(l)];
    const int t = cfg.activation_pattern[static_cast<std::size_t>(l)];
    const auto& pre = c.pre[static_cast<std::size_t>(l)];
    Eigen::MatrixXd dpre = pre.unaryExpr([t](double v) { return act_slope(v, t); });
    if (cfg.activation_clamp_max) {
      const double cap = *cfg.activation_clamp_max;
      dpre = (pre.unaryExpr([t](double v) { return act_value(v, t); }).array() > cap).select(0.0, dpre);
    }
    dpre.array() *= da.array();
    Eigen::MatrixXd dz;
    if (cfg.layer_norm) {
      const auto& zhat = c.normalized[static_cast<std::size_t>(l)];
      const auto& inv = c.inv_std[static_cast<std::size_t>(l)];
      const Eigen::Map<const Eigen::VectorXd> gain(p.theta.data() + s.gains, s.rows);
      grad->segment(s.gains, s.rows) = (dpre.array() * zhat.array()).rowwise().sum();
      grad->segment(s.offsets, s.rows) = dpre.rowwise().sum();
      const Eigen::MatrixXd dzhat = gain.asDiagonal() * dpre;
      const Eigen::RowVectorXd sum1 = dzhat.colwise().sum();
      const Eigen::RowVectorXd sum2 = (dzhat.array() * zhat.array()).colwise().sum();
      const double width = s.rows;
      dz = ((width * dzhat).rowwise() - sum1).array() - zhat.array().rowwise() * sum2.array();
      dz = (dz.array().rowwise() * (inv.array() / width)).matrix();
    } else {
      dz = std::move(dpre);
    }
    const Eigen::MatrixXd& a_prev = l > 0 ? c.act[static_cast<std::size_t>(l - 1)] : xs;
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> gw(
        grad->data() + s.weights, s.rows, s.cols);
    gw.noalias() = dz * a_prev.transpose();
    grad->segment(s.biases, s.rows) = dz.rowwise().sum();
    if (l > 0) da.noalias() = p.weight(l).transpose() * dz;
  }
  if (!grad->allFinite()) throw std::runtime_error("non-finite gradient");
  return loss;
}

Jet2 mlp_jet(const MLPParams& p, const MLPConfig& cfg, std::span<const double> x) {
  if (static_cast<int>(x.size()) != cfg.input_dim || cfg.input_dim > 3) {
    throw std::invalid_argument("mlp_jet: input must have input_dim <= 3 coordinates");
  }
  JetState st{Eigen::VectorXd(cfg.input_dim), JetRows::Zero(cfg.input_dim, 3), HessRows::Zero(cfg.input_dim, 9)};
  for (int i = 0; i < cfg.input_dim; ++i) {
    st.v[i] = x[static_cast<std::size_t>(i)];
    st.g(i, i) = 1.0;
  }
  for (int l = 0; l < cfg.depth; ++l) {
    const auto& s = p.layers[static_cast<std::size_t>(l)];
    const int t = cfg.activation_pattern[static_cast<std::size_t>(l)];
    const auto W = p.weight(l);
    JetState z{W * st.v + p.bias(l), W * st.g, W * st.h};
    if (cfg.layer_norm) {
      Jet2 mean;
      for (long j = 0; j < s.rows; ++j) mean = mean + z.at(j);
      mean = (1.0 / s.rows) * mean;
      Jet2 var;
      for (long j = 0; j < s.rows; ++j) {
        const Jet2 d = z.at(j) - mean;
        var = var + d * d;
      }
      const Jet2 inv = reciprocal(sqrt((1.0 / s.rows) * var + Jet2(kLayerNormEps)));
      for (long j = 0; j < s.rows; ++j) {
        z.set(j, p.theta[s.gains + j] * ((z.at(j) - mean) * inv) + Jet2(p.theta[s.offsets + j]));
      }
    }
    for (long j = 0; j < s.rows; ++j) {
      Jet2 a = relu_power(z.at(j), t);
      if (cfg.activation_clamp_max && a.v > *cfg.activation_clamp_max) a = Jet2(*cfg.activation_clamp_max);
      z.set(j, a);
    }
    st = std::move(z);
  }
  const Eigen::Map<const Eigen::VectorXd> w_out(p.theta.data() + p.out_weights, cfg.width);
  Jet2 out(w_out.dot(st.v) + p.theta[p.out_bias]);
  out.g = (w_out.transpose() * st.g).transpose();
  const Eigen::Matrix<double, 1, 9> hflat = w_out.transpose() * st.h;
  out.h = Eigen::Map<const Eigen::Matrix3d>(hflat.data());
  return out;
}

SurfaceJet mlp_hvp_surface(const MLPParams& p, const MLPConfig& cfg, std::span<const double> x) {
  SurfaceJet out{mlp_jet(p, cfg, x), false};
  bool low = false;
  for (int t : cfg.activation_pattern) low = low || t < 3;
  if (!low) return out;
  out.fd_fallback = true;
  std::vector<double> y(x.begin(), x.end());
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (int i = 0; i < cfg.input_dim; ++i) {
    const double x0 = y[static_cast<std::size_t>(i)];
    y[static_cast<std::size_t>(i)] = x0 + kHessianFdStep;
    const Eigen::Vector3d gp = mlp_jet(p, cfg, y).g;
    y[static_cast<std::size_t>(i)] = x0 - kHessianFdStep;
    const Eigen::Vector3d gm = mlp_jet(p, cfg, y).g;
    y[static_cast<std::size_t>(i)] = x0;
    h.col(i) = (gp - gm) / (2.0 * kHessianFdStep);
  }
  out.jet.h = 0.5 * (h + h.transpose());
  return out;
}

net::Network mlp_to_network(const MLPParams& p, const MLPConfig& cfg) {
  if (cfg.layer_norm || cfg.activation_clamp_max) {
    throw std::invalid_argument("mlp_to_network: layer norm and clamping have no ReLU^k network form");
  }
  net::Network out;
  out.input_dim = cfg.input_dim;
  for (int l = 0; l < cfg.depth; ++l) {
    net::Layer layer;
    layer.weights = Eigen::MatrixXd(p.weight(l)).sparseView(0.0, 0.0);
    layer.biases = p.bias(l);
    layer.exponents.assign(static_cast<std::size_t>(cfg.width), cfg.activation_pattern[static_cast<std::size_t>(l)]);
    out.hidden.push_back(std::move(layer));
  }
  const Eigen::MatrixXd row = p.theta.segment(p.out_weights, cfg.width).transpose();
  out.out_weights = row.sparseView(0.0, 0.0);
  out.out_biases = Eigen::VectorXd::Constant(1, p.theta[p.out_bias]);
  return out;
}

std::pair<MLPConfig, MLPParams> mlp_from_network(const net::Network& net) {
  if (net.output_dim() != 1) throw std::invalid_argument("mlp_from_network: network must have one output");
  if (net.depth() < 1) throw std::invalid_argument("mlp_from_network: network has no hidden layers");
  MLPConfig cfg;
  cfg.input_dim = net.input_dim;
  cfg.depth = net.depth();
  cfg.width = net.hidden.front().out_dim();
  cfg.activation_pattern.clear();
  for (const auto& layer : net.hidden) {
    if (layer.out_dim() != cfg.width) throw std::invalid_argument("mlp_from_network: hidden widths differ");
    for (int t : layer.exponents) {
      if (t != layer.exponents.front()) throw std::invalid_argument("mlp_from_network: mixed exponents in a layer");
    }
    cfg.activation_pattern.push_back(layer.exponents.front());
  }
  MLPParams p = mlp_layout(cfg);
  for (int l = 0; l < cfg.depth; ++l) {
    const auto& layer = net.hidden[static_cast<std::size_t>(l)];
    p.weight(l) = Eigen::MatrixXd(layer.weights);
    p.bias(l) = layer.biases;
  }
  p.theta.segment(p.out_weights, cfg.width) = Eigen::MatrixXd(net.out_weights).transpose();
  p.theta[p.out_bias] = net.out_biases[0];
  return {cfg, p};
}

}  // namespace splinenet::train
