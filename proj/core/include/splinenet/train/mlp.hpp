#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "splinenet/common/jet.hpp"
#include "splinenet/net/network.hpp"

namespace splinenet::train {

/// Fully connected ReLU^k network with one exponent per hidden layer.
struct MLPConfig {
  int input_dim = 3;
  int width = 64;
  int depth = 2;                             ///< hidden layers
  std::vector<int> activation_pattern{4, 4};  ///< one exponent per hidden layer
  bool layer_norm = false;
  std::optional<double> activation_clamp_max;
  std::optional<double> weight_clip;
  bool sk_rescale = false;

  /// depth copies of exponent k.
  static MLPConfig uniform(int width, int depth, int k);
  /// Throws std::invalid_argument on an inconsistent or out-of-range field.
  void validate() const;
};

/// Offsets into the flat parameter vector for one hidden layer.
struct LayerSlice {
  long weights = 0;  ///< width x fan_in, row-major
  long biases = 0;
  long gains = -1;   ///< layer-norm gain, -1 without layer norm
  long offsets = -1;
  int rows = 0;
  int cols = 0;
};

/// Parameters stored in one flat vector so the optimizer sees a single array.
struct MLPParams {
  Eigen::VectorXd theta;
  std::vector<LayerSlice> layers;
  long out_weights = 0;  ///< width entries
  long out_bias = 0;

  using RowMajorMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  using ConstRowMajorMap =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

  RowMajorMap weight(int l);
  [[nodiscard]] ConstRowMajorMap weight(int l) const;
  Eigen::Map<Eigen::VectorXd> bias(int l);
  [[nodiscard]] Eigen::Map<const Eigen::VectorXd> bias(int l) const;

  /// 1 for affine weights and biases, 0 for layer-norm gains and offsets.
  [[nodiscard]] Eigen::VectorXd linear_mask() const;
  [[nodiscard]] long size() const noexcept { return theta.size(); }
};

/// Zero-filled parameters with the layout implied by cfg (layer-norm gains 1).
MLPParams mlp_layout(const MLPConfig& cfg);

/// Weights and biases uniform in +-1/sqrt(fan_in) from mt19937_64(seed).
/// With sk_rescale the weights leaving a ReLU^k layer are multiplied by
/// sk_scale(k). Weight clip, if set, is applied to the linear entries.
MLPParams mlp_init(const MLPConfig& cfg, std::uint64_t seed);

/// s_k = sqrt(Var ReLU(z) / Var ReLU^k(z)) for z ~ N(0, 1).
double sk_scale(int k);
/// E[max(z, 0)^p] for z ~ N(0, 1).
double half_normal_moment(int p);

inline constexpr double kLayerNormEps = 1e-5;

/// Intermediate values of a batched forward pass (columns are samples).
struct ForwardCache {
  std::vector<Eigen::MatrixXd> affine;       ///< W a + b
  std::vector<Eigen::MatrixXd> normalized;   ///< layer-norm zhat (empty without layer norm)
  std::vector<Eigen::RowVectorXd> inv_std;   ///< per-sample 1/sqrt(var + eps)
  std::vector<Eigen::MatrixXd> pre;          ///< activation input
  std::vector<Eigen::MatrixXd> act;          ///< activation output after clamping
  Eigen::RowVectorXd output;
};

/// Affine -> optional layer norm -> ReLU^k -> optional clamp per hidden
/// layer, then the scalar output row. xs is input_dim x batch.
/// Throws std::runtime_error naming the layer if a value becomes non-finite.
Eigen::RowVectorXd mlp_forward(const MLPParams& p, const MLPConfig& cfg, const Eigen::MatrixXd& xs,
                               ForwardCache* cache = nullptr);

/// L = sum_i w_i (u(x_i) - y_i)^2 and, if grad is non-null, dL/dtheta by
/// reverse accumulation. Clamped units pass no gradient.
/// Throws std::runtime_error on a non-finite loss or gradient.
double mlp_loss_grad(const MLPParams& p, const MLPConfig& cfg, const Eigen::MatrixXd& xs,
                     std::span<const double> targets, std::span<const double> weights, Eigen::VectorXd* grad);

/// Value, input gradient and input Hessian at one point (input_dim <= 3;
/// unused jet coordinates stay zero).
struct SurfaceJet {
  Jet2 jet;
  /// True when some layer has exponent 1 or 2 and the Hessian came from
  /// central differences (step kHessianFdStep) of the exact gradient.
  bool fd_fallback = false;
};

inline constexpr double kHessianFdStep = 1e-4;

/// Forward-mode jet of the network, exact for all exponents >= 3.
SurfaceJet mlp_hvp_surface(const MLPParams& p, const MLPConfig& cfg, std::span<const double> x);
/// Forward-mode jet without the fallback; second derivatives of exponent-1
/// and -2 units use the right-limit convention at the kink.
Jet2 mlp_jet(const MLPParams& p, const MLPConfig& cfg, std::span<const double> x);

/// Exports a network without layer norm or clamping.
/// Throws std::invalid_argument otherwise.
net::Network mlp_to_network(const MLPParams& p, const MLPConfig& cfg);

/// Imports a scalar-output network whose hidden layers share one width and
/// each use a single exponent. Throws std::invalid_argument otherwise.
std::pair<MLPConfig, MLPParams> mlp_from_network(const net::Network& net);

}  // namespace splinenet::train
