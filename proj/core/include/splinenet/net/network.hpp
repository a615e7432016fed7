#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <limits>
#include <set>
#include <span>
#include <vector>

namespace splinenet::net {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Hidden layer: unit j computes max(W_j x + b_j, 0)^exponents[j].
/// Exponents are per unit so mixed-activation layers are representable;
/// exponent 1 is the plain ReLU.
struct Layer {
  SparseMatrix weights;          // out x in
  Eigen::VectorXd biases;        // out
  std::vector<int> exponents;    // out, each >= 1

  [[nodiscard]] int in_dim() const noexcept { return static_cast<int>(weights.cols()); }
  [[nodiscard]] int out_dim() const noexcept { return static_cast<int>(weights.rows()); }
};

/// Feed-forward network: hidden ReLU^t layers followed by an affine output layer.
class Network {
 public:
  Network() = default;
  /// Affine map x -> W x + b with no hidden layers.
  Network(SparseMatrix out_weights, Eigen::VectorXd out_biases);

  int input_dim = 0;
  std::vector<Layer> hidden;
  SparseMatrix out_weights;
  Eigen::VectorXd out_biases;
  double weight_bound = std::numeric_limits<double>::infinity();
  long parameter_budget = std::numeric_limits<long>::max();

  [[nodiscard]] int output_dim() const noexcept { return static_cast<int>(out_weights.rows()); }
  /// Number of hidden layers.
  [[nodiscard]] int depth() const noexcept { return static_cast<int>(hidden.size()); }
  [[nodiscard]] std::vector<int> widths() const;

  /// S: nonzero weights plus nonzero biases over all layers (exact-zero test).
  [[nodiscard]] long nonzero_count() const;
  [[nodiscard]] double max_abs_parameter() const;
  [[nodiscard]] std::set<int> exponent_set() const;

  /// Throws std::logic_error on inconsistent dimensions, invalid exponents,
  /// non-finite parameters, a parameter above weight_bound, or S above the budget.
  void validate() const;

  /// Drops stored entries that are exactly zero.
  void prune_zeros();
};

/// Single forward pass. Throws std::invalid_argument on dimension mismatch.
Eigen::VectorXd net_eval(const Network& net, std::span<const double> x);

/// Forward pass on the columns of xs (input_dim x batch).
Eigen::MatrixXd net_eval_batch(const Network& net, const Eigen::MatrixXd& xs);

/// max(z, 0)^t.
double relu_power(double z, int t);

}  // namespace splinenet::net
