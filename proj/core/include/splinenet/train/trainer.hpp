#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "splinenet/manifold/sample_set.hpp"
#include "splinenet/manifold/target.hpp"
#include "splinenet/train/mlp.hpp"

namespace splinenet::train {

struct TrainConfig {
  int steps = 2000;
  int batch_size = 2048;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  int eval_every = 100;                 ///< full-data loss cadence for best-parameter tracking
  double divergence_threshold = 1e6;

  /// Throws std::invalid_argument unless steps >= 0 and the rest are positive.
  void validate() const;
};

struct TrainResult {
  MLPParams best;
  double best_loss = 0.0;               ///< full-data loss of best
  int best_step = 0;
  std::vector<double> step_loss;        ///< minibatch loss (scaled by n / batch) before each update
  std::vector<std::pair<int, double>> checkpoints;  ///< (step, full-data loss)
  bool diverged = false;
  int steps_run = 0;
};

/// Weighted regression data: columns of xs with targets and quadrature weights.
struct Dataset {
  Eigen::MatrixXd xs;
  std::vector<double> targets;
  std::vector<double> weights;
};

Dataset make_dataset(const manifold::WeightedSampleSet& samples, const manifold::TargetFunction& target);

/// Adam on minibatches drawn without replacement (reshuffled every epoch).
/// The full-data loss is checked at step 0, every eval_every steps and at the
/// end; the lowest one selects best. A loss above divergence_threshold or a
/// non-finite value stops training early with diverged set.
TrainResult train(const TrainConfig& cfg, const MLPConfig& mcfg, const Dataset& data);

}  // namespace splinenet::train
