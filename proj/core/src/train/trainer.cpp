#include "splinenet/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "splinenet/train/adam.hpp"

namespace splinenet::train {

namespace {

// Fisher-Yates with explicit index draws; std::shuffle is not specified
// bit-for-bit across standard libraries.
void shuffle(std::vector<long>& idx, std::mt19937_64& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const auto j = static_cast<std::size_t>(u * static_cast<double>(i));
    std::swap(idx[i - 1], idx[j]);
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (steps < 0) throw std::invalid_argument("TrainConfig: steps must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("TrainConfig: learning_rate must be positive");
  if (eval_every < 1) throw std::invalid_argument("TrainConfig: eval_every must be >= 1");
  if (!(divergence_threshold > 0.0)) throw std::invalid_argument("TrainConfig: divergence_threshold must be positive");
}

Dataset make_dataset(const manifold::WeightedSampleSet& samples, const manifold::TargetFunction& target) {
  target.check_compatible(samples);
  Dataset d;
  d.xs.resize(3, static_cast<long>(samples.size()));
  d.targets.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    d.xs.col(static_cast<long>(i)) = samples.points[i];
    d.targets.push_back(target.value(samples.points[i]));
  }
  d.weights = samples.weights;
  return d;
}

TrainResult train(const TrainConfig& cfg, const MLPConfig& mcfg, const Dataset& data) {
  cfg.validate();
  mcfg.validate();
  const long n = data.xs.cols();
  if (n == 0) throw std::invalid_argument("train: empty dataset");

  TrainResult res;
  MLPParams p = mlp_init(mcfg, cfg.seed);
  AdamState adam = adam_init(p.size(), cfg.learning_rate);
  res.best = p;

  const auto full_loss = [&](const MLPParams& q) {
    try {
      return mlp_loss_grad(q, mcfg, data.xs, data.targets, data.weights, nullptr);
    } catch (const std::runtime_error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const auto checkpoint = [&](int step) {
    const double loss = full_loss(p);
    res.checkpoints.emplace_back(step, loss);
    if (!std::isfinite(loss) || loss > cfg.divergence_threshold) {
      res.diverged = true;
      return;
    }
    if (res.checkpoints.size() == 1 || loss < res.best_loss) {
      res.best_loss = loss;
      res.best_step = step;
      res.best = p;
    }
  };
  checkpoint(0);
  if (res.diverged) {
    res.best_loss = res.checkpoints.front().second;
    return res;
  }

  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<long> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0L);
  std::size_t cursor = order.size();
  const long bs = std::min<long>(cfg.batch_size, n);
  Eigen::MatrixXd xb(data.xs.rows(), bs);
  std::vector<double> tb(static_cast<std::size_t>(bs));
  std::vector<double> wb(static_cast<std::size_t>(bs));
  Eigen::VectorXd grad;
  res.step_loss.reserve(static_cast<std::size_t>(cfg.steps));

  for (int step = 1; step <= cfg.steps; ++step) {
    if (cursor + static_cast<std::size_t>(bs) > order.size()) {
      shuffle(order, rng);
      cursor = 0;
    }
    const double scale = static_cast<double>(n) / static_cast<double>(bs);
    for (long j = 0; j < bs; ++j) {
      const long i = order[cursor + static_cast<std::size_t>(j)];
      xb.col(j) = data.xs.col(i);
      tb[static_cast<std::size_t>(j)] = data.targets[static_cast<std::size_t>(i)];
      wb[static_cast<std::size_t>(j)] = scale * data.weights[static_cast<std::size_t>(i)];
    }
    cursor += static_cast<std::size_t>(bs);
    double loss = 0.0;
    try {
      loss = mlp_loss_grad(p, mcfg, xb, tb, wb, &grad);
    } catch (const std::runtime_error&) {
      loss = std::numeric_limits<double>::infinity();
    }
    res.step_loss.push_back(loss);
    res.steps_run = step;
    if (!std::isfinite(loss) || loss > cfg.divergence_threshold) {
      res.diverged = true;
      break;
    }
    adam_step(adam, p, grad, mcfg.weight_clip);
    if (step % cfg.eval_every == 0 || step == cfg.steps) {
      checkpoint(step);
      if (res.diverged) break;
    }
  }
  return res;
}

}  // namespace splinenet::train
