#pragma once

#include <Eigen/Core>
#include <functional>

#include "splinenet/manifold/sample_set.hpp"
#include "splinenet/manifold/target.hpp"
#include "splinenet/train/mlp.hpp"

namespace splinenet::train {

/// Weighted squared errors sum_i w_i |model - target|^2 of the value, the
/// tangential gradient and the Laplace-Beltrami image.
struct ComponentErrors {
  double wmse_f = 0.0;
  double wmse_grad = 0.0;
  double wmse_lap = 0.0;
  bool fd_fallback = false;  ///< some model Hessian came from finite differences
};

/// Ambient jet of a model at a surface point.
using SurfaceModel = std::function<SurfaceJet(const Eigen::Vector3d&)>;

/// Target quantities are analytic; model gradients and Laplace-Beltrami are
/// formed from the ambient jet by tangential projection and the surface
/// second-order formulas. Throws std::invalid_argument if the target and the
/// samples live on different surfaces.
ComponentErrors eval_components(const SurfaceModel& model, const manifold::WeightedSampleSet& samples,
                                const manifold::TargetFunction& target);

ComponentErrors eval_components(const MLPParams& p, const MLPConfig& cfg, const manifold::WeightedSampleSet& samples,
                                const manifold::TargetFunction& target);

}  // namespace splinenet::train
