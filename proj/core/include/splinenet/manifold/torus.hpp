#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "splinenet/common/jet.hpp"
#include "splinenet/manifold/sample_set.hpp"

namespace splinenet::manifold {

/// X(u, v) = ((R + r cos v) cos u, (R + r cos v) sin u, r sin v).
Eigen::Vector3d torus_embed(double u, double v, const TorusParams& p);

/// (u, v) in (-pi, pi] with torus_embed(u, v) == x. Throws std::domain_error
/// if x is farther than 1e-8 from the surface.
std::pair<double, double> recover_angles(const Eigen::Vector3d& x, const TorusParams& p);

/// Outward unit normal (cos u cos v, sin u cos v, sin v).
Eigen::Vector3d torus_normal(double u, double v);

/// Tangential part of an ambient vector at the surface point with angles (u, v).
Eigen::Vector3d torus_tangential(const Eigen::Vector3d& ambient, double u, double v);

/// count points with (u, v) uniform on [0, 2 pi)^2 (mt19937_64, 53-bit
/// uniforms), weights (2 pi)^2 r (R + r cos v) / count.
WeightedSampleSet torus_sample(int count, const TorusParams& p, std::uint64_t seed);

using AngleFunction = std::function<double(double u, double v)>;

/// Step sizes for torus_lb_numeric.
struct TorusFdSteps {
  double inner = 1e-5;  ///< central differences for f_u, f_v
  double outer = 1e-4;  ///< central differences of the fluxes
};

/// Laplace-Beltrami in divergence form
/// (1/sqrt g) [d_u(sqrt g g^uu f_u) + d_v(sqrt g g^vv f_v)],
/// sqrt g = r (R + r cos v), g^uu = (R + r cos v)^-2, g^vv = r^-2.
/// f_u and f_v come from f_uv by central differences unless supplied.
double torus_lb_numeric(const AngleFunction& f_uv, double u, double v, const TorusParams& p,
                        const TorusFdSteps& steps = {}, const std::optional<AngleFunction>& f_u = std::nullopt,
                        const std::optional<AngleFunction>& f_v = std::nullopt);

/// Laplace-Beltrami at X(u, v) of the restriction of an ambient function,
/// using f_uu = X_u^T H X_u + grad . X_uu (and likewise for v).
double torus_lb_from_jet(const Jet2& ambient, double u, double v, const TorusParams& p);

}  // namespace splinenet::manifold
