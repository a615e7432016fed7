#pragma once

#include <Eigen/Core>
#include <variant>

#include "splinenet/common/jet.hpp"
#include "splinenet/manifold/sample_set.hpp"

namespace splinenet::manifold {

/// The degree-3, order-1 real harmonic y31 on the unit sphere.
struct SphereY31 {};

/// A cos(m u) + B sin(n v) in torus angles.
struct TorusFourier {
  double A = 1.0;
  int m = 2;
  double B = 1.0;
  int n = 1;
};

/// Analytic target on a surface: value, gradients and the exact
/// Laplace-Beltrami image (Delta Y_n = -n(n+1) Y_n sign convention).
class TargetFunction {
 public:
  static TargetFunction sphere_y31();
  static TargetFunction torus_fourier(const TorusFourier& t, const TorusParams& p = {});

  [[nodiscard]] ManifoldKind manifold() const noexcept;
  [[nodiscard]] const TorusParams& torus() const noexcept { return params_; }
  /// nullptr for the sphere variant.
  [[nodiscard]] const TorusFourier* fourier() const noexcept { return std::get_if<TorusFourier>(&variant_); }

  [[nodiscard]] double value(const Eigen::Vector3d& x) const;
  /// Surface gradient as an ambient 3-vector.
  [[nodiscard]] Eigen::Vector3d tangential_grad(const Eigen::Vector3d& x) const;
  [[nodiscard]] double laplace_beltrami(const Eigen::Vector3d& x) const;
  /// Jet of an ambient extension. Sphere: the cubic polynomial. Torus: the
  /// function of atan2 angles, constant along surface normals.
  [[nodiscard]] Jet2 ambient_jet(const Eigen::Vector3d& x) const;

  /// Throws std::invalid_argument if the set lives on a different surface
  /// (or on a torus with other radii).
  void check_compatible(const WeightedSampleSet& set) const;

 private:
  std::variant<SphereY31, TorusFourier> variant_;
  TorusParams params_;
};

/// Exact Laplace-Beltrami of A cos(m u) + B sin(n v) at X(u, v):
/// -m^2 A cos(mu) / (R + r cos v)^2
///   + B n / (r^2 (R + r cos v)) * (-r sin v cos(nv) - n (R + r cos v) sin(nv)).
/// Throws std::invalid_argument for the sphere variant.
double torus_lb_closed(const TargetFunction& t, double u, double v, const TorusParams& p);

}  // namespace splinenet::manifold
