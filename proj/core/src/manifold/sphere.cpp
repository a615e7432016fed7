#include "splinenet/manifold/sphere.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace splinenet::manifold {

namespace {

Eigen::Vector3d rotate(const Eigen::Vector3d& x, int i, int j, double angle) {
  Eigen::Vector3d y = x;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  y[i] = c * x[i] - s * x[j];
  y[j] = s * x[i] + c * x[j];
  return y;
}

}  // namespace

WeightedSampleSet fibonacci_grid(int count) {
  if (count < 10) throw std::invalid_argument("fibonacci_grid: count must be >= 10, got " + std::to_string(count));
  WeightedSampleSet set;
  set.kind = ManifoldKind::sphere;
  set.generator = "fibonacci";
  set.lattice_offset = 0.5;
  set.points.reserve(static_cast<std::size_t>(count));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 2.0 * set.lattice_offset) / count;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    set.points.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
  }
  set.weights.assign(static_cast<std::size_t>(count), 4.0 * std::numbers::pi / count);
  return set;
}

double sphere_eigenvalue(int n, int dim) { return static_cast<double>(n) * (n + dim - 2); }

double y31_constant() { return 0.25 * std::sqrt(21.0 / (2.0 * std::numbers::pi)); }

double y31(const Eigen::Vector3d& x) {
  if (std::abs(x.norm() - 1.0) > 1e-9) throw std::domain_error("y31: point is not on the unit sphere");
  return y31_jet(x).v;
}

Jet2 y31_jet(const Eigen::Vector3d& x) {
  const Jet2 a = Jet2::variable(0, x[0]);
  const Jet2 b = Jet2::variable(1, x[1]);
  const Jet2 c = Jet2::variable(2, x[2]);
  return y31_constant() * (a * (4.0 * c * c - a * a - b * b));
}

Eigen::Vector3d y31_ambient_grad(const Eigen::Vector3d& x) { return y31_jet(x).g; }

Eigen::Matrix3d tangent_projector(const Eigen::Vector3d& x) {
  return Eigen::Matrix3d::Identity() - x * x.transpose();
}

Eigen::Vector3d sphere_grad(const AmbientGradient& ambient_grad, const Eigen::Vector3d& x) {
  const Eigen::Vector3d g = ambient_grad(x);
  return g - x * x.dot(g);
}

double sphere_lb(const SurfaceFunction& f, const Eigen::Vector3d& x, double h) {
  const double f0 = f(x);
  double acc = 0.0;
  for (const auto& [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
    acc += f(rotate(x, i, j, h)) - 2.0 * f0 + f(rotate(x, i, j, -h));
  }
  return acc / (h * h);
}

double sphere_lb_from_jet(const Jet2& ambient, const Eigen::Vector3d& x) {
  return ambient.h.trace() - x.dot(ambient.h * x) - 2.0 * x.dot(ambient.g);
}

}  // namespace splinenet::manifold
