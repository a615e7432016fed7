#include "splinenet/manifold/target.hpp"

#include <cmath>
#include <stdexcept>

#include "splinenet/manifold/sphere.hpp"
#include "splinenet/manifold/torus.hpp"

namespace splinenet::manifold {

namespace {

double fourier_value(const TorusFourier& t, double u, double v) {
  return t.A * std::cos(t.m * u) + t.B * std::sin(t.n * v);
}

void check_unit(const Eigen::Vector3d& x) {
  if (std::abs(x.norm() - 1.0) > 1e-9) throw std::domain_error("sphere target: point is not on the unit sphere");
}

}  // namespace

TargetFunction TargetFunction::sphere_y31() {
  TargetFunction t;
  t.variant_ = SphereY31{};
  return t;
}

TargetFunction TargetFunction::torus_fourier(const TorusFourier& f, const TorusParams& p) {
  p.validate();
  TargetFunction t;
  t.variant_ = f;
  t.params_ = p;
  return t;
}

ManifoldKind TargetFunction::manifold() const noexcept {
  return std::holds_alternative<SphereY31>(variant_) ? ManifoldKind::sphere : ManifoldKind::torus;
}

double TargetFunction::value(const Eigen::Vector3d& x) const {
  if (const auto* f = fourier()) {
    const auto [u, v] = recover_angles(x, params_);
    return fourier_value(*f, u, v);
  }
  return y31(x);
}

Eigen::Vector3d TargetFunction::tangential_grad(const Eigen::Vector3d& x) const {
  if (const auto* f = fourier()) {
    const auto [u, v] = recover_angles(x, params_);
    const double rho = params_.R + params_.r * std::cos(v);
    const double f_u = -f->A * f->m * std::sin(f->m * u);
    const double f_v = f->B * f->n * std::cos(f->n * v);
    const Eigen::Vector3d xu(-rho * std::sin(u), rho * std::cos(u), 0.0);
    const Eigen::Vector3d xv(-params_.r * std::sin(v) * std::cos(u), -params_.r * std::sin(v) * std::sin(u),
                             params_.r * std::cos(v));
    return f_u / (rho * rho) * xu + f_v / (params_.r * params_.r) * xv;
  }
  check_unit(x);
  return sphere_grad(y31_ambient_grad, x);
}

double TargetFunction::laplace_beltrami(const Eigen::Vector3d& x) const {
  if (fourier() != nullptr) {
    const auto [u, v] = recover_angles(x, params_);
    return torus_lb_closed(*this, u, v, params_);
  }
  return -sphere_eigenvalue(3) * y31(x);
}

Jet2 TargetFunction::ambient_jet(const Eigen::Vector3d& x) const {
  if (const auto* f = fourier()) {
    const Jet2 a = Jet2::variable(0, x[0]);
    const Jet2 b = Jet2::variable(1, x[1]);
    const Jet2 c = Jet2::variable(2, x[2]);
    const Jet2 u = atan2(b, a);
    const Jet2 v = atan2(c, sqrt(a * a + b * b) - Jet2(params_.R));
    return f->A * cos(static_cast<double>(f->m) * u) + f->B * sin(static_cast<double>(f->n) * v);
  }
  return y31_jet(x);
}

void TargetFunction::check_compatible(const WeightedSampleSet& set) const {
  if (set.kind != manifold()) {
    throw std::invalid_argument("target lives on the " + to_string(manifold()) + " but samples are on the " +
                                to_string(set.kind));
  }
  if (set.kind == ManifoldKind::torus && (set.torus.R != params_.R || set.torus.r != params_.r)) {
    throw std::invalid_argument("target and samples use different torus radii");
  }
}

double torus_lb_closed(const TargetFunction& t, double u, double v, const TorusParams& p) {
  const auto* f = t.fourier();
  if (f == nullptr) throw std::invalid_argument("torus_lb_closed: sphere target has no torus image");
  const double rho = p.R + p.r * std::cos(v);
  const double m2 = static_cast<double>(f->m) * f->m;
  const double n = f->n;
  const double cos_part = -m2 * f->A * std::cos(f->m * u) / (rho * rho);
  const double sin_part =
      f->B * n / (p.r * p.r * rho) * (-p.r * std::sin(v) * std::cos(n * v) - n * rho * std::sin(n * v));
  return cos_part + sin_part;
}

}  // namespace splinenet::manifold
