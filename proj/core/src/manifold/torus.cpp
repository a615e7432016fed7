#include "splinenet/manifold/torus.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace splinenet::manifold {

Eigen::Vector3d torus_embed(double u, double v, const TorusParams& p) {
  const double rho = p.R + p.r * std::cos(v);
  return {rho * std::cos(u), rho * std::sin(u), p.r * std::sin(v)};
}

std::pair<double, double> recover_angles(const Eigen::Vector3d& x, const TorusParams& p) {
  const double rho = std::hypot(x.x(), x.y());
  const double residual = std::abs(std::hypot(rho - p.R, x.z()) - p.r);
  if (residual > 1e-8) {
    throw std::domain_error("recover_angles: point is " + std::to_string(residual) + " away from the torus");
  }
  return {std::atan2(x.y(), x.x()), std::atan2(x.z(), rho - p.R)};
}

Eigen::Vector3d torus_normal(double u, double v) {
  return {std::cos(u) * std::cos(v), std::sin(u) * std::cos(v), std::sin(v)};
}

Eigen::Vector3d torus_tangential(const Eigen::Vector3d& ambient, double u, double v) {
  const Eigen::Vector3d n = torus_normal(u, v);
  return ambient - n * n.dot(ambient);
}

WeightedSampleSet torus_sample(int count, const TorusParams& p, std::uint64_t seed) {
  if (count < 10) throw std::invalid_argument("torus_sample: count must be >= 10, got " + std::to_string(count));
  p.validate();
  WeightedSampleSet set;
  set.kind = ManifoldKind::torus;
  set.torus = p;
  set.generator = "torus-uniform";
  set.seed = seed;
  std::mt19937_64 rng(seed);
  // Explicit 53-bit construction: std::uniform_real_distribution is not
  // specified bit-for-bit across standard libraries.
  const auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const double two_pi = 2.0 * std::numbers::pi;
  set.points.reserve(static_cast<std::size_t>(count));
  set.weights.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double u = two_pi * uniform();
    const double v = two_pi * uniform();
    set.points.push_back(torus_embed(u, v, p));
    set.weights.push_back(two_pi * two_pi * p.r * (p.R + p.r * std::cos(v)) / count);
  }
  return set;
}

double torus_lb_numeric(const AngleFunction& f_uv, double u, double v, const TorusParams& p,
                        const TorusFdSteps& steps, const std::optional<AngleFunction>& f_u,
                        const std::optional<AngleFunction>& f_v) {
  const double h = steps.inner;
  const auto du = [&](double a, double b) {
    return f_u ? (*f_u)(a, b) : (f_uv(a + h, b) - f_uv(a - h, b)) / (2.0 * h);
  };
  const auto dv = [&](double a, double b) {
    return f_v ? (*f_v)(a, b) : (f_uv(a, b + h) - f_uv(a, b - h)) / (2.0 * h);
  };
  const auto rho = [&](double b) { return p.R + p.r * std::cos(b); };
  // Fluxes sqrt(g) g^uu f_u = r f_u / rho and sqrt(g) g^vv f_v = rho f_v / r.
  const auto flux_u = [&](double a, double b) { return p.r * du(a, b) / rho(b); };
  const auto flux_v = [&](double a, double b) { return rho(b) * dv(a, b) / p.r; };
  const double hh = steps.outer;
  const double div = (flux_u(u + hh, v) - flux_u(u - hh, v)) / (2.0 * hh) +
                     (flux_v(u, v + hh) - flux_v(u, v - hh)) / (2.0 * hh);
  return div / (p.r * rho(v));
}

double torus_lb_from_jet(const Jet2& ambient, double u, double v, const TorusParams& p) {
  const double cu = std::cos(u);
  const double su = std::sin(u);
  const double cv = std::cos(v);
  const double sv = std::sin(v);
  const double rho = p.R + p.r * cv;
  const Eigen::Vector3d xu(-rho * su, rho * cu, 0.0);
  const Eigen::Vector3d xuu(-rho * cu, -rho * su, 0.0);
  const Eigen::Vector3d xv(-p.r * sv * cu, -p.r * sv * su, p.r * cv);
  const Eigen::Vector3d xvv(-p.r * cv * cu, -p.r * cv * su, -p.r * sv);
  const double f_uu = xu.dot(ambient.h * xu) + ambient.g.dot(xuu);
  const double f_vv = xv.dot(ambient.h * xv) + ambient.g.dot(xvv);
  const double f_v = ambient.g.dot(xv);
  return f_uu / (rho * rho) + f_vv / (p.r * p.r) - sv * f_v / (p.r * rho);
}

}  // namespace splinenet::manifold
