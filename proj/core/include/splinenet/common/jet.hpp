#pragma once

#include <Eigen/Core>
#include <cmath>

namespace splinenet {

/// Second-order forward-mode jet of a scalar function on R^3: value,
/// gradient and Hessian, propagated through arithmetic exactly.
struct Jet2 {
  double v = 0.0;
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();

  Jet2() = default;
  Jet2(double value) : v(value) {}  // NOLINT(google-explicit-constructor): constants mix freely
  Jet2(double value, const Eigen::Vector3d& grad, const Eigen::Matrix3d& hess) : v(value), g(grad), h(hess) {}

  /// Coordinate function x_i evaluated at value.
  static Jet2 variable(int i, double value) {
    Jet2 j(value);
    j.g[i] = 1.0;
    return j;
  }
};

/// f(u) given f(u.v), f'(u.v), f''(u.v).
inline Jet2 chain(const Jet2& u, double f0, double f1, double f2) {
  return {f0, f1 * u.g, f1 * u.h + f2 * u.g * u.g.transpose()};
}

inline Jet2 operator+(const Jet2& a, const Jet2& b) { return {a.v + b.v, a.g + b.g, a.h + b.h}; }
inline Jet2 operator-(const Jet2& a, const Jet2& b) { return {a.v - b.v, a.g - b.g, a.h - b.h}; }
inline Jet2 operator-(const Jet2& a) { return {-a.v, -a.g, -a.h}; }
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.v * b.v, a.v * b.g + b.v * a.g, a.v * b.h + b.v * a.h + a.g * b.g.transpose() + b.g * a.g.transpose()};
}
inline Jet2 operator*(double s, const Jet2& a) { return {s * a.v, s * a.g, s * a.h}; }
inline Jet2 operator*(const Jet2& a, double s) { return s * a; }
inline Jet2 reciprocal(const Jet2& a) {
  const double r = 1.0 / a.v;
  return chain(a, r, -r * r, 2.0 * r * r * r);
}
inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

inline Jet2 sin(const Jet2& a) { return chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline Jet2 cos(const Jet2& a) { return chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
inline Jet2 sqrt(const Jet2& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}

/// atan2(y, x) with the usual branch; derivatives are those of the smooth
/// angle function away from the origin.
inline Jet2 atan2(const Jet2& y, const Jet2& x) {
  const double r2 = x.v * x.v + y.v * y.v;
  // d theta = (x dy - y dx) / r2
  const Eigen::Vector3d grad = (x.v * y.g - y.v * x.g) / r2;
  // Differentiate (x y_i - y x_i) / r2 once more; cross(i, j) = y_i x_j - x_i y_j.
  const Eigen::Matrix3d cross = y.g * x.g.transpose() - x.g * y.g.transpose();
  const Eigen::Vector3d r2_g = 2.0 * (x.v * x.g + y.v * y.g);
  Eigen::Matrix3d hess = (x.v * y.h - y.v * x.h + cross) / r2 - grad * r2_g.transpose() / r2;
  hess = 0.5 * (hess + hess.transpose());
  return {std::atan2(y.v, x.v), grad, hess};
}

/// max(z, 0)^t with derivatives (right-limit convention at 0).
inline Jet2 relu_power(const Jet2& a, int t) {
  if (a.v <= 0.0) return Jet2(0.0);
  const double p2 = t >= 2 ? std::pow(a.v, t - 2) : 0.0;
  const double p1 = t >= 1 ? std::pow(a.v, t - 1) : 0.0;
  return chain(a, std::pow(a.v, t), t * p1, t * (t - 1) * p2);
}

}  // namespace splinenet
