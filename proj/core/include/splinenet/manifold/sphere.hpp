#pragma once

#include <Eigen/Core>
#include <functional>

#include "splinenet/common/jet.hpp"
#include "splinenet/manifold/sample_set.hpp"

namespace splinenet::manifold {

using SurfaceFunction = std::function<double(const Eigen::Vector3d&)>;
using AmbientGradient = std::function<Eigen::Vector3d(const Eigen::Vector3d&)>;

/// Golden-angle lattice: z_i = 1 - (2i + 1)/count, phi_i = i * pi (3 - sqrt 5),
/// i.e. height offset 1/2; every weight is 4 pi / count.
/// Throws std::invalid_argument for count < 10.
WeightedSampleSet fibonacci_grid(int count);

/// Eigenvalue n(n + dim - 2) of -Laplace-Beltrami on degree-n harmonics of S^(dim-1).
double sphere_eigenvalue(int n, int dim = 3);

/// Real orthonormal degree-3, order-1 harmonic (no Condon-Shortley phase):
/// c x (4z^2 - x^2 - y^2), c = sqrt(21 / (2 pi)) / 4.
/// Throws std::domain_error if | |x| - 1 | > 1e-9.
double y31(const Eigen::Vector3d& x);
/// Gradient of the cubic polynomial above (defined on all of R^3).
Eigen::Vector3d y31_ambient_grad(const Eigen::Vector3d& x);
/// Cubic polynomial with its gradient and Hessian.
Jet2 y31_jet(const Eigen::Vector3d& x);
double y31_constant();

/// I - x x^T.
Eigen::Matrix3d tangent_projector(const Eigen::Vector3d& x);

/// Tangential gradient P_x g(x).
Eigen::Vector3d sphere_grad(const AmbientGradient& ambient_grad, const Eigen::Vector3d& x);

/// Laplace-Beltrami on the unit sphere as sum_{i<j} D_ij^2, each angular
/// derivative D_ij^2 f taken as a central second difference along the
/// rotation in the (i, j) plane with angle step h. Sign: Delta Y_n = -n(n+1) Y_n.
double sphere_lb(const SurfaceFunction& f, const Eigen::Vector3d& x, double h = 1e-4);

/// Laplace-Beltrami from an ambient jet at a unit vector:
/// tr H - x^T H x - 2 x . grad F.
double sphere_lb_from_jet(const Jet2& ambient, const Eigen::Vector3d& x);

}  // namespace splinenet::manifold
