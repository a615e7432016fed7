#include "splinenet/train/metrics.hpp"

#include "splinenet/manifold/sphere.hpp"
#include "splinenet/manifold/torus.hpp"

namespace splinenet::train {

ComponentErrors eval_components(const SurfaceModel& model, const manifold::WeightedSampleSet& samples,
                                const manifold::TargetFunction& target) {
  target.check_compatible(samples);
  const bool sphere = samples.kind == manifold::ManifoldKind::sphere;
  ComponentErrors e;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Eigen::Vector3d& x = samples.points[i];
    const double w = samples.weights[i];
    const SurfaceJet m = model(x);
    e.fd_fallback = e.fd_fallback || m.fd_fallback;
    Eigen::Vector3d grad;
    double lap = 0.0;
    if (sphere) {
      grad = m.jet.g - x * x.dot(m.jet.g);
      lap = manifold::sphere_lb_from_jet(m.jet, x);
    } else {
      const auto [u, v] = manifold::recover_angles(x, samples.torus);
      grad = manifold::torus_tangential(m.jet.g, u, v);
      lap = manifold::torus_lb_from_jet(m.jet, u, v, samples.torus);
    }
    const double df = m.jet.v - target.value(x);
    const double dl = lap - target.laplace_beltrami(x);
    e.wmse_f += w * df * df;
    e.wmse_grad += w * (grad - target.tangential_grad(x)).squaredNorm();
    e.wmse_lap += w * dl * dl;
  }
  return e;
}

ComponentErrors eval_components(const MLPParams& p, const MLPConfig& cfg, const manifold::WeightedSampleSet& samples,
                                const manifold::TargetFunction& target) {
  return eval_components(
      [&](const Eigen::Vector3d& x) { return mlp_hvp_surface(p, cfg, std::span<const double>(x.data(), 3)); },
      samples, target);
}

}  // namespace splinenet::train
