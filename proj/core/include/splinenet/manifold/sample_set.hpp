#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace splinenet::manifold {

/// Embedded torus with major radius R and minor radius r.
struct TorusParams {
  double R = 1.5;
  double r = 0.5;

  /// Throws std::invalid_argument unless R > r > 0.
  void validate() const;
};

enum class ManifoldKind { sphere, torus };

std::string to_string(ManifoldKind kind);
ManifoldKind parse_manifold(const std::string& text);

/// Quadrature nodes on a surface with positive weights.
struct WeightedSampleSet {
  ManifoldKind kind = ManifoldKind::sphere;
  TorusParams torus;                    ///< meaningful when kind == torus
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;
  std::string generator;                ///< e.g. "fibonacci" or "torus-uniform"
  std::uint64_t seed = 0;               ///< RNG seed (0 for deterministic lattices)
  double lattice_offset = 0.0;          ///< Fibonacci height offset

  [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
  /// Sum of the weights in index order.
  [[nodiscard]] double total_weight() const;
};

/// Writes '#'-prefixed metadata lines (generator, seed, offset, torus radii)
/// followed by a CSV table with columns x,y,z,weight in "%.17g".
void write_sample_csv(const WeightedSampleSet& set, std::ostream& out);

}  // namespace splinenet::manifold
