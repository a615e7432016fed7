#include "splinenet/manifold/sample_set.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace splinenet::manifold {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void TorusParams::validate() const {
  if (!(R > r && r > 0.0)) {
    throw std::invalid_argument("torus radii must satisfy R > r > 0 (got R = " + g17(R) + ", r = " + g17(r) + ")");
  }
}

std::string to_string(ManifoldKind kind) { return kind == ManifoldKind::sphere ? "sphere" : "torus"; }

ManifoldKind parse_manifold(const std::string& text) {
  if (text == "sphere") return ManifoldKind::sphere;
  if (text == "torus") return ManifoldKind::torus;
  throw std::invalid_argument("unknown manifold '" + text + "' (expected sphere or torus)");
}

double WeightedSampleSet::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void write_sample_csv(const WeightedSampleSet& set, std::ostream& out) {
  out << "# manifold=" << to_string(set.kind) << "\n";
  out << "# generator=" << set.generator << "\n";
  out << "# seed=" << set.seed << "\n";
  out << "# lattice_offset=" << g17(set.lattice_offset) << "\n";
  if (set.kind == ManifoldKind::torus) out << "# R=" << g17(set.torus.R) << " r=" << g17(set.torus.r) << "\n";
  out << "x,y,z,weight\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& p = set.points[i];
    out << g17(p.x()) << ',' << g17(p.y()) << ',' << g17(p.z()) << ',' << g17(set.weights[i]) << '\n';
  }
}

}  // namespace splinenet::manifold
