#pragma once

#include <span>
#include <string>
#include <vector>

#include "splinenet/experiment/config.hpp"
#include "splinenet/experiment/csv.hpp"

namespace splinenet::experiment {

/// A pass/fail tolerance check attached to a suite run.
struct Gate {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  CsvTable table;
  CsvTable fits;  ///< empty for suites without slope fits
  std::vector<Gate> gates;

  /// True iff every gate passed.
  [[nodiscard]] bool passed() const;
};

/// Compiles quasi-interpolant networks over the (k, N, d, mode) grid and
/// compares them with spline evaluation at random points.
SuiteReport run_exactness(const ExperimentConfig& cfg);
/// W^s_inf errors of the quasi-interpolant over N, with log-log slopes per (d, s).
SuiteReport run_rate_sweep(const ExperimentConfig& cfg);
/// One training run per (activation pattern, repeat) on the chosen surface.
SuiteReport run_actk_sweep(const ExperimentConfig& cfg);
/// One training run per (width, repeat) with slopes against parameter count.
SuiteReport run_width_sweep(const ExperimentConfig& cfg);
SuiteReport run_suite(const ExperimentConfig& cfg);

/// Built-in smooth targets on [0,1]^d with all partial derivatives.
double builtin_target(const std::string& name, std::span<const double> x, std::span<const int> alpha);

}  // namespace splinenet::experiment
