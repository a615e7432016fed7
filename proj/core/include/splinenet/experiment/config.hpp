#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "splinenet/manifold/sample_set.hpp"
#include "splinenet/manifold/target.hpp"
#include "splinenet/net/spline_net.hpp"

namespace splinenet::experiment {

enum class Suite { exactness, rate_sweep, actk_sweep, width_sweep };

/// "exactness", "rate-sweep", "actk-sweep", "width-sweep".
std::string to_string(Suite suite);
/// Accepts the names above with '-' or '_'.
Suite parse_suite(const std::string& text);

using ConfigValue = std::variant<std::int64_t, double, bool, std::string, std::vector<std::int64_t>,
                                 std::vector<double>, std::vector<std::string>>;

struct ConfigEntry {
  std::string key;
  std::string type;  ///< int, real, bool, string, int_list, real_list, string_list
  ConfigValue value;
  int line = 0;
};

/// Parses lines of the form
///   key: type = value
/// where lists are comma separated (optionally in brackets), strings may be
/// double-quoted, and '#' starts a comment outside quotes. Throws
/// std::invalid_argument with the line number on malformed input or a
/// repeated key.
std::vector<ConfigEntry> parse_config_text(const std::string& text);

struct ExperimentConfig {
  Suite suite = Suite::exactness;
  std::uint64_t seed = 0;
  bool desk_scale = true;
  std::string output;  ///< not part of the hash

  // exactness / rate sweep
  std::vector<int> k_list;
  std::vector<int> n_list;
  std::vector<int> dims;
  std::vector<net::BuildMode> modes;
  int points = 10000;
  double tolerance = 1e-8;
  double bounded_tolerance = 1e-6;
  std::string target = "sin_product";  ///< sin_product or exp_product
  int k = 4;
  std::vector<int> s_list;
  int grid = 0;  ///< 0: sobolev_error default grid

  // training suites
  manifold::ManifoldKind manifold = manifold::ManifoldKind::sphere;
  manifold::TorusParams torus;
  manifold::TorusFourier fourier;
  int repeats = 3;
  int width = 64;
  int depth = 2;
  int steps = 2000;
  int samples = 5000;
  int batch_size = 2048;
  int eval_every = 100;
  double learning_rate = 1e-3;
  bool layer_norm = false;
  std::optional<double> activation_clamp_max;
  std::optional<double> weight_clip;
  bool sk_rescale = false;
  std::vector<std::vector<int>> patterns;  ///< actk: explicit patterns replace k_list when nonempty
  std::vector<int> width_list;

  /// Throws std::invalid_argument on empty lists or out-of-range values.
  void validate() const;
};

/// Suite defaults. Desk scale trains width 64, depth 2, 2000 steps on 5000
/// samples with 3 repeats; the full scale uses 5000 steps, 20000 samples
/// and 5 repeats.
ExperimentConfig default_config(Suite suite, bool desk_scale);

struct ConfigOverrides {
  std::optional<Suite> suite;
  std::optional<std::uint64_t> seed;
  std::optional<bool> desk_scale;
};

/// Defaults for the suite, then file entries, then overrides. Keys unknown
/// or unused by the suite, type mismatches, a missing seed, or a suite that
/// disagrees with the override are errors (std::invalid_argument).
ExperimentConfig resolve_config(const std::vector<ConfigEntry>& entries, const ConfigOverrides& overrides);
ExperimentConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides);

/// One "key=value" line per suite-relevant field in a fixed order.
std::string canonical_text(const ExperimentConfig& cfg);
/// FNV-1a 64 of canonical_text as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);
std::uint64_t fnv1a64(const std::string& bytes);

/// "1-1-1-5" <-> {1, 1, 1, 5}.
std::vector<int> parse_pattern(const std::string& text);
std::string pattern_string(const std::vector<int>& pattern);

}  // namespace splinenet::experiment
