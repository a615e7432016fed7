#include "splinenet/experiment/config.hpp"

#include <algorithm>
#include <cmath>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "splinenet/experiment/csv.hpp"

namespace splinenet::experiment {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

std::int64_t parse_int(const std::string& tok, int line) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(tok.c_str(), &end, 10);
  if (tok.empty() || *end != '\0' || errno == ERANGE) fail(line, "'" + tok + "' is not an integer");
  return v;
}

double parse_real(const std::string& tok, int line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (tok.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) fail(line, "'" + tok + "' is not a real");
  return v;
}

bool parse_bool(const std::string& tok, int line) {
  if (tok == "true") return true;
  if (tok == "false") return false;
  fail(line, "'" + tok + "' is not true or false");
}

std::string unquote(const std::string& tok, int line) {
  if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') {
    std::string out;
    for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
      if (tok[i] == '"') {
        if (i + 2 < tok.size() && tok[i + 1] == '"') {
          ++i;
        } else {
          fail(line, "stray quote in " + tok);
        }
      }
      out += tok[i];
    }
    return out;
  }
  if (tok.find('"') != std::string::npos) fail(line, "unbalanced quote in " + tok);
  return tok;
}

// Splits on commas outside quotes.
std::vector<std::string> split_list(std::string body, int line) {
  body = trim(body);
  if (body.size() >= 2 && body.front() == '[' && body.back() == ']') body = trim(body.substr(1, body.size() - 2));
  std::vector<std::string> out;
  if (body.empty()) return out;
  std::string cur;
  bool quoted = false;
  for (char c : body) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) fail(line, "unterminated quote");
  out.push_back(trim(cur));
  for (const auto& s : out) {
    if (s.empty()) fail(line, "empty list element");
  }
  return out;
}

std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

constexpr unsigned kExact = 1u << 0;
constexpr unsigned kRate = 1u << 1;
constexpr unsigned kActk = 1u << 2;
constexpr unsigned kWidth = 1u << 3;
constexpr unsigned kAll = kExact | kRate | kActk | kWidth;
constexpr unsigned kTrain = kActk | kWidth;

unsigned suite_bit(Suite s) {
  switch (s) {
    case Suite::exactness: return kExact;
    case Suite::rate_sweep: return kRate;
    case Suite::actk_sweep: return kActk;
    case Suite::width_sweep: return kWidth;
  }
  return 0;
}

std::vector<int> to_ints(const ConfigValue& v) {
  std::vector<int> out;
  for (auto x : std::get<std::vector<std::int64_t>>(v)) out.push_back(static_cast<int>(x));
  return out;
}

int to_int(const ConfigValue& v) { return static_cast<int>(std::get<std::int64_t>(v)); }

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

struct KeySpec {
  const char* name;
  const char* type;
  unsigned suites;
  std::function<void(ExperimentConfig&, const ConfigValue&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::vector<KeySpec>& key_specs() {
  using C = ExperimentConfig;
  using V = ConfigValue;
  static const std::vector<KeySpec> specs = {
      {"suite", "string", kAll, nullptr, [](const C& c) { return to_string(c.suite); }},
      {"seed", "int", kAll, nullptr, [](const C& c) { return std::to_string(c.seed); }},
      {"desk_scale", "bool", kAll, nullptr, [](const C& c) { return std::string(c.desk_scale ? "true" : "false"); }},
      {"output", "string", kAll, [](C& c, const V& v) { c.output = std::get<std::string>(v); }, nullptr},
      {"k_list", "int_list", kExact | kActk, [](C& c, const V& v) { c.k_list = to_ints(v); },
       [](const C& c) { return join_ints(c.k_list); }},
      {"n_list", "int_list", kExact | kRate, [](C& c, const V& v) { c.n_list = to_ints(v); },
       [](const C& c) { return join_ints(c.n_list); }},
      {"dims", "int_list", kExact | kRate, [](C& c, const V& v) { c.dims = to_ints(v); },
       [](const C& c) { return join_ints(c.dims); }},
      {"modes", "string_list", kExact,
       [](C& c, const V& v) {
         c.modes.clear();
         for (const auto& s : std::get<std::vector<std::string>>(v)) c.modes.push_back(net::parse_build_mode(s));
       },
       [](const C& c) {
         std::string s;
         for (std::size_t i = 0; i < c.modes.size(); ++i) s += (i ? "," : "") + net::to_string(c.modes[i]);
         return s;
       }},
      {"points", "int", kExact, [](C& c, const V& v) { c.points = to_int(v); },
       [](const C& c) { return std::to_string(c.points); }},
      {"tolerance", "real", kExact, [](C& c, const V& v) { c.tolerance = std::get<double>(v); },
       [](const C& c) { return csv_real(c.tolerance); }},
      {"bounded_tolerance", "real", kExact, [](C& c, const V& v) { c.bounded_tolerance = std::get<double>(v); },
       [](const C& c) { return csv_real(c.bounded_tolerance); }},
      {"target", "string", kExact | kRate, [](C& c, const V& v) { c.target = std::get<std::string>(v); },
       [](const C& c) { return c.target; }},
      {"k", "int", kRate | kWidth, [](C& c, const V& v) { c.k = to_int(v); },
       [](const C& c) { return std::to_string(c.k); }},
      {"s_list", "int_list", kRate, [](C& c, const V& v) { c.s_list = to_ints(v); },
       [](const C& c) { return join_ints(c.s_list); }},
      {"grid", "int", kRate, [](C& c, const V& v) { c.grid = to_int(v); },
       [](const C& c) { return std::to_string(c.grid); }},
      {"manifold", "string", kTrain,
       [](C& c, const V& v) { c.manifold = manifold::parse_manifold(std::get<std::string>(v)); },
       [](const C& c) { return manifold::to_string(c.manifold); }},
      {"torus_R", "real", kTrain, [](C& c, const V& v) { c.torus.R = std::get<double>(v); },
       [](const C& c) { return csv_real(c.torus.R); }},
      {"torus_r", "real", kTrain, [](C& c, const V& v) { c.torus.r = std::get<double>(v); },
       [](const C& c) { return csv_real(c.torus.r); }},
      {"fourier_A", "real", kTrain, [](C& c, const V& v) { c.fourier.A = std::get<double>(v); },
       [](const C& c) { return csv_real(c.fourier.A); }},
      {"fourier_m", "int", kTrain, [](C& c, const V& v) { c.fourier.m = to_int(v); },
       [](const C& c) { return std::to_string(c.fourier.m); }},
      {"fourier_B", "real", kTrain, [](C& c, const V& v) { c.fourier.B = std::get<double>(v); },
       [](const C& c) { return csv_real(c.fourier.B); }},
      {"fourier_n", "int", kTrain, [](C& c, const V& v) { c.fourier.n = to_int(v); },
       [](const C& c) { return std::to_string(c.fourier.n); }},
      {"repeats", "int", kTrain, [](C& c, const V& v) { c.repeats = to_int(v); },
       [](const C& c) { return std::to_string(c.repeats); }},
      {"width", "int", kActk, [](C& c, const V& v) { c.width = to_int(v); },
       [](const C& c) { return std::to_string(c.width); }},
      {"depth", "int", kTrain, [](C& c, const V& v) { c.depth = to_int(v); },
       [](const C& c) { return std::to_string(c.depth); }},
      {"steps", "int", kTrain, [](C& c, const V& v) { c.steps = to_int(v); },
       [](const C& c) { return std::to_string(c.steps); }},
      {"samples", "int", kTrain, [](C& c, const V& v) { c.samples = to_int(v); },
       [](const C& c) { return std::to_string(c.samples); }},
      {"batch_size", "int", kTrain, [](C& c, const V& v) { c.batch_size = to_int(v); },
       [](const C& c) { return std::to_string(c.batch_size); }},
      {"eval_every", "int", kTrain, [](C& c, const V& v) { c.eval_every = to_int(v); },
       [](const C& c) { return std::to_string(c.eval_every); }},
      {"learning_rate", "real", kTrain, [](C& c, const V& v) { c.learning_rate = std::get<double>(v); },
       [](const C& c) { return csv_real(c.learning_rate); }},
      {"layer_norm", "bool", kTrain, [](C& c, const V& v) { c.layer_norm = std::get<bool>(v); },
       [](const C& c) { return std::string(c.layer_norm ? "true" : "false"); }},
      {"activation_clamp_max", "real", kTrain, [](C& c, const V& v) { c.activation_clamp_max = std::get<double>(v); },
       [](const C& c) { return c.activation_clamp_max ? csv_real(*c.activation_clamp_max) : std::string("none"); }},
      {"weight_clip", "real", kTrain, [](C& c, const V& v) { c.weight_clip = std::get<double>(v); },
       [](const C& c) { return c.weight_clip ? csv_real(*c.weight_clip) : std::string("none"); }},
      {"sk_rescale", "bool", kTrain, [](C& c, const V& v) { c.sk_rescale = std::get<bool>(v); },
       [](const C& c) { return std::string(c.sk_rescale ? "true" : "false"); }},
      {"patterns", "string_list", kActk,
       [](C& c, const V& v) {
         c.patterns.clear();
         for (const auto& s : std::get<std::vector<std::string>>(v)) c.patterns.push_back(parse_pattern(s));
       },
       [](const C& c) {
         std::string s;
         for (std::size_t i = 0; i < c.patterns.size(); ++i) s += (i ? "," : "") + pattern_string(c.patterns[i]);
         return s;
       }},
      {"width_list", "int_list", kWidth, [](C& c, const V& v) { c.width_list = to_ints(v); },
       [](const C& c) { return join_ints(c.width_list); }},
  };
  return specs;
}

template <class T>
void require(bool ok, const T& msg) {
  if (!ok) throw std::invalid_argument(std::string("config: ") + msg);
}

void require_positive(const std::vector<int>& v, const char* name) {
  require(!v.empty(), std::string(name) + " must be nonempty");
  for (int x : v) require(x > 0, std::string(name) + " entries must be positive");
}

}  // namespace

std::string to_string(Suite suite) {
  switch (suite) {
    case Suite::exactness: return "exactness";
    case Suite::rate_sweep: return "rate-sweep";
    case Suite::actk_sweep: return "actk-sweep";
    case Suite::width_sweep: return "width-sweep";
  }
  return "?";
}

Suite parse_suite(const std::string& text) {
  std::string t = text;
  std::replace(t.begin(), t.end(), '_', '-');
  for (Suite s : {Suite::exactness, Suite::rate_sweep, Suite::actk_sweep, Suite::width_sweep}) {
    if (to_string(s) == t) return s;
  }
  throw std::invalid_argument("unknown suite '" + text + "'");
}

std::vector<int> parse_pattern(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, '-')) {
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (tok.empty() || *end != '\0' || v < 1) throw std::invalid_argument("bad activation pattern '" + text + "'");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw std::invalid_argument("empty activation pattern");
  return out;
}

std::string pattern_string(const std::vector<int>& pattern) {
  std::string s;
  for (std::size_t i = 0; i < pattern.size(); ++i) s += (i ? "-" : "") + std::to_string(pattern[i]);
  return s;
}

std::vector<ConfigEntry> parse_config_text(const std::string& text) {
  std::vector<ConfigEntry> out;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    const auto colon = s.find(':');
    const auto eq = s.find('=');
    if (colon == std::string::npos || eq == std::string::npos || eq < colon) {
      fail(line, "expected 'key: type = value'");
    }
    ConfigEntry e;
    e.line = line;
    e.key = trim(s.substr(0, colon));
    e.type = trim(s.substr(colon + 1, eq - colon - 1));
    const std::string body = trim(s.substr(eq + 1));
    if (e.key.empty()) fail(line, "missing key");
    for (const auto& prev : out) {
      if (prev.key == e.key) fail(line, "key '" + e.key + "' repeats line " + std::to_string(prev.line));
    }
    if (e.type == "int") {
      e.value = parse_int(body, line);
    } else if (e.type == "real") {
      e.value = parse_real(body, line);
    } else if (e.type == "bool") {
      e.value = parse_bool(body, line);
    } else if (e.type == "string") {
      if (body.empty()) fail(line, "empty string value");
      e.value = unquote(body, line);
    } else if (e.type == "int_list") {
      std::vector<std::int64_t> v;
      for (const auto& t : split_list(body, line)) v.push_back(parse_int(t, line));
      e.value = v;
    } else if (e.type == "real_list") {
      std::vector<double> v;
      for (const auto& t : split_list(body, line)) v.push_back(parse_real(t, line));
      e.value = v;
    } else if (e.type == "string_list") {
      std::vector<std::string> v;
      for (const auto& t : split_list(body, line)) v.push_back(unquote(t, line));
      e.value = v;
    } else {
      fail(line, "unknown type '" + e.type + "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

ExperimentConfig default_config(Suite suite, bool desk_scale) {
  ExperimentConfig c;
  c.suite = suite;
  c.desk_scale = desk_scale;
  switch (suite) {
    case Suite::exactness:
      c.k_list = {3, 4, 5};
      c.n_list = {4, 8, 16};
      c.dims = {1, 2};
      c.modes = {net::BuildMode::plain, net::BuildMode::bounded};
      break;
    case Suite::rate_sweep:
      c.n_list = {4, 8, 16, 32};
      c.dims = {1, 2};
      c.s_list = {0, 1, 2};
      break;
    case Suite::actk_sweep:
      c.k_list = {1, 2, 3, 4, 5, 6, 7};
      break;
    case Suite::width_sweep:
      c.width_list = desk_scale ? std::vector<int>{16, 64, 128} : std::vector<int>{16, 32, 64, 96, 128, 256};
      break;
  }
  if (!desk_scale) {
    c.steps = 5000;
    c.samples = 20000;
    c.repeats = 5;
  }
  return c;
}

void ExperimentConfig::validate() const {
  switch (suite) {
    case Suite::exactness:
      require_positive(k_list, "k_list");
      require_positive(n_list, "n_list");
      require_positive(dims, "dims");
      require(!modes.empty(), "modes must be nonempty");
      for (int kk : k_list) require(kk >= 3, "exactness needs k >= 3");
      require(points > 0, "points must be positive");
      require(tolerance > 0.0 && bounded_tolerance > 0.0, "tolerances must be positive");
      break;
    case Suite::rate_sweep:
      require_positive(n_list, "n_list");
      require_positive(dims, "dims");
      require(!s_list.empty(), "s_list must be nonempty");
      for (int s : s_list) require(s >= 0 && s < k, "s_list entries must satisfy 0 <= s < k");
      require(n_list.size() >= 3, "rate sweep needs at least 3 values of N for a slope");
      require(grid == 0 || grid >= 2, "grid must be 0 (default) or >= 2");
      break;
    case Suite::actk_sweep:
      if (patterns.empty()) require_positive(k_list, "k_list");
      for (const auto& p : patterns) require(static_cast<int>(p.size()) == depth, "pattern length must equal depth");
      require(width > 0, "width must be positive");
      break;
    case Suite::width_sweep:
      require_positive(width_list, "width_list");
      require(k >= 1, "k must be >= 1");
      break;
  }
  if (suite == Suite::exactness || suite == Suite::rate_sweep) {
    require(target == "sin_product" || target == "exp_product", "target must be sin_product or exp_product");
    require(k >= 3 || suite == Suite::exactness, "rate sweep needs k >= 3");
  }
  if (suite == Suite::actk_sweep || suite == Suite::width_sweep) {
    require(repeats > 0 && depth > 0 && steps >= 0 && samples >= 10 && batch_size > 0 && eval_every > 0,
            "training sizes must be positive (samples >= 10)");
    require(learning_rate > 0.0, "learning_rate must be positive");
    require(!activation_clamp_max || *activation_clamp_max > 0.0, "activation_clamp_max must be positive");
    require(!weight_clip || *weight_clip > 0.0, "weight_clip must be positive");
    if (manifold == manifold::ManifoldKind::torus) torus.validate();
  }
}

ExperimentConfig resolve_config(const std::vector<ConfigEntry>& entries, const ConfigOverrides& overrides) {
  std::map<std::string, const ConfigEntry*> by_key;
  for (const auto& e : entries) by_key[e.key] = &e;
  const auto typed = [&](const char* key, const char* type) -> const ConfigEntry* {
    const auto it = by_key.find(key);
    if (it == by_key.end()) return nullptr;
    if (it->second->type != type) fail(it->second->line, std::string("key '") + key + "' must have type " + type);
    return it->second;
  };

  std::optional<Suite> suite = overrides.suite;
  if (const auto* e = typed("suite", "string")) {
    const Suite s = parse_suite(std::get<std::string>(e->value));
    if (suite && *suite != s) {
      fail(e->line, "config is for suite " + to_string(s) + " but " + to_string(*suite) + " was requested");
    }
    suite = s;
  }
  if (!suite) throw std::invalid_argument("config: no suite given");
  bool desk = true;
  if (const auto* e = typed("desk_scale", "bool")) desk = std::get<bool>(e->value);
  if (overrides.desk_scale) desk = *overrides.desk_scale;

  ExperimentConfig c = default_config(*suite, desk);
  std::optional<std::uint64_t> seed = overrides.seed;
  if (const auto* e = typed("seed", "int")) {
    const auto v = std::get<std::int64_t>(e->value);
    if (v < 0) fail(e->line, "seed must be nonnegative");
    if (!seed) seed = static_cast<std::uint64_t>(v);
  }
  if (!seed) throw std::invalid_argument("config: seed is required (file key 'seed' or --seed)");
  c.seed = *seed;

  for (const auto& e : entries) {
    const auto spec = std::find_if(key_specs().begin(), key_specs().end(),
                                   [&](const KeySpec& s) { return e.key == s.name; });
    if (spec == key_specs().end()) fail(e.line, "unknown key '" + e.key + "'");
    if (e.type != spec->type) fail(e.line, "key '" + e.key + "' must have type " + spec->type);
    if ((spec->suites & suite_bit(*suite)) == 0) {
      fail(e.line, "key '" + e.key + "' is not used by suite " + to_string(*suite));
    }
    if (!spec->set) continue;
    try {
      spec->set(c, e.value);
    } catch (const std::invalid_argument& ex) {
      fail(e.line, ex.what());
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return resolve_config(parse_config_text(ss.str()), overrides);
}

std::string canonical_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& spec : key_specs()) {
    if (!spec.get || (spec.suites & suite_bit(cfg.suite)) == 0) continue;
    out += spec.name;
    out += '=';
    out += spec.get(cfg);
    out += '\n';
  }
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const ExperimentConfig& cfg) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_text(cfg))));
  return buf;
}

}  // namespace splinenet::experiment
