#include "splinenet/experiment/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include "splinenet/experiment/slope_fit.hpp"
#include "splinenet/manifold/sphere.hpp"
#include "splinenet/manifold/torus.hpp"
#include "splinenet/net/spline_net.hpp"
#include "splinenet/spline/quasi_interpolant.hpp"
#include "splinenet/spline/sobolev.hpp"
#include "splinenet/train/metrics.hpp"
#include "splinenet/train/trainer.hpp"

namespace splinenet::experiment {

namespace {

std::vector<std::string> lead(const ExperimentConfig& cfg, const std::string& hash) {
  return {to_string(cfg.suite), std::to_string(cfg.seed), hash};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

const std::vector<std::string> kFitColumns = {"suite", "seed", "config_hash", "group", "component",
                                              "slope", "intercept", "r_squared", "gate", "pass"};

struct Stats {
  double mean = 0.0;
  double std = 0.0;
};

Stats stats(const std::vector<double>& v) {
  Stats s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    for (double x : v) s.std += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(s.std / static_cast<double>(v.size() - 1));
  }
  return s;
}

// ---- training suites ------------------------------------------------------

struct Arm {
  std::string label;
  int width = 0;
  std::vector<int> pattern;
};

struct ArmResult {
  std::vector<double> final_loss, wmse_f, wmse_grad, wmse_lap;
  long params = 0;
};

const std::vector<std::string> kTrainColumns = {
    "suite",     "seed",     "config_hash", "row_type", "arm",        "width",      "depth",
    "pattern",   "repeat",   "run_seed",    "params",   "steps_run",  "diverged",   "fd_fallback",
    "final_loss", "wmse_f", "wmse_grad",    "wmse_lap"};

std::vector<ArmResult> run_training(const ExperimentConfig& cfg, const std::string& hash,
                                    const std::vector<Arm>& arms, CsvTable& table) {
  const manifold::WeightedSampleSet samples =
      cfg.manifold == manifold::ManifoldKind::sphere ? manifold::fibonacci_grid(cfg.samples)
                                                     : manifold::torus_sample(cfg.samples, cfg.torus, cfg.seed);
  const manifold::TargetFunction target = cfg.manifold == manifold::ManifoldKind::sphere
                                              ? manifold::TargetFunction::sphere_y31()
                                              : manifold::TargetFunction::torus_fourier(cfg.fourier, cfg.torus);
  const train::Dataset data = train::make_dataset(samples, target);

  std::vector<ArmResult> results;
  std::uint64_t row = 0;
  for (const auto& arm : arms) {
    train::MLPConfig m;
    m.input_dim = 3;
    m.width = arm.width;
    m.depth = static_cast<int>(arm.pattern.size());
    m.activation_pattern = arm.pattern;
    m.layer_norm = cfg.layer_norm;
    m.activation_clamp_max = cfg.activation_clamp_max;
    m.weight_clip = cfg.weight_clip;
    m.sk_rescale = cfg.sk_rescale;
    ArmResult ar;
    ar.params = train::mlp_layout(m).size();
    for (int r = 0; r < cfg.repeats; ++r, ++row) {
      train::TrainConfig tc;
      tc.steps = cfg.steps;
      tc.batch_size = cfg.batch_size;
      tc.learning_rate = cfg.learning_rate;
      tc.eval_every = cfg.eval_every;
      tc.seed = cfg.seed + row;
      const train::TrainResult res = train::train(tc, m, data);
      const train::ComponentErrors e = train::eval_components(res.best, m, samples, target);
      ar.final_loss.push_back(res.best_loss);
      ar.wmse_f.push_back(e.wmse_f);
      ar.wmse_grad.push_back(e.wmse_grad);
      ar.wmse_lap.push_back(e.wmse_lap);
      table.add_row(concat(lead(cfg, hash),
                           {"run", arm.label, std::to_string(m.width), std::to_string(m.depth),
                            pattern_string(arm.pattern), std::to_string(r), std::to_string(tc.seed),
                            std::to_string(ar.params), std::to_string(res.steps_run), yes_no(res.diverged),
                            yes_no(e.fd_fallback), csv_real(res.best_loss), csv_real(e.wmse_f),
                            csv_real(e.wmse_grad), csv_real(e.wmse_lap)}));
    }
    for (const bool is_mean : {true, false}) {
      const auto pick = [&](const std::vector<double>& v) {
        const Stats s = stats(v);
        return csv_real(is_mean ? s.mean : s.std);
      };
      table.add_row(concat(lead(cfg, hash),
                           {is_mean ? "mean" : "std", arm.label, std::to_string(m.width), std::to_string(m.depth),
                            pattern_string(arm.pattern), "", "", std::to_string(ar.params), "", "", "",
                            pick(ar.final_loss), pick(ar.wmse_f), pick(ar.wmse_grad), pick(ar.wmse_lap)}));
    }
    results.push_back(std::move(ar));
  }
  return results;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(gates.begin(), gates.end(), [](const Gate& g) { return g.passed; });
}

double builtin_target(const std::string& name, std::span<const double> x, std::span<const int> alpha) {
  double v = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const int a = alpha.empty() ? 0 : alpha[j];
    if (name == "sin_product") {
      const double w = 2.0 * std::numbers::pi;
      v *= std::pow(w, a) * std::sin(w * x[j] + a * std::numbers::pi / 2.0);
    } else if (name == "exp_product") {
      v *= std::exp(x[j]);
    } else {
      throw std::invalid_argument("unknown target '" + name + "'");
    }
  }
  return v;
}

SuiteReport run_exactness(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string hash = config_hash(cfg);
  SuiteReport rep;
  rep.table = CsvTable(concat({"suite", "seed", "config_hash"},
                              {"row", "k", "N", "d", "mode", "max_rel_err", "max_abs_param", "S", "depth", "pass"}));
  bool rows_ok = true;
  std::string first_bad;
  std::map<std::string, std::vector<int>> depths;
  std::uint64_t row = 0;
  for (int k : cfg.k_list) {
    for (int n : cfg.n_list) {
      for (int d : cfg.dims) {
        const spline::TensorSplineSpace space(d, n, k);
        const auto qi = spline::quasi_interpolate(space, [&](std::span<const double> x) {
          return builtin_target(cfg.target, x, {});
        });
        for (net::BuildMode mode : cfg.modes) {
          const net::Network nn = net::build_qi_net(qi, mode);
          std::mt19937_64 rng(cfg.seed + row);
          Eigen::MatrixXd xs(d, cfg.points);
          for (long c = 0; c < xs.cols(); ++c) {
            for (int a = 0; a < d; ++a) xs(a, c) = static_cast<double>(rng() >> 11) * 0x1.0p-53;
          }
          const Eigen::MatrixXd ys = net::net_eval_batch(nn, xs);
          double max_err = 0.0;
          double max_ref = 0.0;
          for (long c = 0; c < xs.cols(); ++c) {
            const double ref = spline::spline_eval(qi, std::span<const double>(xs.col(c).data(), d));
            max_err = std::max(max_err, std::abs(ys(0, c) - ref));
            max_ref = std::max(max_ref, std::abs(ref));
          }
          const double rel = max_err / std::max(max_ref, std::numeric_limits<double>::min());
          const double maxp = nn.max_abs_parameter();
          const bool bounded = mode == net::BuildMode::bounded;
          const bool ok = rel <= (bounded ? cfg.bounded_tolerance : cfg.tolerance) && (!bounded || maxp <= 1.0);
          if (!ok && rows_ok) {
            first_bad = "k=" + std::to_string(k) + " N=" + std::to_string(n) + " d=" + std::to_string(d) +
                        " mode=" + net::to_string(mode) + " rel=" + csv_real(rel) + " maxp=" + csv_real(maxp);
          }
          rows_ok = rows_ok && ok;
          depths[std::to_string(k) + "/" + std::to_string(d) + "/" + net::to_string(mode)].push_back(nn.depth());
          rep.table.add_row(concat(lead(cfg, hash),
                                   {std::to_string(row), std::to_string(k), std::to_string(n), std::to_string(d),
                                    net::to_string(mode), csv_real(rel), csv_real(maxp),
                                    std::to_string(nn.nonzero_count()), std::to_string(nn.depth()), yes_no(ok)}));
          ++row;
        }
      }
    }
  }
  rep.gates.push_back({"exactness.rows", rows_ok, rows_ok ? "all rows within tolerance" : "first failure: " + first_bad});
  bool const_depth = true;
  std::string which;
  for (const auto& [key, ds] : depths) {
    if (std::adjacent_find(ds.begin(), ds.end(), std::not_equal_to<>()) != ds.end()) {
      const_depth = false;
      which = key;
    }
  }
  rep.gates.push_back({"exactness.depth_constant_in_N", const_depth,
                       const_depth ? "depth fixed per (k, d, mode)" : "depth varies for k/d/mode = " + which});
  return rep;
}

SuiteReport run_rate_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string hash = config_hash(cfg);
  SuiteReport rep;
  rep.table = CsvTable(concat({"suite", "seed", "config_hash"}, {"row", "d", "k", "N", "s", "error"}));
  rep.fits = CsvTable(kFitColumns);
  const spline::DerivativeField f = [&](std::span<const double> x, std::span<const int> alpha) {
    return builtin_target(cfg.target, x, alpha);
  };
  std::vector<int> s_sorted = cfg.s_list;
  std::sort(s_sorted.begin(), s_sorted.end());
  std::uint64_t row = 0;
  for (int d : cfg.dims) {
    std::map<int, std::vector<double>> err_by_s;
    bool nested = true;
    for (int n : cfg.n_list) {
      const spline::TensorSplineSpace space(d, n, cfg.k);
      const auto qi = spline::quasi_interpolate(space, [&](std::span<const double> x) { return f(x, {}); });
      double prev = -1.0;
      for (int s : s_sorted) {
        const double e = cfg.grid > 0 ? spline::sobolev_error(f, qi, s, spline::kInfinityNorm, cfg.grid)
                                      : spline::sobolev_error(f, qi, s, spline::kInfinityNorm);
        nested = nested && e >= prev;
        prev = e;
        err_by_s[s].push_back(e);
        rep.table.add_row(concat(lead(cfg, hash), {std::to_string(row++), std::to_string(d), std::to_string(cfg.k),
                                                   std::to_string(n), std::to_string(s), csv_real(e)}));
      }
    }
    rep.gates.push_back({"rate.nesting.d" + std::to_string(d), nested,
                         nested ? "error grows with s at every N" : "error decreased with s at some N"});
    std::vector<double> ns(cfg.n_list.begin(), cfg.n_list.end());
    for (int s : s_sorted) {
      const SlopeFit fit = fit_loglog(ns, err_by_s[s]);
      const double bound = -(cfg.k - s) + 0.5;
      const bool ok = fit.slope <= bound;
      rep.fits.add_row(concat(lead(cfg, hash),
                              {"d=" + std::to_string(d), "W^" + std::to_string(s) + "_inf", csv_real(fit.slope),
                               csv_real(fit.intercept), csv_real(fit.r_squared), "slope<=" + csv_real(bound),
                               yes_no(ok)}));
      rep.gates.push_back({"rate.slope.d" + std::to_string(d) + ".s" + std::to_string(s), ok,
                           "slope " + csv_real(fit.slope) + " vs bound " + csv_real(bound)});
    }
  }
  return rep;
}

SuiteReport run_actk_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string hash = config_hash(cfg);
  SuiteReport rep;
  rep.table = CsvTable(kTrainColumns);
  std::vector<Arm> arms;
  if (cfg.patterns.empty()) {
    for (int k : cfg.k_list) arms.push_back({"k=" + std::to_string(k), cfg.width, std::vector<int>(cfg.depth, k)});
  } else {
    for (const auto& p : cfg.patterns) arms.push_back({pattern_string(p), cfg.width, p});
  }
  const auto results = run_training(cfg, hash, arms, rep.table);

  // Trend gate: ReLU^4 beats plain ReLU on the sphere harmonic.
  if (cfg.manifold == manifold::ManifoldKind::sphere && cfg.patterns.empty()) {
    const auto find = [&](int k) { return std::find(cfg.k_list.begin(), cfg.k_list.end(), k) - cfg.k_list.begin(); };
    const auto i1 = static_cast<std::size_t>(find(1));
    const auto i4 = static_cast<std::size_t>(find(4));
    if (i1 < results.size() && i4 < results.size()) {
      const double l1 = stats(results[i1].final_loss).mean;
      const double l4 = stats(results[i4].final_loss).mean;
      const double p1 = stats(results[i1].wmse_lap).mean;
      const double p4 = stats(results[i4].wmse_lap).mean;
      rep.gates.push_back({"actk.loss_k4_below_k1", l4 < l1, "mean loss k=4 " + csv_real(l4) + ", k=1 " + csv_real(l1)});
      rep.gates.push_back(
          {"actk.lap_k4_below_k1", p4 < p1, "mean WMSE_lap k=4 " + csv_real(p4) + ", k=1 " + csv_real(p1)});
    }
  }
  return rep;
}

SuiteReport run_width_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string hash = config_hash(cfg);
  SuiteReport rep;
  rep.table = CsvTable(kTrainColumns);
  rep.fits = CsvTable(kFitColumns);
  std::vector<Arm> arms;
  for (int w : cfg.width_list) arms.push_back({"width=" + std::to_string(w), w, std::vector<int>(cfg.depth, cfg.k)});
  const auto results = run_training(cfg, hash, arms, rep.table);

  std::vector<double> params;
  std::vector<double> value;
  for (const auto& r : results) {
    params.push_back(static_cast<double>(r.params));
    value.push_back(stats(r.wmse_f).mean);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < value.size(); ++i) decreasing = decreasing && value[i] < value[i - 1];
  if (value.size() >= 2) {
    rep.gates.push_back({"width.value_mse_decreasing", decreasing, decreasing ? "strictly decreasing in width"
                                                                              : "value MSE not decreasing"});
  }
  if (results.size() >= 3) {
    const std::vector<std::pair<std::string, std::vector<double> ArmResult::*>> comps = {
        {"final_loss", &ArmResult::final_loss},
        {"wmse_f", &ArmResult::wmse_f},
        {"wmse_grad", &ArmResult::wmse_grad},
        {"wmse_lap", &ArmResult::wmse_lap}};
    for (const auto& [name, member] : comps) {
      std::vector<double> ys;
      for (const auto& r : results) ys.push_back(stats(r.*member).mean);
      const SlopeFit fit = fit_loglog(params, ys);
      const bool gated = name == "wmse_f";
      const bool ok = fit.slope < -0.5 && fit.r_squared >= 0.8;
      rep.fits.add_row(concat(lead(cfg, hash), {"params", name, csv_real(fit.slope), csv_real(fit.intercept),
                                                csv_real(fit.r_squared), gated ? "slope<-0.5,r2>=0.8" : "",
                                                gated ? yes_no(ok) : ""}));
      if (gated) {
        rep.gates.push_back({"width.value_mse_slope", ok,
                             "slope " + csv_real(fit.slope) + ", r^2 " + csv_real(fit.r_squared)});
      }
    }
  }
  return rep;
}

SuiteReport run_suite(const ExperimentConfig& cfg) {
  switch (cfg.suite) {
    case Suite::exactness: return run_exactness(cfg);
    case Suite::rate_sweep: return run_rate_sweep(cfg);
    case Suite::actk_sweep: return run_actk_sweep(cfg);
    case Suite::width_sweep: return run_width_sweep(cfg);
  }
  throw std::logic_error("unhandled suite");
}

}  // namespace splinenet::experiment
