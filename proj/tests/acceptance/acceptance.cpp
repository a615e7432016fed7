// Acceptance run: one PASS/FAIL line per criterion, exit code 0 iff all pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "splinenet/experiment/config.hpp"
#include "splinenet/experiment/slope_fit.hpp"
#include "splinenet/experiment/suites.hpp"
#include "splinenet/manifold/sphere.hpp"
#include "splinenet/manifold/target.hpp"
#include "splinenet/manifold/torus.hpp"
#include "splinenet/net/compose.hpp"
#include "splinenet/net/derivative_net.hpp"
#include "splinenet/net/derivatives.hpp"
#include "splinenet/net/spline_net.hpp"
#include "splinenet/net/subnets.hpp"
#include "splinenet/spline/quasi_interpolant.hpp"
#include "splinenet/spline/sobolev.hpp"
#include "splinenet/train/mlp.hpp"

namespace sn = splinenet;
using sn::experiment::ExperimentConfig;
using sn::experiment::Suite;
using sn::net::BuildMode;
using sn::net::Network;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s [%2d] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

sn::spline::QuasiInterpolant qi_of(int d, int n, int k, const std::function<double(double)>& f) {
  const sn::spline::TensorSplineSpace space(d, n, k);
  return sn::spline::quasi_interpolate(space, [&](std::span<const double> x) {
    double v = 1.0;
    for (double c : x) v *= f(c);
    return v;
  });
}

double smooth(double x) { return std::sin(2 * kPi * x) + 0.5 * std::cos(3 * x); }

// max |net - spline| / max(1, |spline|) over random points of [0,1]^d.
double exactness_error(const Network& net, const sn::spline::QuasiInterpolant& qi, int d, int points,
                       std::mt19937_64& rng) {
  std::vector<double> x(static_cast<std::size_t>(d));
  double worst = 0.0;
  for (int s = 0; s < points; ++s) {
    for (double& v : x) v = uniform(rng, 0, 1);
    const double want = sn::spline::spline_eval(qi, x);
    worst = std::max(worst, std::abs(sn::net::net_eval(net, x)[0] - want) / std::max(1.0, std::abs(want)));
  }
  return worst;
}

Outcome c1_plain_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int k : {3, 4, 5}) {
    for (int n : {4, 8, 16}) {
      for (int d : {1, 2}) {
        const auto qi = qi_of(d, n, k, smooth);
        worst = std::max(worst, exactness_error(sn::net::build_qi_net(qi, BuildMode::plain), qi, d, 10000, rng));
      }
    }
  }
  const double secs = elapsed_since(t0);
  return {worst <= 1e-8 && secs < 60.0, "max rel err " + g(worst) + " (tol 1e-08), " + g(secs) + " s (limit 60 s)"};
}

Outcome c2_bounded() {
  std::mt19937_64 rng(2);
  double worst = 0.0;
  double max_param = 0.0;
  for (int n : {1, 2, 4, 8, 16}) {
    const auto qi = qi_of(1, n, 4, smooth);
    const Network net = sn::net::build_qi_net(qi, BuildMode::bounded);
    max_param = std::max(max_param, net.max_abs_parameter());
    worst = std::max(worst, exactness_error(net, qi, 1, 10000, rng));
  }
  return {max_param <= 1.0 && worst <= 1e-6,
          "max |param| " + g(max_param) + " (tol 1), max rel err " + g(worst) + " (tol 1e-06)"};
}

// W^s_inf error of the compiled network itself, derivatives through net_deriv.
Outcome c3_rate() {
  const auto t0 = std::chrono::steady_clock::now();
  const int k = 4;
  const std::vector<int> ns{4, 8, 16, 32};
  const sn::spline::DerivativeField f = [](std::span<const double> x, std::span<const int> a) {
    const int o = a.empty() ? 0 : a[0];
    const double w = 2 * kPi;
    return std::pow(w, o) * std::sin(w * x[0] + o * kPi / 2);
  };
  std::vector<std::vector<double>> err(3);
  for (int n : ns) {
    const Network net = sn::net::build_qi_net(qi_of(1, n, k, [](double x) { return std::sin(2 * kPi * x); }),
                                              BuildMode::plain);
    const sn::spline::DerivativeBundle g = [&](std::span<const double> x, const std::vector<std::vector<int>>& alphas,
                                               std::span<double> out) {
      const auto d = sn::net::net_deriv(net, x, 2);
      for (std::size_t m = 0; m < alphas.size(); ++m) {
        const int o = alphas[m][0];
        out[m] = o == 0 ? d.value[0] : o == 1 ? d.gradient(0, 0) : d.hessian[0](0, 0);
      }
    };
    for (int s = 0; s <= 2; ++s) err[s].push_back(sn::spline::sobolev_distance(1, f, g, s, sn::spline::kInfinityNorm, 2048));
  }
  std::vector<double> xs(ns.begin(), ns.end());
  bool ok = true;
  std::string detail;
  for (int s = 0; s <= 2; ++s) {
    const double slope = sn::experiment::fit_loglog(xs, err[s]).slope;
    const double limit = -(k - s) + 0.5;
    ok = ok && slope <= limit;
    detail += "s=" + std::to_string(s) + " slope " + g(slope) + " (<= " + g(limit) + "); ";
  }
  const double secs = elapsed_since(t0);
  ok = ok && secs < 30.0;
  return {ok, detail + g(secs) + " s (limit 30 s)"};
}

Outcome c4_scaling() {
  const std::vector<int> ns{4, 8, 16, 32};
  std::vector<double> xs(ns.begin(), ns.end());
  bool ok = true;
  std::string detail;
  for (BuildMode mode : {BuildMode::plain, BuildMode::bounded}) {
    for (int d : {1, 2}) {
      std::vector<double> s;
      for (int n : ns) s.push_back(static_cast<double>(sn::net::build_qi_net(qi_of(d, n, 4, smooth), mode).nonzero_count()));
      const double slope = sn::experiment::fit_loglog(xs, s).slope;
      const bool in = slope >= d - 0.3 && slope <= d + 0.3;
      ok = ok && in;
      detail += to_string(mode) + " d=" + std::to_string(d) + " slope " + g(slope) + " S=" + g(s.front()) + ".." +
                g(s.back()) + (in ? "" : " OUT") + "; ";
    }
  }
  return {ok, detail + "window [d-0.3, d+0.3]"};
}

Outcome c5_subnets() {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int k : {3, 4, 5}) {
    const Network sq = sn::net::build_square_net(k);
    const Network id = sn::net::build_identity_net(k);
    for (int s = 0; s < 1000; ++s) {
      const double x = uniform(rng, -1, 1);
      const std::span<const double> p(&x, 1);
      worst = std::max(worst, std::abs(sn::net::net_eval(sq, p)[0] - x * x));
      worst = std::max(worst, std::abs(sn::net::net_eval(id, p)[0] - x));
    }
    for (int n = 2; n <= 8; ++n) {
      const Network m = sn::net::build_mult_net(n, k);
      std::vector<double> x(static_cast<std::size_t>(n));
      for (int s = 0; s < 1000; ++s) {
        double prod = 1.0;
        for (double& v : x) prod *= (v = uniform(rng, -1, 1));
        worst = std::max(worst, std::abs(sn::net::net_eval(m, x)[0] - prod));
      }
    }
  }
  return {worst <= 1e-10, "max abs err " + g(worst) + " (tol 1e-10)"};
}

Outcome c6_derivative_net() {
  std::mt19937_64 rng(6);
  const int k = 4;
  double worst = 0.0;
  bool exps_ok = true;
  for (int d : {1, 2}) {
    const Network net = sn::net::build_qi_net(qi_of(d, 8, k, smooth), BuildMode::plain);
    for (int axis = 0; axis < d; ++axis) {
      const Network dn = sn::net::build_derivative_net(net, axis);
      for (int e : dn.exponent_set()) exps_ok = exps_ok && (e == k - 2 || e == k - 1);
      std::vector<double> x(static_cast<std::size_t>(d));
      for (int s = 0; s < 1000; ++s) {
        for (double& v : x) v = uniform(rng, 0, 1);
        const double want = sn::net::net_deriv(net, x, 1).gradient(0, axis);
        worst = std::max(worst, std::abs(sn::net::net_eval(dn, x)[0] - want) / std::max(1.0, std::abs(want)));
      }
    }
  }
  return {exps_ok && worst <= 1e-8,
          "max rel err " + g(worst) + " (tol 1e-08), exponents in {2,3}: " + (exps_ok ? "yes" : "no")};
}

Outcome c7_sphere_spectral() {
  const auto grid = sn::manifold::fibonacci_grid(1000);
  double worst = 0.0;
  int used = 0;
  for (const auto& x : grid.points) {
    const double y = sn::manifold::y31(x);
    if (std::abs(y) <= 0.05) continue;
    ++used;
    const double lb = sn::manifold::sphere_lb([](const Eigen::Vector3d& p) { return sn::manifold::y31(p); }, x);
    worst = std::max(worst, std::abs(lb - (-12.0 * y)) / std::abs(12.0 * y));
  }
  return {worst <= 1e-3, "max rel err " + g(worst) + " over " + std::to_string(used) + " points (tol 1e-03)"};
}

Outcome c8_quadrature() {
  const auto grid = sn::manifold::fibonacci_grid(20000);
  double i1 = 0.0;
  double i2 = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = sn::manifold::y31(grid.points[i]);
    i1 += grid.weights[i] * y;
    i2 += grid.weights[i] * y * y;
  }
  return {std::abs(i1) <= 1e-3 && std::abs(i2 - 1.0) <= 1e-3,
          "|int Y| " + g(std::abs(i1)) + ", |int Y^2 - 1| " + g(std::abs(i2 - 1.0)) + " (tol 1e-03)"};
}

Outcome c9_torus() {
  const sn::manifold::TorusParams p{1.5, 0.5};
  std::mt19937_64 rng(9);
  double worst = 0.0;
  for (int m = 0; m <= 4; ++m) {
    for (int n = 0; n <= 4; ++n) {
      for (const auto& [a, b] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{1.0, 1.0}}) {
        const auto t = sn::manifold::TargetFunction::torus_fourier({a, m, b, n}, p);
        const sn::manifold::AngleFunction f = [&](double u, double v) {
          return a * std::cos(m * u) + b * std::sin(n * v);
        };
        for (int s = 0; s < 1000; ++s) {
          const double u = uniform(rng, 0, 2 * kPi);
          const double v = uniform(rng, 0, 2 * kPi);
          worst = std::max(worst, std::abs(sn::manifold::torus_lb_numeric(f, u, v, p) -
                                           sn::manifold::torus_lb_closed(t, u, v, p)));
        }
      }
    }
  }
  return {worst <= 1e-5, "max abs err " + g(worst) + " (tol 1e-05)"};
}

Outcome c10_autodiff() {
  namespace tr = sn::train;
  std::mt19937_64 rng(10);
  double grad_worst = 0.0;
  double hess_worst = 0.0;
  const std::vector<std::vector<int>> patterns{{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}, {1, 1, 1, 5}};
  for (bool ln : {false, true}) {
    for (const auto& pat : patterns) {
      tr::MLPConfig cfg = tr::MLPConfig::uniform(8, static_cast<int>(pat.size()), 1);
      cfg.activation_pattern = pat;
      cfg.layer_norm = ln;
      for (int draw = 0; draw < 9; ++draw) {
        const tr::MLPParams prm = tr::mlp_init(cfg, rng());
        Eigen::MatrixXd xs(3, 4);
        for (double& v : xs.reshaped()) v = uniform(rng, -1, 1);
        std::vector<double> y(4), w(4);
        for (int i = 0; i < 4; ++i) {
          y[i] = uniform(rng, -1, 1);
          w[i] = uniform(rng, 0.1, 1);
        }
        Eigen::VectorXd grad;
        tr::mlp_loss_grad(prm, cfg, xs, y, w, &grad);
        const double h = 1e-6;
        for (long i = 0; i < prm.size(); ++i) {
          tr::MLPParams q = prm;
          q.theta[i] += h;
          const double lp = tr::mlp_loss_grad(q, cfg, xs, y, w, nullptr);
          q.theta[i] -= 2 * h;
          const double lm = tr::mlp_loss_grad(q, cfg, xs, y, w, nullptr);
          const double fd = (lp - lm) / (2 * h);
          grad_worst = std::max(grad_worst, std::abs(grad[i] - fd) / std::max(1.0, std::abs(fd)));
        }
        if (*std::min_element(pat.begin(), pat.end()) < 3) continue;
        const std::vector<double> x{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
        const auto jet = tr::mlp_hvp_surface(prm, cfg, x);
        const double hh = 1e-5;
        for (int a = 0; a < 3; ++a) {
          auto xp = x;
          auto xm = x;
          xp[a] += hh;
          xm[a] -= hh;
          const Eigen::Vector3d fd = (tr::mlp_jet(prm, cfg, xp).g - tr::mlp_jet(prm, cfg, xm).g) / (2 * hh);
          hess_worst = std::max(hess_worst, (jet.jet.h.col(a) - fd).cwiseAbs().maxCoeff() /
                                                std::max(1.0, fd.cwiseAbs().maxCoeff()));
        }
      }
    }
  }
  return {grad_worst <= 1e-5 && hess_worst <= 1e-4,
          "gradient rel err " + g(grad_worst) + " (tol 1e-05), Hessian rel err " + g(hess_worst) + " (tol 1e-04)"};
}

// Mean-row value of a column for the given arm in a training-suite table.
double mean_of(const sn::experiment::CsvTable& t, const std::string& arm, const std::string& column) {
  const auto& cols = t.columns();
  const auto idx = [&](const std::string& c) {
    return static_cast<std::size_t>(std::find(cols.begin(), cols.end(), c) - cols.begin());
  };
  for (const auto& row : t.rows()) {
    if (row[idx("row_type")] == "mean" && row[idx("arm")] == arm) return std::stod(row[idx(column)]);
  }
  throw std::runtime_error("no mean row for " + arm);
}

Outcome c11_actk() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = sn::experiment::default_config(Suite::actk_sweep, true);
  cfg.seed = 2024;
  cfg.k_list = {1, 4};
  const auto rep = sn::experiment::run_actk_sweep(cfg);
  const double l1 = mean_of(rep.table, "k=1", "final_loss");
  const double l4 = mean_of(rep.table, "k=4", "final_loss");
  const double lap1 = mean_of(rep.table, "k=1", "wmse_lap");
  const double lap4 = mean_of(rep.table, "k=4", "wmse_lap");
  const double secs = elapsed_since(t0);
  return {l4 < l1 && lap4 < lap1 && secs < 600.0,
          "loss k=4 " + g(l4) + " vs k=1 " + g(l1) + ", WMSE_lap k=4 " + g(lap4) + " vs k=1 " + g(lap1) + ", " +
              g(secs) + " s (limit 600 s)"};
}

Outcome c12_width() {
  ExperimentConfig cfg = sn::experiment::default_config(Suite::width_sweep, true);
  cfg.seed = 2024;
  cfg.width_list = {16, 64, 128};
  cfg.k = 4;
  const auto rep = sn::experiment::run_width_sweep(cfg);
  std::vector<double> params, mse;
  for (int w : cfg.width_list) {
    const std::string arm = "width=" + std::to_string(w);
    params.push_back(mean_of(rep.table, arm, "params"));
    mse.push_back(mean_of(rep.table, arm, "wmse_f"));
  }
  const bool decreasing = mse[1] < mse[0] && mse[2] < mse[1];
  const auto fit = sn::experiment::fit_loglog(params, mse);
  return {decreasing && fit.slope < -0.5 && fit.r_squared >= 0.8,
          "WMSE_f " + g(mse[0]) + " > " + g(mse[1]) + " > " + g(mse[2]) + (decreasing ? "" : " (not decreasing)") +
              ", slope " + g(fit.slope) + " (< -0.5), r^2 " + g(fit.r_squared) + " (>= 0.8)"};
}

Outcome c13_determinism() {
  std::vector<ExperimentConfig> cfgs;
  {
    ExperimentConfig c = sn::experiment::default_config(Suite::exactness, true);
    c.seed = 13;
    c.points = 2000;
    cfgs.push_back(c);
  }
  {
    ExperimentConfig c = sn::experiment::default_config(Suite::rate_sweep, true);
    c.seed = 13;
    cfgs.push_back(c);
  }
  for (Suite s : {Suite::actk_sweep, Suite::width_sweep}) {
    ExperimentConfig c = sn::experiment::default_config(s, true);
    c.seed = 13;
    c.steps = 100;
    c.samples = 1000;
    c.batch_size = 256;
    c.repeats = 2;
    if (s == Suite::actk_sweep) c.k_list = {1, 2, 4};
    if (s == Suite::width_sweep) c.width_list = {8, 16, 32};
    cfgs.push_back(c);
    c.manifold = sn::manifold::ManifoldKind::torus;
    cfgs.push_back(c);
  }
  std::string detail;
  bool ok = true;
  for (const auto& c : cfgs) {
    const auto a = sn::experiment::run_suite(c);
    const auto b = sn::experiment::run_suite(c);
    const bool same = a.table.str() == b.table.str() && a.fits.str() == b.fits.str();
    ok = ok && same;
    if (!detail.empty()) detail += "; ";
    detail += to_string(c.suite) + (c.manifold == sn::manifold::ManifoldKind::torus ? "/torus" : "") +
              (same ? " identical" : " DIFFERS");
  }
  return {ok, detail};
}

}  // namespace

int main() {
  report(1, "plain spline-net exactness", c1_plain_exactness);
  report(2, "bounded-weight mode", c2_bounded);
  report(3, "simultaneous W^s_inf rate", c3_rate);
  report(4, "parameter count scaling S ~ N^d", c4_scaling);
  report(5, "square/identity/multiplication subnets", c5_subnets);
  report(6, "first-order derivative network", c6_derivative_net);
  report(7, "sphere spectral identity", c7_sphere_spectral);
  report(8, "sphere quadrature", c8_quadrature);
  report(9, "torus Laplace-Beltrami", c9_torus);
  report(10, "autodiff gradients and Hessians", c10_autodiff);
  report(11, "activation-order trend", c11_actk);
  report(12, "width trend", c12_width);
  report(13, "suite determinism", c13_determinism);
  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
