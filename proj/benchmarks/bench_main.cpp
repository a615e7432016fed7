#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "splinenet/manifold/sphere.hpp"
#include "splinenet/net/derivatives.hpp"
#include "splinenet/net/spline_net.hpp"
#include "splinenet/spline/quasi_interpolant.hpp"
#include "splinenet/train/mlp.hpp"
#include "splinenet/train/trainer.hpp"

namespace sn = splinenet;

namespace {

sn::spline::QuasiInterpolant sin_qi(int d, int n) {
  const sn::spline::TensorSplineSpace space(d, n, 4);
  return sn::spline::quasi_interpolate(space, [](std::span<const double> x) {
    double v = 1.0;
    for (double c : x) v *= std::sin(6.0 * c);
    return v;
  });
}

void BM_BuildQiNet(benchmark::State& state) {
  const auto qi = sin_qi(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto mode = state.range(2) ? sn::net::BuildMode::bounded : sn::net::BuildMode::plain;
  for (auto _ : state) benchmark::DoNotOptimize(sn::net::build_qi_net(qi, mode));
}
BENCHMARK(BM_BuildQiNet)->Args({1, 16, 0})->Args({1, 16, 1})->Args({2, 16, 0})->Args({2, 16, 1});

void BM_QiNetEval(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto net = sn::net::build_qi_net(sin_qi(d, 16), sn::net::BuildMode::plain);
  Eigen::MatrixXd xs = (Eigen::MatrixXd::Random(d, 1024).array() + 1.0) / 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(sn::net::net_eval_batch(net, xs));
  state.SetItemsProcessed(state.iterations() * xs.cols());
}
BENCHMARK(BM_QiNetEval)->Arg(1)->Arg(2);

void BM_NetDeriv2(benchmark::State& state) {
  const auto net = sn::net::build_qi_net(sin_qi(2, 16), sn::net::BuildMode::plain);
  const std::vector<double> x{0.37, 0.61};
  for (auto _ : state) benchmark::DoNotOptimize(sn::net::net_deriv(net, x, 2));
}
BENCHMARK(BM_NetDeriv2);

void BM_MlpLossGrad(benchmark::State& state) {
  const auto cfg = sn::train::MLPConfig::uniform(static_cast<int>(state.range(0)), 2, 4);
  const auto p = sn::train::mlp_init(cfg, 1);
  const auto samples = sn::manifold::fibonacci_grid(2048);
  const auto data = sn::train::make_dataset(samples, sn::manifold::TargetFunction::sphere_y31());
  Eigen::VectorXd grad;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sn::train::mlp_loss_grad(p, cfg, data.xs, data.targets, data.weights, &grad));
  }
  state.SetItemsProcessed(state.iterations() * data.xs.cols());
}
BENCHMARK(BM_MlpLossGrad)->Arg(16)->Arg(64)->Arg(128);

void BM_MlpSurfaceJet(benchmark::State& state) {
  const auto cfg = sn::train::MLPConfig::uniform(64, 2, 4);
  const auto p = sn::train::mlp_init(cfg, 1);
  const std::vector<double> x{0.48, -0.6, 0.64};
  for (auto _ : state) benchmark::DoNotOptimize(sn::train::mlp_hvp_surface(p, cfg, x));
}
BENCHMARK(BM_MlpSurfaceJet);

}  // namespace

BENCHMARK_MAIN();
