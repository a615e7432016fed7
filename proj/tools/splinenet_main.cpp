// splinenet: runs the experiment suites and writes CSV reports.
//
//   splinenet exactness   --config cfg.txt --out exact.csv --seed 7
//   splinenet rate-sweep  --out rate.csv --seed 1
//   splinenet actk-sweep  --config actk.txt --out actk.csv --desk-scale true
//   splinenet width-sweep --config width.txt --out width.csv
//   splinenet samples     --manifold torus --count 5000 --seed 3 --out pts.csv
//
// Exit status: 0 if every gate passed, 1 if a gate failed, 2 on bad input.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "splinenet/experiment/config.hpp"
#include "splinenet/experiment/suites.hpp"
#include "splinenet/manifold/sphere.hpp"
#include "splinenet/manifold/torus.hpp"

namespace fs = std::filesystem;
using namespace splinenet;

namespace {

struct SuiteArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<bool> desk_scale;
};

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

int run(experiment::Suite suite, const SuiteArgs& a) {
  experiment::ConfigOverrides ov;
  ov.suite = suite;
  ov.seed = a.seed;
  ov.desk_scale = a.desk_scale;
  const experiment::ExperimentConfig cfg =
      a.config.empty() ? experiment::resolve_config({}, ov) : experiment::load_config(a.config, ov);
  fs::path out = a.out.empty() ? fs::path(cfg.output) : fs::path(a.out);
  if (out.empty()) throw std::invalid_argument("no output path (--out or config key 'output')");

  std::fprintf(stderr, "%s: config %s, seed %llu, %s scale\n", experiment::to_string(suite).c_str(),
               experiment::config_hash(cfg).c_str(), static_cast<unsigned long long>(cfg.seed),
               cfg.desk_scale ? "desk" : "full");
  const experiment::SuiteReport rep = experiment::run_suite(cfg);
  write_file(out, rep.table.str());
  if (!rep.fits.empty()) {
    fs::path fits = out;
    fits.replace_filename(out.stem().string() + "_fits" + out.extension().string());
    write_file(fits, rep.fits.str());
  }
  for (const auto& g : rep.gates) {
    std::printf("%s %s  %s\n", g.passed ? "PASS" : "FAIL", g.name.c_str(), g.detail.c_str());
  }
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spline-to-network compilation and surface-regression experiments"};
  app.require_subcommand(1);

  SuiteArgs args;
  const std::pair<const char*, experiment::Suite> suites[] = {
      {"exactness", experiment::Suite::exactness},
      {"rate-sweep", experiment::Suite::rate_sweep},
      {"actk-sweep", experiment::Suite::actk_sweep},
      {"width-sweep", experiment::Suite::width_sweep}};
  std::optional<experiment::Suite> chosen;
  for (const auto& [name, suite] : suites) {
    CLI::App* sub = app.add_subcommand(name, "run the " + std::string(name) + " suite");
    sub->add_option("--config", args.config, "typed key/value config file")->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "CSV output path");
    sub->add_option("--seed", args.seed, "base seed (overrides the config)");
    sub->add_option("--desk-scale", args.desk_scale, "true for desk-scale defaults, false for full scale");
    sub->callback([&chosen, s = suite] { chosen = s; });
  }

  std::string manifold = "sphere";
  int count = 5000;
  std::uint64_t seed = 0;
  std::string out;
  double big_r = 1.5;
  double small_r = 0.5;
  CLI::App* samples = app.add_subcommand("samples", "export a weighted sample set as CSV");
  samples->add_option("--manifold", manifold, "sphere or torus");
  samples->add_option("--count", count, "number of points")->check(CLI::PositiveNumber);
  samples->add_option("--seed", seed, "torus sampling seed");
  samples->add_option("--R", big_r, "torus major radius");
  samples->add_option("--r", small_r, "torus minor radius");
  samples->add_option("--out", out, "CSV output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (chosen) return run(*chosen, args);
    manifold::WeightedSampleSet set = manifold::parse_manifold(manifold) == manifold::ManifoldKind::sphere
                                          ? manifold::fibonacci_grid(count)
                                          : manifold::torus_sample(count, {big_r, small_r}, seed);
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out);
    manifold::write_sample_csv(set, f);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
