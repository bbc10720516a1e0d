// specmet — experiment runner for metric spectral estimation.
//
//   specmet run <config.json> [--seed S] [--horizon N] [--out DIR]
//   specmet validate <config.json>
//   specmet list
//
// Exit status 0 iff every check in the run passed.

#include "specmet/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

specmet::Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw specmet::config_error("cannot open config file '" + path + "'");
  specmet::Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw specmet::config_error("config '" + path + "' is not valid JSON: " + e.what());
  }
  return j;
}

void print_report(const specmet::RunReport& rep) {
  for (const auto& c : rep.checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name
              << "  value=" << specmet::format_double(c.value);
    if (c.expected) std::cout << " expected=" << specmet::format_double(*c.expected);
    std::cout << " tol=" << specmet::format_double(c.tolerance) << "  [" << c.oracle
              << "]\n";
  }
  for (const auto& a : rep.artifacts) std::cout << "wrote " << a << "\n";
  std::cout << (rep.pass() ? "OK" : "FAILED") << " (" << rep.checks.size()
            << " checks, " << specmet::format_double(rep.wall_ms) << " ms)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metric spectral experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::size_t horizon = 0;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "path to the config JSON")->required();
  auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
  auto* horizon_opt = run->add_option("--horizon", horizon, "override the horizon");
  auto* out_opt = run->add_option("--out", out_dir, "output directory");

  auto* validate = app.add_subcommand("validate", "validate a config without running");
  validate->add_option("config", config_path, "path to the config JSON")->required();

  app.add_subcommand("list", "print the experiment catalog with example configs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list")) {
      std::cout << specmet::experiment_catalog().dump(2) << "\n";
      return 0;
    }
    if (app.got_subcommand("validate")) {
      specmet::validate_config(load_json(config_path));
      std::cout << "OK " << config_path << "\n";
      return 0;
    }
    specmet::RunOverrides overrides;
    if (*seed_opt) overrides.seed = seed;
    if (*horizon_opt) overrides.horizon = horizon;
    if (*out_opt) overrides.out_dir = out_dir;
    const auto rep = specmet::run_experiment(load_json(config_path), overrides);
    print_report(rep);
    return rep.pass() ? 0 : 1;
  } catch (const specmet::config_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
