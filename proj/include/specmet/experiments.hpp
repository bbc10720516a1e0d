/*
 * experiments.hpp — the reproducible experiment runner behind the CLI.
 *
 * A config is a single JSON document with a versioned schema; unknown keys
 * are rejected with the offending path.  Defaults are resolved before the
 * run and echoed into the report, so a report replays from its own config
 * echo.  Same config + seed produces byte-identical CSV/JSON artifacts;
 * wall time is printed to stdout only, never serialized.
 */

#pragma once

#include "specmet/io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace specmet {

inline constexpr int kSchemaVersion = 1;

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> horizon;
  std::optional<std::string> out_dir;
};

// One numeric claim: value, the oracle it is checked against, and the
// tolerance that makes the comparison meaningful.
struct CheckResult {
  std::string name;     // module.operation.claim
  double value = 0.0;
  std::optional<double> expected;
  double tolerance = 0.0;
  std::string oracle;   // where `expected` comes from
  bool pass = false;

  Json to_json() const;
};

struct RunReport {
  std::string experiment;
  Json config_echo;
  std::vector<CheckResult> checks;
  std::vector<std::string> artifacts;
  Json details = Json::object();  // experiment-specific extras (functionals, ...)
  double wall_ms = 0.0;  // reported on stdout; excluded from the JSON file

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  Json to_json() const;
};

// Catalog of every experiment: name, what it measures, schema keys, and a
// runnable example config (each example validates against its own schema).
Json experiment_catalog();

// Throws config_error naming the offending key path.
void validate_config(const Json& config);

RunReport run_experiment(Json config, const RunOverrides& overrides = {});

// Resolved output directory: override > config > SPECMET_OUT_DIR > "out".
std::string resolve_out_dir(const Json& config, const RunOverrides& overrides);

}  // namespace specmet
