#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cycles.hpp"
#include "map_model.hpp"

namespace raycensus {

inline constexpr const char* kSchemaVersion = "raycensus-report/1";

// Exit codes shared by every front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitNotConverged = 3,
  kExitSingularHit = 4,
  kExitViolated = 5,
  kExitNotApplicable = 6,
};

struct RunConfig {
  std::string command;
  Complex c{0, 0};
  std::optional<double> radius;
  std::string address;
  double t_lo = 5;
  double t_hi = 200;
  int samples = 64;
  std::optional<int> depth;
  Box box;
  int max_period = 2;
  int window = 1;
  int period = 1;
  int horizon = 1000;
  std::optional<double> tol;
  int grid = 50;
  int probe_grid = 200;
  int levels = 10;
  int piece_samples = 40;
  std::string format = "json";
  unsigned threads = 0;  // 0: hardware count; never part of reports

  // Throws Error(parse) for unknown keys or mistyped values.
  static RunConfig from_json(const nlohmann::json& request);
  // Resolved configuration as embedded in reports (no thread count).
  nlohmann::json to_json() const;
};

struct RunResult {
  std::string output;  // JSON or CSV for stdout
  int exit_code = kExitOk;
  std::vector<std::string> diagnostics;  // for stderr
};

RunResult run(const RunConfig& config);
// Parses a JSON request; parse failures become exit code 2.
RunResult run_request(std::string_view request_json);

}  // namespace raycensus
