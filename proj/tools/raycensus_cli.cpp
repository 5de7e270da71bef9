// raycensus command-line front end. Builds a JSON request from flags and
// hands it to the shared library through rc_run.

#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "raycensus/raycensus.h"

namespace {

constexpr int kExitUsage = 2;

std::vector<double> split_reals(const std::string& text, char sep, std::size_t count,
                                const char* flag) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, sep)) {
    std::size_t used = 0;
    double value = 0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size())
      throw CLI::ValidationError(flag, "expected " + std::to_string(count) + " numbers");
    out.push_back(value);
  }
  if (out.size() != count || (!text.empty() && text.back() == sep))
    throw CLI::ValidationError(flag, "expected " + std::to_string(count) + " numbers");
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic rays, cycles and Fatou-Shishikura census for f(z) = e^z + c"};
  app.set_version_flag("--version", std::string(rc_version()));
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file");

  std::string address, t_text, output, format = "json";
  // Config files deliver comma lists already split; rejoin before parsing.
  std::vector<std::string> c_parts, box_parts;
  std::optional<double> radius, tol;
  std::optional<int> samples, depth, max_period, window, period, horizon, grid, probe_grid,
      levels, piece_samples;
  std::optional<unsigned> threads;
  bool csv = false;

  app.add_option("--c", c_parts, "parameter c as re,im")->allow_extra_args(false);
  app.add_option("--radius", radius, "radius R of the disk D");
  app.add_option("--address", address, "address, e.g. 0 or 3:0,1");
  app.add_option("--t", t_text, "potential range lo:hi");
  app.add_option("--samples", samples, "number of ray samples");
  app.add_option("--depth", depth, "pullback depth");
  app.add_option("--box", box_parts, "search box x0,x1,y0,y1")->allow_extra_args(false);
  app.add_option("--max-period", max_period, "largest cycle period P");
  app.add_option("--window", window, "address window K");
  app.add_option("--period", period, "period p of the ray graph");
  app.add_option("--horizon", horizon, "orbit-tracking horizon");
  app.add_option("--tol", tol, "tolerance");
  app.add_option("--grid", grid, "Newton seed grid per side");
  app.add_option("--probe-grid", probe_grid, "region probe grid per side");
  app.add_option("--levels", levels, "tail levels");
  app.add_option("--piece-samples", piece_samples, "piece sampling grid per side");
  app.add_option("--threads", threads, "worker threads (0: hardware count)")
      ->envname("RAYCENSUS_THREADS");
  app.add_option("--output", output, "write data to this file instead of stdout");
  app.add_flag("--csv", csv, "emit CSV instead of JSON where supported");

  const char* commands[][2] = {
      {"trace-ray", "trace a dynamic ray (CSV t,re,im)"},
      {"land", "landing point of a periodic ray"},
      {"cycles", "periodic orbits in the box"},
      {"regions", "ray graph, basic regions and interior fixed points"},
      {"tails", "fundamental tails and pieces around the landing cycle of an address"},
      {"audit", "Fatou-Shishikura census"},
      {"plot", "polylines and cycle points as CSV"}};
  for (auto& command : commands) app.add_subcommand(command[0], command[1])->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  nlohmann::json request;
  try {
    request["command"] = app.get_subcommands().front()->get_name();
    const std::string c_text = join(c_parts), box_text = join(box_parts);
    if (c_text.empty()) throw CLI::ValidationError("--c", "parameter c is required");
    request["c"] = split_reals(c_text, ',', 2, "--c");
    if (!t_text.empty()) request["t"] = split_reals(t_text, ':', 2, "--t");
    if (!box_text.empty()) request["box"] = split_reals(box_text, ',', 4, "--box");
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!address.empty()) request["address"] = address;
  if (radius) request["radius"] = *radius;
  if (tol) request["tol"] = *tol;
  auto put = [&](const char* key, const std::optional<int>& v) {
    if (v) request[key] = *v;
  };
  put("samples", samples);
  put("depth", depth);
  put("max_period", max_period);
  put("window", window);
  put("period", period);
  put("horizon", horizon);
  put("grid", grid);
  put("probe_grid", probe_grid);
  put("levels", levels);
  put("piece_samples", piece_samples);
  if (threads) request["threads"] = *threads;
  request["format"] = csv ? "csv" : format;

  char* out = nullptr;
  char* diagnostics = nullptr;
  int exit_code = 0;
  std::string text = request.dump();
  if (rc_run(text.c_str(), &out, &diagnostics, &exit_code) != RC_OK) {
    std::cerr << "error: " << rc_last_error() << "\n";
    return 1;
  }
  if (diagnostics && *diagnostics) std::cerr << diagnostics;
  int status = exit_code;
  if (output.empty()) {
    std::fwrite(out, 1, std::strlen(out), stdout);
  } else {
    std::ofstream file(output, std::ios::binary);
    file << out;
    if (!file) {
      std::cerr << "error: cannot write " << output << "\n";
      status = 1;
    }
  }
  rc_free(out);
  rc_free(diagnostics);
  return status;
}
