#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "address.hpp"
#include "census.hpp"
#include "error.hpp"
#include "rays.hpp"
#include "regions.hpp"
#include "serialize.hpp"
#include "tails.hpp"

namespace raycensus {

using nlohmann::json;

namespace {

const std::set<std::string> kCommands = {"trace-ray", "land",  "cycles", "regions",
                                         "tails",     "audit", "plot"};

template <class T>
void read(const json& request, const char* key, T& out) {
  auto it = request.find(key);
  if (it == request.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::parse, std::string("bad value for '") + key + "'");
  }
}

template <class T>
void read(const json& request, const char* key, std::optional<T>& out) {
  auto it = request.find(key);
  if (it == request.end() || it->is_null()) return;
  T value{};
  read(request, key, value);
  out = value;
}

std::vector<double> read_reals(const json& request, const char* key, std::size_t count) {
  std::vector<double> values;
  read(request, key, values);
  if (values.size() != count)
    fail(ErrorCode::parse, std::string("'") + key + "' needs " + std::to_string(count) + " numbers");
  return values;
}

std::string csv_header_rows(const std::string& header, const std::vector<std::string>& rows) {
  std::string out = header + "\n";
  for (const auto& row : rows) out += row + "\n";
  return out;
}

json cycle_json(const Cycle& cycle) {
  return {{"period", cycle.period},
          {"points", complex_list_json(cycle.points)},
          {"multiplier", complex_json(cycle.multiplier)},
          {"multiplier_modulus", std::abs(cycle.multiplier)},
          {"class", to_string(cycle.kind)},
          {"rotation_number", cycle.rotation_number},
          {"in_box", cycle.in_box}};
}

json box_json(const Box& box) { return json::array({box.x0, box.x1, box.y0, box.y1}); }

json landing_json(const InfiniteAddress& s, const LandingResult& r) {
  json out = {{"address", s.to_string()},
              {"status", to_string(r.status)},
              {"iterations", r.iterations}};
  if (r.status == LandingStatus::landed) {
    out["point"] = complex_json(r.point);
    out["psi_derivative"] = complex_json(r.psi_derivative);
  } else {
    out["last_iterate"] = complex_json(r.point);
  }
  return out;
}

json radius_json(const RadiusChoice& choice) {
  json out = {{"verdict", to_string(choice.verdict)},
              {"follow_steps", choice.follow_steps},
              {"followed_to_horizon", choice.followed_to_horizon},
              {"horizon", choice.horizon}};
  if (choice.verdict == RadiusChoice::Verdict::finite) out["r"] = choice.r;
  if (choice.start_index) out["start_index"] = *choice.start_index;
  return out;
}

json graph_json(const RayGraph& graph) {
  json arcs = json::array();
  for (const Arc& arc : graph.arcs())
    arcs.push_back({{"address", arc.address.to_string()},
                    {"landing", complex_json(arc.landing)},
                    {"closure_gap", arc.closure_gap},
                    {"polyline", complex_list_json(arc.polyline)}});
  json excluded = json::array();
  for (const auto& e : graph.excluded())
    excluded.push_back({{"address", e.address.to_string()}, {"status", to_string(e.status)}});
  json regions = json::array();
  for (const auto& r : graph.regions())
    regions.push_back({{"id", r.id}, {"representative", complex_json(r.representative)}});
  return {{"p", graph.p()},
          {"window", graph.window()},
          {"truncation", graph.truncation()},
          {"arcs", arcs},
          {"excluded", excluded},
          {"regions", regions},
          {"region_count", graph.region_count()},
          {"min_arc_separation", graph.min_arc_separation()},
          {"diagnostics", graph.diagnostics()}};
}

MapModel map_of(const RunConfig& config) { return MapModel::exponential(config.c, config.radius); }

InfiniteAddress address_of(const RunConfig& config) {
  if (config.address.empty()) fail(ErrorCode::parse, "an address is required");
  return InfiniteAddress::parse(config.address);
}

json envelope(const RunConfig& config) {
  return {{"schema", kSchemaVersion}, {"command", config.command}, {"config", config.to_json()}};
}

RunResult cmd_trace_ray(const RunConfig& config) {
  const MapModel map = map_of(config);
  const InfiniteAddress s = address_of(config);
  if (!(config.t_lo > 0) || !(config.t_lo < config.t_hi))
    fail(ErrorCode::parse, "potential range must satisfy 0 < lo < hi");
  if (config.samples < 2) fail(ErrorCode::parse, "need at least two samples");
  std::vector<double> grid;
  for (int i = 0; i < config.samples; ++i)
    grid.push_back(config.t_lo *
                   std::pow(config.t_hi / config.t_lo, static_cast<double>(i) / (config.samples - 1)));
  grid.back() = config.t_hi;
  Ray ray = config.depth ? trace_ray(map, s, *config.depth, grid)
                         : trace_ray_by_potential(map, s, grid);
  RunResult result;
  std::vector<std::string> rows;
  for (const auto& sample : ray.samples)
    rows.push_back(format_double(sample.t) + "," + format_double(sample.z.real()) + "," +
                   format_double(sample.z.imag()));
  result.output = csv_header_rows("t,re,im", rows);
  if (!ray.converged) result.diagnostics.push_back("warning: depth-to-depth movement above 1e-6");
  return result;
}

RunResult cmd_land(const RunConfig& config) {
  const MapModel map = map_of(config);
  const InfiniteAddress s = address_of(config);
  if (period_of(s) == 0) fail(ErrorCode::precondition, "land needs a purely periodic address");
  LandingOptions options;
  options.tol = config.tol.value_or(1e-10);
  LandingResult r = landing_point(map, s, options);
  json doc = envelope(config);
  doc["result"] = landing_json(s, r);
  RunResult result{canonical_json(doc) + "\n", kExitOk, {}};
  if (r.status == LandingStatus::singular_hit) result.exit_code = kExitSingularHit;
  if (r.status == LandingStatus::not_converged || r.status == LandingStatus::escaped_pullback)
    result.exit_code = kExitNotConverged;
  return result;
}

CycleSearchOptions cycle_options(const RunConfig& config, int max_period) {
  CycleSearchOptions o;
  o.box = config.box;
  o.max_period = max_period;
  o.grid = config.grid;
  o.tol = config.tol.value_or(1e-12);
  o.threads = config.threads;
  return o;
}

RayGraph graph_of(const MapModel& map, const RunConfig& config, int p) {
  RayGraphOptions o;
  o.region_box = config.box;
  o.probe_grid = config.probe_grid;
  o.threads = config.threads;
  return build_ray_graph(map, p, config.window, config.depth.value_or(40), o);
}

RunResult cmd_cycles(const RunConfig& config) {
  const MapModel map = map_of(config);
  CycleSearchResult found = find_cycles(map, cycle_options(config, config.max_period));
  json doc = envelope(config);
  doc["cycles"] = json::array();
  for (const Cycle& c : found.cycles) doc["cycles"].push_back(cycle_json(c));
  doc["warnings"] = found.warnings;
  RunResult result{canonical_json(doc) + "\n", kExitOk, found.warnings};
  return result;
}

RunResult cmd_regions(const RunConfig& config) {
  const MapModel map = map_of(config);
  RayGraph graph = graph_of(map, config, config.period);
  CycleSearchResult found = find_cycles(map, cycle_options(config, config.period));
  FixedPointAudit audit = interior_fixed_point_audit(graph, found.cycles);
  json interior = json::array();
  for (const auto& [id, points] : audit.interior)
    interior.push_back({{"region", id}, {"points", complex_list_json(points)}});
  json doc = envelope(config);
  doc["graph"] = graph_json(graph);
  doc["fixed_point_audit"] = {{"interior", interior},
                              {"landing_points", complex_list_json(audit.landing_points)},
                              {"on_arc", complex_list_json(audit.on_arc)},
                              {"attracting_regions", audit.attracting_regions},
                              {"violations", audit.violations},
                              {"passed", audit.passed()}};
  RunResult result{canonical_json(doc) + "\n", kExitOk, graph.diagnostics()};
  return result;
}

RunResult cmd_tails(const RunConfig& config) {
  const MapModel map = map_of(config);
  const InfiniteAddress s = address_of(config);
  const std::size_t p = period_of(s);
  if (p == 0) fail(ErrorCode::precondition, "tails need a purely periodic address");
  LandingResult landing = landing_point(map, s);
  json doc = envelope(config);
  doc["landing"] = landing_json(s, landing);
  if (landing.status != LandingStatus::landed) {
    RunResult result{canonical_json(doc) + "\n", kExitNotConverged, {"ray does not land"}};
    if (landing.status == LandingStatus::singular_hit) result.exit_code = kExitSingularHit;
    return result;
  }
  int m = static_cast<int>(p);
  for (int d = 1; d < static_cast<int>(p); ++d) {
    if (p % static_cast<std::size_t>(d) != 0) continue;
    auto jet = iterate_jet(map, landing.point, d);
    if (jet && std::abs(jet->value - landing.point) < 1e-8 * std::max(1.0, std::abs(landing.point))) {
      m = d;
      break;
    }
  }
  Cycle cycle = make_cycle(map, landing.point, m);
  cycle.in_box = std::all_of(cycle.points.begin(), cycle.points.end(),
                             [&](Complex z) { return config.box.contains(z); });
  if (cycle.kind != CycleClass::repelling)
    fail(ErrorCode::precondition, "landing cycle is not repelling");
  const int graph_p = config.period % m == 0 ? config.period : m;
  RayGraph graph = graph_of(map, config, graph_p);
  TailSetup setup = prepare_tail_setup(cycle, graph);
  RadiusChoice choice = choose_radius(map, cycle, setup, config.horizon);
  doc["cycle"] = cycle_json(cycle);
  doc["radius_choice"] = radius_json(choice);
  doc["records"] = json::array();
  if (choice.verdict == RadiusChoice::Verdict::finite) {
    TailContext ctx = TailContext::make(map, cycle, graph, config.horizon);
    for (int n = 1; n <= config.levels; ++n) {
      TailAddressRecord record = tail_exists(ctx, s, n);
      json entry = {{"level", n},
                    {"address", to_string(record.address)},
                    {"exists", record.exists},
                    {"indeterminate", record.indeterminate}};
      if (record.exists) {
        entry["witness"] = complex_json(record.witness);
        PieceEstimate piece = piece_diameter(ctx, s, n, config.piece_samples);
        entry["piece"] = {{"diameter_estimate", piece.diameter},
                          {"samples", piece.sample_count},
                          {"empty", piece.empty}};
      } else {
        entry["reason"] = record.reason;
      }
      doc["records"].push_back(entry);
    }
  }
  return {canonical_json(doc) + "\n", kExitOk, {}};
}

json report_json(const CensusReport& r) {
  json cycles = json::array();
  for (const Cycle& c : r.cycles) cycles.push_back(cycle_json(c));
  json landings = json::array();
  for (const LandingRecord& l : r.landings) {
    json addresses = json::array();
    for (const auto& s : l.addresses) addresses.push_back(s.to_string());
    landings.push_back({{"cycle", l.cycle_index},
                        {"period_cap", l.period_cap},
                        {"addresses", addresses},
                        {"equal_period", l.equal_period},
                        {"invisible_candidate", l.invisible_candidate}});
  }
  json unlanded = json::array();
  for (const auto& u : r.unlanded)
    unlanded.push_back({{"address", u.address.to_string()}, {"status", to_string(u.status)}});
  json evidence = json::array();
  for (const auto& e : r.evidence)
    evidence.push_back({{"cycle", e.cycle_index},
                        {"supported_case", e.supported_case},
                        {"radius_choice", radius_json(e.choice)},
                        {"note", e.note}});
  json singular = {{"case", to_string(r.singular)},
                   {"escape_status", to_string(r.escape.kind)},
                   {"escape_steps", r.escape.steps},
                   {"horizon", r.options.horizon}};
  if (r.singular_address) singular["address"] = r.singular_address->to_string();
  json out = {{"parameter", complex_json(r.map.c())},
              {"radius", r.map.radius()},
              {"box", box_json(r.options.box)},
              {"cycles", cycles},
              {"partial_cycles_outside_box", r.partial_cycles},
              {"landings", landings},
              {"N_attracting", r.n_attracting},
              {"N_indifferent", r.n_indifferent},
              {"N_repelling", r.n_repelling},
              {"N_invisible_candidates", r.n_invisible_candidates},
              {"q", r.q},
              {"q_effective", r.q_effective},
              {"singular", singular},
              {"hypotheses",
               {{"all_window_rays_landed", r.all_window_rays_landed},
                {"singular_escaping_along_periodic_ray", r.singular_escapes_along_periodic_ray},
                {"unlanded", unlanded}}},
              {"verdict", to_string(r.verdict)},
              {"trichotomy_evidence", evidence},
              {"warnings", r.warnings}};
  if (!r.reproducer.empty()) out["reproducer"] = r.reproducer;
  return out;
}

RunResult cmd_audit(const RunConfig& config) {
  const MapModel map = map_of(config);
  AuditOptions o;
  o.box = config.box;
  o.max_period = config.max_period;
  o.window = config.window;
  o.depth = config.depth.value_or(40);
  o.horizon = config.horizon;
  o.grid = config.grid;
  o.tol = config.tol.value_or(1e-12);
  o.threads = config.threads;
  CensusReport report = audit(map, o);
  RunResult result;
  result.diagnostics = report.warnings;
  if (config.format == "csv") {
    std::vector<std::string> rows;
    for (std::size_t i = 0; i < report.cycles.size(); ++i) {
      const Cycle& c = report.cycles[i];
      std::string addresses;
      bool invisible = false;
      for (const auto& l : report.landings) {
        if (l.cycle_index != i) continue;
        invisible = l.invisible_candidate;
        for (const auto& s : l.addresses) addresses += (addresses.empty() ? "" : " ") + s.to_string();
      }
      rows.push_back(std::to_string(i) + "," + std::to_string(c.period) + "," +
                     format_double(c.points[0].real()) + "," + format_double(c.points[0].imag()) +
                     "," + format_double(c.multiplier.real()) + "," +
                     format_double(c.multiplier.imag()) + "," + to_string(c.kind) + ",\"" +
                     addresses + "\"," + (invisible ? "true" : "false"));
    }
    result.output = csv_header_rows(
        "cycle,period,z0_re,z0_im,multiplier_re,multiplier_im,class,landing_addresses,"
        "invisible_candidate",
        rows);
  } else {
    json doc = envelope(config);
    doc["report"] = report_json(report);
    result.output = canonical_json(doc) + "\n";
  }
  switch (report.verdict) {
    case Verdict::satisfied: result.exit_code = kExitOk; break;
    case Verdict::violated: result.exit_code = kExitViolated; break;
    case Verdict::not_applicable: result.exit_code = kExitNotApplicable; break;
  }
  return result;
}

RunResult cmd_plot(const RunConfig& config) {
  const MapModel map = map_of(config);
  RayGraph graph = graph_of(map, config, config.period);
  CycleSearchResult found = find_cycles(map, cycle_options(config, config.max_period));
  std::vector<std::string> rows;
  auto row = [&](const std::string& kind, const std::string& label, std::size_t index, Complex z) {
    rows.push_back(kind + "," + label + "," + std::to_string(index) + "," +
                   format_double(z.real()) + "," + format_double(z.imag()));
  };
  for (const Arc& arc : graph.arcs()) {
    for (std::size_t i = 0; i < arc.polyline.size(); ++i)
      row("arc", arc.address.to_string(), i, arc.polyline[i]);
    row("landing", arc.address.to_string(), 0, arc.landing);
  }
  for (std::size_t c = 0; c < found.cycles.size(); ++c)
    for (std::size_t i = 0; i < found.cycles[c].points.size(); ++i)
      row("cycle", std::to_string(c) + ":" + to_string(found.cycles[c].kind), i,
          found.cycles[c].points[i]);
  return {csv_header_rows("kind,label,index,re,im", rows), kExitOk, graph.diagnostics()};
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::singular_hit: return kExitSingularHit;
    case ErrorCode::numeric: return kExitInternal;
    default: return kExitUsage;
  }
}

}  // namespace

RunConfig RunConfig::from_json(const json& request) {
  if (!request.is_object()) fail(ErrorCode::parse, "request must be a JSON object");
  static const std::set<std::string> known = {
      "command", "c",       "radius",  "address", "t",          "samples",    "depth",
      "box",     "max_period", "window", "period", "horizon",  "tol",        "grid",
      "probe_grid", "levels", "piece_samples", "format", "threads"};
  for (auto it = request.begin(); it != request.end(); ++it)
    if (!known.count(it.key())) fail(ErrorCode::parse, "unknown key '" + it.key() + "'");
  RunConfig config;
  read(request, "command", config.command);
  if (!kCommands.count(config.command))
    fail(ErrorCode::parse, "unknown command '" + config.command + "'");
  if (!request.contains("c")) fail(ErrorCode::parse, "parameter c is required");
  auto c = read_reals(request, "c", 2);
  config.c = Complex(c[0], c[1]);
  read(request, "radius", config.radius);
  read(request, "address", config.address);
  if (request.contains("t")) {
    auto t = read_reals(request, "t", 2);
    config.t_lo = t[0];
    config.t_hi = t[1];
  }
  if (request.contains("box")) {
    auto b = read_reals(request, "box", 4);
    config.box = Box{b[0], b[1], b[2], b[3]};
    if (!config.box.valid()) fail(ErrorCode::parse, "box must satisfy x0 < x1 and y0 < y1");
  }
  read(request, "samples", config.samples);
  read(request, "depth", config.depth);
  read(request, "max_period", config.max_period);
  read(request, "window", config.window);
  read(request, "period", config.period);
  read(request, "horizon", config.horizon);
  read(request, "tol", config.tol);
  read(request, "grid", config.grid);
  read(request, "probe_grid", config.probe_grid);
  read(request, "levels", config.levels);
  read(request, "piece_samples", config.piece_samples);
  read(request, "format", config.format);
  read(request, "threads", config.threads);
  if (config.format != "json" && config.format != "csv")
    fail(ErrorCode::parse, "format must be json or csv");
  if (config.max_period < 1 || config.window < 0 || config.period < 1 || config.horizon < 1 ||
      config.grid < 1 || config.probe_grid < 0 || config.levels < 1 || config.piece_samples < 1 ||
      (config.depth && *config.depth < 0))
    fail(ErrorCode::parse, "numeric option out of range");
  return config;
}

json RunConfig::to_json() const {
  json out = {{"c", complex_json(c)},
              {"radius", radius ? json(*radius) : json(MapModel::default_radius(c))},
              {"box", box_json(box)},
              {"max_period", max_period},
              {"window", window},
              {"period", period},
              {"horizon", horizon},
              {"grid", grid},
              {"probe_grid", probe_grid},
              {"levels", levels},
              {"piece_samples", piece_samples},
              {"samples", samples},
              {"t", json::array({t_lo, t_hi})},
              {"format", format}};
  if (!address.empty()) out["address"] = address;
  if (depth) out["depth"] = *depth;
  if (tol) out["tol"] = *tol;
  return out;
}

RunResult run(const RunConfig& config) {
  try {
    if (config.command == "trace-ray") return cmd_trace_ray(config);
    if (config.command == "land") return cmd_land(config);
    if (config.command == "cycles") return cmd_cycles(config);
    if (config.command == "regions") return cmd_regions(config);
    if (config.command == "tails") return cmd_tails(config);
    if (config.command == "audit") return cmd_audit(config);
    if (config.command == "plot") return cmd_plot(config);
    fail(ErrorCode::parse, "unknown command '" + config.command + "'");
  } catch (const Error& e) {
    return {"", exit_code_for(e.code()), {std::string("error: ") + e.what()}};
  } catch (const std::exception& e) {
    return {"", kExitInternal, {std::string("internal error: ") + e.what()}};
  }
}

RunResult run_request(std::string_view request_json) {
  RunConfig config;
  try {
    config = RunConfig::from_json(json::parse(request_json));
  } catch (const Error& e) {
    return {"", kExitUsage, {std::string("error: ") + e.what()}};
  } catch (const json::exception& e) {
    return {"", kExitUsage, {std::string("error: malformed request: ") + e.what()}};
  }
  return run(config);
}

}  // namespace raycensus
