#include "census.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "error.hpp"
#include "parallel.hpp"
#include "regions.hpp"

namespace raycensus {

namespace {

constexpr int kBasinSteps = 50;
constexpr double kBasinDistance = 1e-6;

// Periodic addresses with entries in [-K, K] and exact period 1..cap.
std::vector<InfiniteAddress> window_addresses(int window, int cap) {
  std::vector<InfiniteAddress> out;
  for (int q = 1; q <= cap; ++q)
    for (auto& s : enumerate_periodic(window, q))
      if (period_of(s) == static_cast<std::size_t>(q)) out.push_back(std::move(s));
  return out;
}

using LandingCache = std::map<InfiniteAddress, LandingResult>;

void fill_cache(const MapModel& map, const std::vector<InfiniteAddress>& addresses,
                const LandingOptions& options, unsigned threads, LandingCache& cache) {
  std::vector<InfiniteAddress> missing;
  for (const auto& s : addresses)
    if (!cache.count(s)) missing.push_back(s);
  std::vector<LandingResult> results(missing.size());
  parallel_for(missing.size(), threads,
               [&](std::size_t i) { results[i] = landing_point(map, missing[i], options); });
  for (std::size_t i = 0; i < missing.size(); ++i) cache.emplace(missing[i], results[i]);
}

LandingSearchResult match_cycle(const Cycle& cycle, const std::vector<InfiniteAddress>& addresses,
                                const LandingCache& cache, double match_tol) {
  LandingSearchResult out;
  for (const auto& s : addresses) {
    const LandingResult& r = cache.at(s);
    if (r.status != LandingStatus::landed) {
      out.unlanded.push_back({s, r.status});
      continue;
    }
    for (Complex z : cycle.points)
      if (std::abs(r.point - z) < match_tol) {
        out.addresses.push_back(s);
        break;
      }
  }
  std::sort(out.addresses.begin(), out.addresses.end());
  for (const auto& s : out.addresses)
    if (period_of(s) != period_of(out.addresses.front())) out.equal_period = false;
  return out;
}

// Follows the singular orbit through the regions of `cycle`; true when it
// stays on the itinerary for the whole horizon.
bool singular_orbit_follows(const MapModel& map, const Cycle& cycle, const RayGraph& graph,
                            int horizon) {
  std::vector<RegionId> regions;
  try {
    for (Complex z : cycle.points) regions.push_back(graph.region_of(z));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::on_arc) throw;
    return false;
  }
  auto path = itinerary(map, graph, map.c(), horizon);
  const std::size_t m = regions.size();
  for (std::size_t start = 0; start < m; ++start) {
    bool follows = true;
    for (std::size_t j = 0; j < path.size() && follows; ++j)
      follows = path[j].kind == ItineraryEntry::Kind::region &&
                path[j].id == regions[(start + j) % m];
    if (follows) return true;
  }
  return false;
}

}  // namespace

std::string to_string(SingularCase kind) {
  switch (kind) {
    case SingularCase::in_basin: return "in-attracting-or-parabolic-basin";
    case SingularCase::trapped_case_1: return "trapped-case-1";
    case SingularCase::escaping_along_periodic_ray: return "escaping-along-periodic-ray";
    case SingularCase::escaping_other: return "escaping-other";
    case SingularCase::undetermined: return "undetermined";
  }
  return "unknown";
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::satisfied: return "satisfied";
    case Verdict::violated: return "violated";
    case Verdict::not_applicable: return "not-applicable";
  }
  return "unknown";
}

LandingSearchResult landing_search(const MapModel& map, const Cycle& cycle,
                                   const LandingSearchOptions& options) {
  if (cycle.kind != CycleClass::repelling)
    fail(ErrorCode::precondition, "landing search needs a repelling cycle");
  if (options.window < 0 || options.period_cap < 1)
    fail(ErrorCode::invalid_argument, "landing search needs K >= 0 and cap >= 1");
  auto addresses = window_addresses(options.window, options.period_cap);
  LandingCache cache;
  fill_cache(map, addresses, options.landing, options.threads, cache);
  return match_cycle(cycle, addresses, cache, options.match_tol);
}

CensusReport audit(const MapModel& map, const AuditOptions& o) {
  if (o.max_period < 1 || o.window < 0 || o.depth < 1 || o.horizon < 1)
    fail(ErrorCode::invalid_argument, "audit needs P >= 1, K >= 0, depth >= 1, horizon >= 1");
  CensusReport report;
  report.map = map;
  report.options = o;

  // (1)-(2) cycle inventory.
  CycleSearchOptions search;
  search.box = o.box;
  search.max_period = o.max_period;
  search.grid = o.grid;
  search.tol = o.tol;
  search.tol_band = o.tol_band;
  search.threads = o.threads;
  CycleSearchResult found = find_cycles(map, search);
  report.warnings = found.warnings;
  for (const Cycle& cycle : found.cycles) {
    if (!cycle.in_box) {
      ++report.partial_cycles;
      continue;
    }
    report.cycles.push_back(cycle);
    switch (cycle.kind) {
      case CycleClass::attracting:
      case CycleClass::superattracting: ++report.n_attracting; break;
      case CycleClass::repelling: ++report.n_repelling; break;
      case CycleClass::indifferent:
      case CycleClass::parabolic_suspected: ++report.n_indifferent; break;
    }
  }

  // (3) singular orbit.
  {
    std::vector<Complex> sinks;
    for (const Cycle& cycle : found.cycles)
      if (cycle.kind == CycleClass::attracting || cycle.kind == CycleClass::superattracting ||
          cycle.kind == CycleClass::parabolic_suspected)
        sinks.insert(sinks.end(), cycle.points.begin(), cycle.points.end());
    Complex z = map.c();
    int close = 0;
    for (int j = 0; j < o.horizon && close < kBasinSteps; ++j) {
      auto w = map.evaluate(z);
      if (!w) break;
      z = *w;
      bool near = std::any_of(sinks.begin(), sinks.end(),
                              [&](Complex p) { return std::abs(z - p) < kBasinDistance; });
      close = near ? close + 1 : 0;
    }
    report.escape = singular_escape_status(map, o.horizon);
    report.singular_escapes_along_periodic_ray =
        report.escape.kind == SingularEscapeKind::escapes_along_periodic_ray;
    if (close >= kBasinSteps) {
      report.singular = SingularCase::in_basin;
    } else if (report.singular_escapes_along_periodic_ray) {
      report.singular = SingularCase::escaping_along_periodic_ray;
      report.singular_address = report.escape.address;
    } else if (report.escape.kind == SingularEscapeKind::escapes_other) {
      report.singular = SingularCase::escaping_other;
    } else {
      for (const Cycle& cycle : report.cycles) {
        if (cycle.kind != CycleClass::indifferent && cycle.kind != CycleClass::parabolic_suspected)
          continue;
        RayGraphOptions graph_options;
        graph_options.region_box = o.box;
        graph_options.probe_grid = 0;
        graph_options.threads = o.threads;
        RayGraph graph = build_ray_graph(map, cycle.period, o.window, o.depth, graph_options);
        if (singular_orbit_follows(map, cycle, graph, o.horizon)) {
          report.singular = SingularCase::trapped_case_1;
          break;
        }
      }
    }
    report.q_effective = report.singular == SingularCase::in_basin ? 0 : report.q;
  }

  // (4) landing search; the window always covers periods up to P.
  LandingOptions landing;
  landing.tol = o.landing_tol;
  landing.max_iter = o.landing_max_iter;
  int max_cap = o.max_period;
  for (const Cycle& cycle : report.cycles)
    if (cycle.kind == CycleClass::repelling) max_cap = std::max(max_cap, o.max_period * cycle.period);
  LandingCache cache;
  fill_cache(map, window_addresses(o.window, max_cap), landing, o.threads, cache);
  for (const auto& [s, r] : cache)
    if (period_of(s) <= static_cast<std::size_t>(o.max_period) && r.status != LandingStatus::landed)
      report.unlanded.push_back({s, r.status});
  for (std::size_t i = 0; i < report.cycles.size(); ++i) {
    const Cycle& cycle = report.cycles[i];
    if (cycle.kind != CycleClass::repelling) continue;
    const int cap = o.max_period * cycle.period;
    LandingSearchResult match = match_cycle(cycle, window_addresses(o.window, cap), cache, o.match_tol);
    for (const auto& u : match.unlanded)
      if (period_of(u.address) > static_cast<std::size_t>(o.max_period)) report.unlanded.push_back(u);
    LandingRecord record{i, cap, std::move(match.addresses), match.equal_period, false};
    record.invisible_candidate = record.addresses.empty();
    if (!record.equal_period)
      report.warnings.push_back("numerics red flag: addresses of different periods land on cycle " +
                                std::to_string(i));
    if (record.invisible_candidate) ++report.n_invisible_candidates;
    report.landings.push_back(std::move(record));
  }
  std::sort(report.unlanded.begin(), report.unlanded.end(),
            [](const UnlandedAddress& a, const UnlandedAddress& b) { return a.address < b.address; });
  report.unlanded.erase(std::unique(report.unlanded.begin(), report.unlanded.end(),
                                    [](const UnlandedAddress& a, const UnlandedAddress& b) {
                                      return a.address == b.address;
                                    }),
                        report.unlanded.end());
  report.all_window_rays_landed = report.unlanded.empty();

  // (5) verdict.
  if (!report.all_window_rays_landed || report.singular_escapes_along_periodic_ray) {
    report.verdict = Verdict::not_applicable;
  } else if (report.n_indifferent + report.n_invisible_candidates <= report.q_effective) {
    report.verdict = Verdict::satisfied;
  } else {
    report.verdict = Verdict::violated;
    std::ostringstream cmd;
    cmd.precision(17);
    cmd << "raycensus audit --c " << map.c().real() << ',' << map.c().imag() << " --radius " << map.radius() << " --box "
        << o.box.x0 << ',' << o.box.x1 << ',' << o.box.y0 << ',' << o.box.y1
        << " --max-period " << o.max_period << " --window " << o.window << " --depth " << o.depth
        << " --horizon " << o.horizon << " --grid " << o.grid << " --tol " << o.tol;
    report.reproducer = cmd.str();
  }

  // (6) trichotomy evidence for invisible candidates.
  for (const LandingRecord& record : report.landings) {
    if (!record.invisible_candidate) continue;
    const Cycle& cycle = report.cycles[record.cycle_index];
    TrichotomyEvidence evidence{record.cycle_index, "undetermined", {}, {}};
    try {
      RayGraphOptions graph_options;
      graph_options.region_box = o.box;
      graph_options.probe_grid = 0;
      graph_options.threads = o.threads;
      RayGraph graph = build_ray_graph(map, cycle.period, o.window, o.depth, graph_options);
      TailSetup setup = prepare_tail_setup(cycle, graph);
      evidence.choice = choose_radius(map, cycle, setup, o.horizon);
      if (evidence.choice.verdict == RadiusChoice::Verdict::unbounded) {
        evidence.supported_case = "unbounded-while-following";
        evidence.note = "singular orbit escapes while following the cycle regions";
      } else if (evidence.choice.followed_to_horizon) {
        evidence.supported_case = "case-1-trapped";
        evidence.note = "singular orbit followed the cycle regions for the whole horizon";
      } else {
        evidence.supported_case = "case-3-tails-defined";
        evidence.note = "finite radius: landing rays likely lie outside the search window";
      }
    } catch (const Error& e) {
      evidence.note = e.what();
    }
    report.evidence.push_back(std::move(evidence));
  }
  return report;
}

}  // namespace raycensus
