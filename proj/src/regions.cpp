#include "regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <variant>

#include "error.hpp"
#include "parallel.hpp"

namespace raycensus {

namespace {

constexpr double kArcClosure = 1e-6;
constexpr double kArcRatio = 0.98;
constexpr double kRepresentativeClearance = 1e-2;
constexpr int kMaxCurves = 64;

double point_segment_distance(Complex z, Complex a, Complex b) {
  Complex d = b - a;
  double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(z - a);
  double u = ((z - a) * std::conj(d)).real() / len2;
  u = std::clamp(u, 0.0, 1.0);
  return std::abs(z - (a + u * d));
}

double cross(Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); }

bool segments_intersect(Complex a, Complex b, Complex c, Complex d) {
  double d1 = cross(b - a, c - a);
  double d2 = cross(b - a, d - a);
  double d3 = cross(d - c, a - c);
  double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 &&
         d3 != 0 && d4 != 0;
}

double segment_distance(Complex a, Complex b, Complex c, Complex d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

}  // namespace

RayGraph RayGraph::from_arcs(int p, int window, double truncation, std::vector<Arc> arcs,
                             const RayGraphOptions& options) {
  if (p < 1) fail(ErrorCode::invalid_argument, "ray graph period must be >= 1");
  if (!options.region_box.valid()) fail(ErrorCode::invalid_argument, "region box is empty");
  if (options.probe_grid < 0) fail(ErrorCode::invalid_argument, "probe grid must be >= 0");
  RayGraph g;
  g.p_ = p;
  g.window_ = window;
  g.truncation_ = truncation;
  g.options_ = options;
  g.arcs_ = std::move(arcs);
  for (const Arc& arc : g.arcs_)
    if (arc.polyline.size() < 2) fail(ErrorCode::invalid_argument, "arc needs two vertices");
  g.build();
  return g;
}

template <class Fn>
void RayGraph::for_segments(double ylo, double yhi, Fn&& fn) const {
  if (slabs_.empty()) return;
  auto bin = [&](double y) {
    double b = std::floor((y - slab_y0_) / slab_h_);
    return static_cast<long>(std::clamp(b, -1.0, static_cast<double>(slabs_.size())));
  };
  long lo = std::max(bin(ylo), 0L);
  long hi = std::min(bin(yhi), static_cast<long>(slabs_.size()) - 1);
  for (long b = lo; b <= hi; ++b)
    for (std::uint32_t s : slabs_[static_cast<std::size_t>(b)]) fn(segments_[s]);
}

namespace {

bool vertically_below(const InfiniteAddress& a, const InfiniteAddress& b) {
  std::size_t span = std::max(a.preperiod().size(), b.preperiod().size()) +
                     a.period().size() * b.period().size();
  for (std::size_t i = 0; i < span; ++i) {
    auto x = a.entry(i).k, y = b.entry(i).k;
    if (x != y) return x < y;
  }
  return false;
}

}  // namespace

void RayGraph::build() {
  const int n = static_cast<int>(arcs_.size());
  // Stars: arcs grouped by landing point.
  std::vector<int> group(n, -1);
  int groups = 0;
  for (int i = 0; i < n; ++i) {
    if (group[i] >= 0) continue;
    group[i] = groups;
    for (int j = i + 1; j < n; ++j)
      if (group[j] < 0 && std::abs(arcs_[i].landing - arcs_[j].landing) < kLandingMerge)
        group[j] = groups;
    ++groups;
  }
  curves_.clear();
  arc_curves_.assign(arcs_.size(), {});
  for (int gi = 0; gi < groups; ++gi) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (group[i] == gi) members.push_back(i);
    // Far to the right the vertical order of rays is the lexicographic order
    // of their addresses; the sampled extensions may tie in double precision.
    std::sort(members.begin(), members.end(), [&](int a, int b) {
      return vertically_below(arcs_[a].address, arcs_[b].address);
    });
    for (std::size_t k = 1; k < members.size(); ++k) {
      int bit = static_cast<int>(curves_.size());
      if (bit >= kMaxCurves)
        fail(ErrorCode::precondition, "ray graph has more than 64 separating curves");
      curves_.emplace_back(members[k - 1], members[k]);
      arc_curves_[members[k - 1]].push_back(bit);
      arc_curves_[members[k]].push_back(bit);
    }
  }

  segments_.clear();
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -ymin;
  for (int i = 0; i < n; ++i) {
    const auto& poly = arcs_[i].polyline;
    for (std::size_t k = 1; k < poly.size(); ++k) {
      if (poly[k] == poly[k - 1]) continue;
      segments_.push_back({poly[k - 1], poly[k], i});
    }
    for (Complex v : poly) {
      ymin = std::min(ymin, v.imag());
      ymax = std::max(ymax, v.imag());
    }
  }
  slabs_.clear();
  if (!segments_.empty()) {
    std::size_t bins = std::clamp<std::size_t>(segments_.size() / 4, 1, 4096);
    slab_y0_ = ymin;
    slab_h_ = std::max((ymax - ymin) / static_cast<double>(bins), 1e-12);
    slabs_.assign(bins, {});
    for (std::size_t s = 0; s < segments_.size(); ++s) {
      double lo = std::min(segments_[s].a.imag(), segments_[s].b.imag());
      double hi = std::max(segments_[s].a.imag(), segments_[s].b.imag());
      auto b0 = static_cast<std::size_t>(std::clamp(std::floor((lo - slab_y0_) / slab_h_), 0.0,
                                                    static_cast<double>(bins - 1)));
      auto b1 = static_cast<std::size_t>(std::clamp(std::floor((hi - slab_y0_) / slab_h_), 0.0,
                                                    static_cast<double>(bins - 1)));
      for (std::size_t b = b0; b <= b1; ++b) slabs_[b].push_back(static_cast<std::uint32_t>(s));
    }
  }

  // Sampled separation between distinct arcs, searched within a unit window.
  min_separation_ = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const auto& poly = arcs_[i].polyline;
    for (std::size_t k = 1; k < poly.size(); ++k) {
      Complex v = poly[k];
      if (v.real() > kResolvedRe) continue;
      double best = std::min(min_separation_, 1.0);
      for_segments(v.imag() - best, v.imag() + best, [&](const Segment& s) {
        if (s.arc == i || std::min(s.a.real(), s.b.real()) > kResolvedRe) return;
        best = std::min(best, point_segment_distance(v, s.a, s.b));
      });
      min_separation_ = std::min(min_separation_, best);
    }
  }
  if (n < 2) min_separation_ = std::numeric_limits<double>::infinity();
  if (!(min_separation_ > 0)) diagnostics_.push_back("arcs intersect: Γ is not a disjoint union");

  // Region table from a probe grid over the region box.
  regions_.clear();
  const Box& box = options_.region_box;
  const int g = options_.probe_grid;
  if (g > 0 && box.valid()) {
    std::vector<std::optional<RegionId>> ids(static_cast<std::size_t>(g) * g);
    auto probe = [&](std::size_t idx) {
      auto i = static_cast<int>(idx / g);
      auto j = static_cast<int>(idx % g);
      return Complex(box.x0 + (box.x1 - box.x0) * (i + 0.5) / g,
                     box.y0 + (box.y1 - box.y0) * (j + 0.5) / g);
    };
    parallel_for(ids.size(), options_.threads, [&](std::size_t idx) {
      Complex z = probe(idx);
      if (near(z, kRepresentativeClearance)) return;
      ids[idx] = region_of(z);
    });
    for (std::size_t idx = 0; idx < ids.size(); ++idx) {
      if (!ids[idx]) continue;
      bool known = std::any_of(regions_.begin(), regions_.end(),
                               [&](const RegionRecord& r) { return r.id == *ids[idx]; });
      if (!known) regions_.push_back({*ids[idx], probe(idx)});
    }
    std::sort(regions_.begin(), regions_.end(),
              [](const RegionRecord& a, const RegionRecord& b) { return a.id < b.id; });
  }
}

bool RayGraph::near(Complex z, double eps) const {
  for (const Arc& arc : arcs_) {
    Complex e = arc.polyline.back();
    double d = z.real() >= e.real() ? std::abs(z.imag() - e.imag()) : std::abs(z - e);
    if (d < eps) return true;
  }
  bool hit = false;
  for_segments(z.imag() - eps, z.imag() + eps, [&](const Segment& s) {
    if (!hit && point_segment_distance(z, s.a, s.b) < eps) hit = true;
  });
  return hit;
}

bool RayGraph::crosses(Complex a, Complex b) const {
  double right = std::max(a.real(), b.real()) + 1.0;
  for (const Arc& arc : arcs_) {
    Complex e = arc.polyline.back();
    if (right <= e.real()) continue;
    if (segment_distance(a, b, e, Complex(right, e.imag())) < kSnap) return true;
  }
  bool hit = false;
  double lo = std::min(a.imag(), b.imag()) - kSnap;
  double hi = std::max(a.imag(), b.imag()) + kSnap;
  for_segments(lo, hi, [&](const Segment& s) {
    if (!hit && segment_distance(a, b, s.a, s.b) < kSnap) hit = true;
  });
  return hit;
}

RegionId RayGraph::region_of(Complex z) const {
  if (near(z, kSnap)) fail(ErrorCode::on_arc, "point lies on the ray graph");
  RegionId mask = 0;
  const double y = z.imag();
  for_segments(y, y, [&](const Segment& s) {
    const auto& bits = arc_curves_[static_cast<std::size_t>(s.arc)];
    if (bits.empty()) return;
    if ((s.a.imag() > y) == (s.b.imag() > y)) return;
    double x = s.a.real() + (y - s.a.imag()) * (s.b.real() - s.a.real()) / (s.b.imag() - s.a.imag());
    if (x >= z.real()) return;
    for (int bit : bits) mask ^= RegionId{1} << bit;
  });
  return mask;
}

RayGraph RayGraph::without_landing_at(const std::vector<Complex>& points) const {
  std::vector<Arc> kept;
  for (const Arc& arc : arcs_) {
    bool drop = std::any_of(points.begin(), points.end(), [&](Complex z) {
      return std::abs(arc.landing - z) < kLandingMerge;
    });
    if (!drop) kept.push_back(arc);
  }
  RayGraph g = from_arcs(p_, window_, truncation_, std::move(kept), options_);
  g.excluded_ = excluded_;
  g.diagnostics_.insert(g.diagnostics_.begin(), diagnostics_.begin(), diagnostics_.end());
  return g;
}

Arc trace_arc(const MapModel& map, const InfiniteAddress& s, Complex landing, int depth,
              double truncation) {
  std::vector<Complex> samples;
  for (double t = 1.01 * truncation + 1.0; t > 0; t *= kArcRatio) {
    if (!potential_depth(map, t, depth)) break;
    Complex z = ray_point(map, s, t, depth);
    samples.push_back(z);
    if (std::abs(z - landing) < kArcClosure) break;
  }
  if (samples.empty()) fail(ErrorCode::numeric, "ray produced no samples within the depth cap");
  Arc arc{s, {}, landing, std::abs(samples.back() - landing)};
  arc.polyline.reserve(samples.size() + 1);
  arc.polyline.push_back(landing);
  arc.polyline.insert(arc.polyline.end(), samples.rbegin(), samples.rend());
  return arc;
}

RayGraph build_ray_graph(const MapModel& map, int p, int window, int depth,
                         const RayGraphOptions& options) {
  if (p < 1) fail(ErrorCode::invalid_argument, "p must be >= 1");
  if (depth < 1) fail(ErrorCode::invalid_argument, "depth must be >= 1");
  if (!options.region_box.valid()) fail(ErrorCode::invalid_argument, "region box is empty");
  if (options.probe_grid < 0) fail(ErrorCode::invalid_argument, "probe grid must be >= 0");
  const double truncation = map.truncation_re();
  std::vector<InfiniteAddress> addresses = enumerate_periodic(window, p);
  using Slot = std::variant<std::monostate, Arc, ExcludedAddress, std::string>;
  std::vector<Slot> slots(addresses.size());
  parallel_for(addresses.size(), options.threads, [&](std::size_t i) {
    LandingResult landing = landing_point(map, addresses[i]);
    if (landing.status != LandingStatus::landed) {
      slots[i] = ExcludedAddress{addresses[i], landing.status};
      return;
    }
    try {
      slots[i] = trace_arc(map, addresses[i], landing.point, depth, truncation);
    } catch (const Error& e) {
      slots[i] = "arc " + addresses[i].to_string() + " dropped: " + e.what();
    }
  });
  std::vector<Arc> arcs;
  std::vector<ExcludedAddress> excluded;
  std::vector<std::string> notes;
  for (auto& slot : slots) {
    if (auto* a = std::get_if<Arc>(&slot)) arcs.push_back(std::move(*a));
    if (auto* e = std::get_if<ExcludedAddress>(&slot)) excluded.push_back(std::move(*e));
    if (auto* s = std::get_if<std::string>(&slot)) notes.push_back(std::move(*s));
  }
  for (const Arc& arc : arcs)
    if (arc.closure_gap >= kArcClosure)
      notes.push_back("arc " + arc.address.to_string() + " closure gap " +
                      std::to_string(arc.closure_gap) + " at depth cap");
  RayGraph graph = RayGraph::from_arcs(p, window, truncation, std::move(arcs), options);
  for (auto& e : excluded) {
    graph.add_diagnostic("address " + e.address.to_string() + " excluded: " + to_string(e.status));
    graph.add_excluded(std::move(e));
  }
  if (!graph.excluded().empty()) {
    SingularEscape esc = singular_escape_status(map, 1000);
    if (esc.kind == SingularEscapeKind::escapes_along_periodic_ray)
      graph.add_diagnostic("singular value escaping along periodic ray " +
                           esc.address->to_string());
  }
  for (auto& n : notes) graph.add_diagnostic(std::move(n));
  return graph;
}

RegionId basic_region_of(const RayGraph& graph, Complex z) { return graph.region_of(z); }

std::vector<ItineraryEntry> itinerary(const MapModel& map, const RayGraph& graph, Complex z,
                                      int n_steps) {
  std::vector<ItineraryEntry> out;
  bool escaped = false;
  for (int j = 0; j <= n_steps; ++j) {
    if (j > 0 && !escaped) {
      auto w = map.evaluate(z);
      if (!w || std::abs(*w) > MapModel::kEscapeRadius) escaped = true;
      else z = *w;
    }
    if (escaped) {
      out.push_back({ItineraryEntry::Kind::escaped, 0});
      continue;
    }
    try {
      out.push_back({ItineraryEntry::Kind::region, graph.region_of(z)});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::on_arc) throw;
      out.push_back({ItineraryEntry::Kind::on_arc, 0});
    }
  }
  return out;
}

FixedPointAudit interior_fixed_point_audit(const RayGraph& graph,
                                           const std::vector<Cycle>& cycles) {
  FixedPointAudit audit;
  for (const Cycle& cycle : cycles) {
    if (graph.p() % cycle.period != 0) continue;
    for (Complex z : cycle.points) {
      bool landing = std::any_of(graph.arcs().begin(), graph.arcs().end(), [&](const Arc& a) {
        return std::abs(a.landing - z) < RayGraph::kLandingMerge;
      });
      if (landing) {
        audit.landing_points.push_back(z);
        continue;
      }
      RegionId id;
      try {
        id = graph.region_of(z);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::on_arc) throw;
        audit.on_arc.push_back(z);
        continue;
      }
      audit.interior[id].push_back(z);
      if (cycle.kind == CycleClass::attracting || cycle.kind == CycleClass::superattracting)
        audit.attracting_regions.push_back(id);
    }
  }
  for (const auto& [id, points] : audit.interior)
    if (points.size() >= 2) audit.violations.push_back(id);
  return audit;
}

}  // namespace raycensus
