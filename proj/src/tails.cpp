#include "tails.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "rays.hpp"

namespace raycensus {

namespace {

constexpr double kRadiusMargin = 1.25;
constexpr double kProbeStep = 0.1;
constexpr double kPieceMargin = 1e-9;

// Condition (b): |f(z)| > bound and f(z) off δ_r. Overflow counts as far out.
bool maps_outside(const TailContext& ctx, Complex z, double bound) {
  auto w = ctx.map().evaluate(z);
  if (!w) return true;
  double modulus = std::abs(*w);
  if (!(modulus > bound)) return false;
  Complex d = *w - ctx.map().c();
  return !(d.real() < 0 && std::abs(d.imag()) <= RayGraph::kSnap);
}

std::optional<RegionId> region_or_none(const RayGraph& graph, Complex z) {
  try {
    return graph.region_of(z);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::on_arc) throw;
    return std::nullopt;
  }
}

bool tail1_with_bound(const TailContext& ctx, DomainLabel label, Complex z, double bound) {
  const MapModel& map = ctx.map();
  auto domain = map.exact_fundamental_domain_of(z);
  if (!domain || *domain != label) return false;
  if (!maps_outside(ctx, z, bound)) return false;
  if (ctx.graph().region_of(z) != ctx.region(0)) return false;
  // Rightward probe: |f| grows along horizontals, so it can stop once
  // e^x alone exceeds r + |c|.
  const double settle = std::log(ctx.radius() + std::abs(map.c()));
  for (double x = z.real() + kProbeStep; x < settle; x += kProbeStep)
    if (!maps_outside(ctx, Complex(x, z.imag()), ctx.radius())) return false;
  const double end = ctx.graph().truncation();
  if (z.real() < end && ctx.graph().crosses(z, Complex(end, z.imag()))) return false;
  return true;
}

double cloud_diameter(const std::vector<Complex>& points) {
  double d = 0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      d = std::max(d, std::abs(points[i] - points[j]));
  return d;
}

}  // namespace

std::string to_string(RadiusChoice::Verdict verdict) {
  return verdict == RadiusChoice::Verdict::finite ? "finite" : "unbounded";
}

TailSetup prepare_tail_setup(const Cycle& cycle, const RayGraph& graph) {
  if (cycle.kind != CycleClass::repelling)
    fail(ErrorCode::precondition, "tails need a repelling cycle");
  if (graph.p() % cycle.period != 0)
    fail(ErrorCode::precondition, "ray graph period must be a multiple of the cycle period");
  TailSetup setup{graph.without_landing_at(cycle.points), {}};
  for (Complex z : cycle.points) setup.regions.push_back(setup.graph.region_of(z));
  return setup;
}

RadiusChoice choose_radius(const MapModel& map, const Cycle& cycle, const TailSetup& setup,
                           int horizon) {
  if (horizon < 1) fail(ErrorCode::invalid_argument, "horizon must be positive");
  RadiusChoice choice;
  choice.horizon = horizon;
  double extent = map.radius();
  for (Complex z : cycle.points) extent = std::max(extent, std::abs(z));

  const auto m = static_cast<int>(setup.regions.size());
  Complex z = map.c();
  auto start = region_or_none(setup.graph, z);
  for (int i = 0; start && i < m; ++i)
    if (setup.regions[static_cast<std::size_t>(i)] == *start) {
      choice.start_index = i;
      break;
    }
  if (choice.start_index) {
    // 𝒫_B ∪ f(𝒫_B): the orbit while it follows the regions, plus one image.
    extent = std::max(extent, std::abs(z));
    choice.follow_steps = 0;
    for (int j = 1; j <= horizon; ++j) {
      auto w = map.evaluate(z);
      if (!w || !(std::abs(*w) <= MapModel::kEscapeRadius)) {
        choice.verdict = RadiusChoice::Verdict::unbounded;
        return choice;
      }
      z = *w;
      extent = std::max(extent, std::abs(z));
      auto region = region_or_none(setup.graph, z);
      auto expected = setup.regions[static_cast<std::size_t>((*choice.start_index + j) % m)];
      if (!region || *region != expected) break;
      choice.follow_steps = j;
    }
    choice.followed_to_horizon = choice.follow_steps == horizon;
  }
  choice.r = kRadiusMargin * extent;
  return choice;
}

TailContext TailContext::make(const MapModel& map, const Cycle& cycle, const RayGraph& graph,
                              int horizon, std::optional<double> radius) {
  TailSetup setup = prepare_tail_setup(cycle, graph);
  RadiusChoice choice = choose_radius(map, cycle, setup, horizon);
  double r = 0;
  if (radius) {
    r = *radius;
    bool contains = r >= map.radius();
    for (Complex z : cycle.points) contains = contains && r > std::abs(z);
    if (!contains) fail(ErrorCode::precondition, "radius must exceed R and every |z_i|");
  } else {
    if (choice.verdict == RadiusChoice::Verdict::unbounded)
      fail(ErrorCode::precondition, "singular orbit escapes while following the cycle regions");
    r = choice.r;
  }
  return TailContext(map, cycle, std::move(setup), r, horizon, choice);
}

bool tail1_membership(const TailContext& ctx, DomainLabel label, Complex z) {
  return tail1_with_bound(ctx, label, z, ctx.radius());
}

namespace {

void check_tail_length(const TailContext& ctx, const FiniteAddress& s) {
  const auto m = static_cast<std::size_t>(ctx.period());
  if (s.size() == 0 || (s.size() - 1) % m != 0)
    fail(ErrorCode::invalid_argument, "tail address length must be m(n-1)+1");
}

}  // namespace

bool orbit_membership(const TailContext& ctx, const FiniteAddress& s,
                      const std::vector<Complex>& orbit) {
  check_tail_length(ctx, s);
  if (orbit.size() != s.size()) fail(ErrorCode::invalid_argument, "orbit length must match the address");
  const std::size_t length = s.size();
  const auto m = static_cast<std::size_t>(ctx.period());
  for (std::size_t j = 0; j + 1 < length; ++j) {
    if (strip_label(orbit[j]) != s[j]) return false;
    if (ctx.graph().region_of(orbit[j]) != ctx.region(static_cast<int>(j % m))) return false;
  }
  return tail1_membership(ctx, s[length - 1], orbit[length - 1]);
}

bool tail_membership(const TailContext& ctx, const FiniteAddress& s, Complex z) {
  check_tail_length(ctx, s);
  std::vector<Complex> orbit{z};
  while (orbit.size() < s.size()) {
    auto w = ctx.map().evaluate(orbit.back());
    if (!w) return false;
    orbit.push_back(*w);
  }
  return orbit_membership(ctx, s, orbit);
}

std::optional<Complex> tail1_witness(const TailContext& ctx, DomainLabel label) {
  static constexpr double kOffsets[] = {0.5, -0.5, 1.5, -1.5, 2.5, -2.5, 3.0, -3.0, 0.0};
  const double x = std::max(ctx.map().seed_potential(),
                            std::log(ctx.radius() + std::abs(ctx.map().c())) + 1.0);
  for (double offset : kOffsets) {
    Complex z(x, kTwoPi * static_cast<double>(label.k) + offset);
    try {
      if (tail1_membership(ctx, label, z)) return z;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::on_arc) throw;
    }
  }
  return std::nullopt;
}

TailAddressRecord tail_exists(const TailContext& ctx, const InfiniteAddress& s, int n) {
  TailAddressRecord record;
  record.level = n;
  record.address = project(s, n, ctx.period());
  const std::size_t length = record.address.size();
  auto seed = tail1_witness(ctx, record.address[length - 1]);
  if (!seed) {
    record.reason = "no level-1 tail for label " + std::to_string(record.address[length - 1].k);
    return record;
  }
  // Membership is checked on the pullback chain itself: forward iterates of
  // a deep witness lose all accuracy at rate |λ|.
  std::vector<Complex> orbit(length);
  orbit[length - 1] = *seed;
  for (std::size_t j = length - 1; j-- > 0;) {
    auto z = pull_back(ctx.map(), {record.address[j]}, orbit[j + 1]);
    if (!z) {
      record.reason = "inverse branch hit the singular value";
      return record;
    }
    orbit[j] = *z;
  }
  record.witness = orbit[0];
  try {
    record.exists = orbit_membership(ctx, record.address, orbit);
    if (!record.exists) record.reason = "witness failed tail membership";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::on_arc) throw;
    record.indeterminate = true;
    record.reason = "witness on the ray graph";
  }
  return record;
}

PieceSample sample_piece(const TailContext& ctx, const InfiniteAddress& s, int n, int samples) {
  if (n < 0 || samples < 1) fail(ErrorCode::invalid_argument, "piece needs n >= 0, samples >= 1");
  const double r = ctx.radius();
  const auto steps = static_cast<std::size_t>(ctx.period()) * static_cast<std::size_t>(n);
  std::vector<DomainLabel> labels;
  for (std::size_t i = 0; i < steps; ++i) labels.push_back(s.entry(i));
  const DomainLabel label = s.entry(steps);
  const double y0 = kTwoPi * static_cast<double>(label.k) - kPi;

  PieceSample out;
  for (int i = 0; i < samples; ++i) {
    for (int j = 0; j < samples; ++j) {
      Complex v(-r + 2 * r * (i + 0.5) / samples, y0 + kTwoPi * (j + 0.5) / samples);
      ++out.grid_points;
      if (!(std::abs(v) < r * (1 - kPieceMargin))) continue;
      bool inside = false;
      try {
        inside = tail1_with_bound(ctx, label, v, r * (1 + kPieceMargin));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::on_arc) throw;
        ++out.on_arc;
      }
      if (!inside) continue;
      if (auto z = pull_back(ctx.map(), labels, v)) out.points.push_back(*z);
    }
  }
  return out;
}

PieceEstimate piece_diameter(const TailContext& ctx, const InfiniteAddress& s, int n,
                             int samples) {
  PieceSample sample = sample_piece(ctx, s, n, samples);
  PieceEstimate estimate;
  estimate.sample_count = sample.points.size();
  estimate.empty = sample.points.empty();
  estimate.diameter = cloud_diameter(sample.points);
  return estimate;
}

PieceMappingReport piece_mapping_check(const TailContext& ctx, const InfiniteAddress& s, int j,
                                       int samples) {
  if (j < 2) fail(ErrorCode::precondition, "piece mapping check needs j >= 2");
  const int m = ctx.period();
  PieceSample piece = sample_piece(ctx, s, j, samples);
  const InfiniteAddress image_address = shift(s, static_cast<std::size_t>(m));
  const FiniteAddress upper = project(image_address, j, m);
  const FiniteAddress lower = project(image_address, j - 1, m);
  PieceMappingReport report;
  report.excluded = piece.on_arc;
  for (Complex x : piece.points) {
    auto jet = iterate_jet(ctx.map(), x, m);
    if (!jet) {
      ++report.excluded;
      continue;
    }
    try {
      bool ok = tail_membership(ctx, upper, jet->value) &&
                !tail_membership(ctx, lower, jet->value);
      ++report.checked;
      if (!ok) ++report.failures;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::on_arc) throw;
      ++report.excluded;
    }
  }
  report.passed = report.checked > 0 && report.failures == 0;
  return report;
}

}  // namespace raycensus
