#include "cycles.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "error.hpp"
#include "parallel.hpp"
#include "rays.hpp"

namespace raycensus {

namespace {

constexpr double kSeedExclusion = 1e-3;
constexpr int kParabolicOrder = 64;

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

double dedup_radius(double tol) { return std::max(10.0 * tol, 1e-9); }

// Smallest divisor d of p with f^d(z) = z; p itself when none.
int minimal_period(const MapModel& map, Complex z, int p) {
  for (int d = 1; d < p; ++d) {
    if (p % d != 0) continue;
    auto jet = iterate_jet(map, z, d);
    if (jet && std::abs(jet->value - z) < 1e-8 * std::max(1.0, std::abs(z))) return d;
  }
  return p;
}

std::vector<Cycle> search(const MapModel& map, const CycleSearchOptions& o, int grid) {
  const int n = grid + 1;
  std::vector<Complex> seeds;
  seeds.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      seeds.emplace_back(o.box.x0 + (o.box.x1 - o.box.x0) * i / grid,
                         o.box.y0 + (o.box.y1 - o.box.y0) * j / grid);

  const double radius = dedup_radius(o.tol);
  std::vector<Cycle> cycles;
  std::vector<Complex> known;  // every point of every cycle found so far
  for (int p = 1; p <= o.max_period; ++p) {
    std::vector<std::optional<Complex>> roots(seeds.size());
    parallel_for(seeds.size(), o.threads, [&](std::size_t i) {
      for (Complex k : known)
        if (std::abs(seeds[i] - k) < kSeedExclusion) return;
      auto root = newton_periodic(map, seeds[i], p, o.tol);
      if (root && o.box.contains(*root)) roots[i] = root;
    });
    for (const auto& root : roots) {
      if (!root) continue;
      bool seen = false;
      for (Complex k : known)
        if (std::abs(*root - k) < radius) {
          seen = true;
          break;
        }
      if (seen || minimal_period(map, *root, p) != p) continue;
      Cycle cycle = make_cycle(map, *root, p, o.tol, o.tol_band);
      cycle.in_box = std::all_of(cycle.points.begin(), cycle.points.end(),
                                 [&](Complex z) { return o.box.contains(z); });
      known.insert(known.end(), cycle.points.begin(), cycle.points.end());
      cycles.push_back(std::move(cycle));
    }
  }
  std::sort(cycles.begin(), cycles.end(), [](const Cycle& a, const Cycle& b) {
    if (a.period != b.period) return a.period < b.period;
    return lex_less(a.points[0], b.points[0]);
  });
  return cycles;
}

}  // namespace

std::string to_string(CycleClass kind) {
  switch (kind) {
    case CycleClass::attracting: return "attracting";
    case CycleClass::superattracting: return "superattracting";
    case CycleClass::repelling: return "repelling";
    case CycleClass::indifferent: return "indifferent";
    case CycleClass::parabolic_suspected: return "parabolic-suspected";
  }
  return "unknown";
}

Classification classify(Complex multiplier, double tol_band) {
  const double modulus = std::abs(multiplier);
  const double rotation = std::arg(multiplier) / kTwoPi;
  if (modulus == 0.0) return {CycleClass::superattracting, 0.0};
  if (modulus < 1.0 - tol_band) return {CycleClass::attracting, rotation};
  if (modulus > 1.0 + tol_band) return {CycleClass::repelling, rotation};
  Complex power(1.0, 0.0);
  for (int k = 1; k <= kParabolicOrder; ++k) {
    power *= multiplier;
    if (std::abs(power - 1.0) < tol_band) return {CycleClass::parabolic_suspected, rotation};
  }
  return {CycleClass::indifferent, rotation};
}

Cycle make_cycle(const MapModel& map, Complex z, int period, double tol, double tol_band) {
  if (period < 1) fail(ErrorCode::invalid_argument, "cycle period must be positive");
  Cycle cycle;
  cycle.period = period;
  cycle.points.push_back(z);
  for (int i = 1; i < period; ++i) {
    auto next = map.evaluate(cycle.points.back());
    if (!next) fail(ErrorCode::numeric, "cycle orbit overflowed");
    Complex point = *next;
    if (auto polished = newton_periodic(map, point, period, tol);
        polished && std::abs(*polished - point) < 1e-6)
      point = *polished;
    cycle.points.push_back(point);
  }
  auto least = std::min_element(cycle.points.begin(), cycle.points.end(), lex_less);
  std::rotate(cycle.points.begin(), least, cycle.points.end());
  cycle.multiplier = Complex(1.0, 0.0);
  for (Complex p : cycle.points) cycle.multiplier *= *map.derivative(p);
  Classification c = classify(cycle.multiplier, tol_band);
  cycle.kind = c.kind;
  cycle.rotation_number = c.rotation_number;
  return cycle;
}

CycleSearchResult find_cycles(const MapModel& map, const CycleSearchOptions& options) {
  if (options.max_period < 1) fail(ErrorCode::invalid_argument, "max_period must be >= 1");
  if (!options.box.valid()) fail(ErrorCode::invalid_argument, "search box is empty");
  if (options.grid < 1) fail(ErrorCode::invalid_argument, "grid must be >= 1");
  CycleSearchResult result;
  result.cycles = search(map, options, options.grid);
  if (options.coverage_check && options.grid >= 2) {
    std::size_t coarse = search(map, options, options.grid / 2).size();
    if (coarse > result.cycles.size())
      result.warnings.push_back("coverage: grid " + std::to_string(options.grid) + " found " +
                                std::to_string(result.cycles.size()) + " cycles, grid " +
                                std::to_string(options.grid / 2) + " found " +
                                std::to_string(coarse));
  }
  return result;
}

}  // namespace raycensus
