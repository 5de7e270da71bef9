#include "rays.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace raycensus {

namespace {

Complex seed_point(double t, DomainLabel label) {
  return {t, kTwoPi * static_cast<double>(label.k)};
}

void require_increasing(std::vector<double>& t_grid) {
  if (t_grid.empty()) fail(ErrorCode::invalid_argument, "empty potential grid");
  std::sort(t_grid.begin(), t_grid.end());
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      fail(ErrorCode::invalid_argument, "potential grid has repeated entries");
}

// L_{s_first}∘…∘L_{s_{last-1}}(w); throws on a singular hit.
Complex compose_branches(const MapModel& map, const InfiniteAddress& s,
                         std::size_t first, std::size_t last, Complex w) {
  for (std::size_t j = last; j-- > first;) {
    BranchValue b = map.branch(w, s.entry(j));
    if (b.status == BranchStatus::singular_hit)
      fail(ErrorCode::singular_hit, "ray pullback hit the singular value");
    w = b.z;
  }
  return w;
}

}  // namespace

double ray_t_min(const MapModel& map) noexcept { return map.radius(); }

Complex ray_point_literal(const MapModel& map, const InfiniteAddress& s,
                          double t, int depth) {
  if (depth < 0) fail(ErrorCode::invalid_argument, "negative depth");
  auto n = static_cast<std::size_t>(depth);
  return compose_branches(map, s, 0, n, seed_point(t, s.entry(n)));
}

Ray trace_ray(const MapModel& map, const InfiniteAddress& s, int depth,
              std::vector<double> t_grid, double tol) {
  require_increasing(t_grid);
  if (!(t_grid.front() > ray_t_min(map)))
    fail(ErrorCode::invalid_argument, "potential below the admissible seed height");
  Ray ray{s, {}, depth, {}, true};
  ray.samples.reserve(t_grid.size());
  for (double t : t_grid) {
    Complex z = ray_point_literal(map, s, t, depth);
    double delta = 0;
    if (depth > 0) delta = std::abs(z - ray_point_literal(map, s, t, depth - 1));
    if (delta > tol) ray.converged = false;
    ray.samples.push_back({t, z});
    ray.depth_delta.push_back(delta);
  }
  return ray;
}

double model_potential_step(double t) noexcept { return std::expm1(t); }

std::optional<int> potential_depth(const MapModel& map, double t,
                                   int max_depth) noexcept {
  const double t0 = map.seed_potential();
  int k = 0;
  while (t < t0) {
    if (k >= max_depth) return std::nullopt;
    t = model_potential_step(t);
    ++k;
  }
  return k;
}

Complex ray_point(const MapModel& map, const InfiniteAddress& s, double t,
                  int max_depth) {
  if (!(t > 0)) fail(ErrorCode::invalid_argument, "potential must be positive");
  auto k = potential_depth(map, t, max_depth);
  if (!k) fail(ErrorCode::numeric, "ray potential needs more than the depth cap");
  double height = t;
  for (int i = 0; i < *k; ++i) height = model_potential_step(height);
  auto n = static_cast<std::size_t>(*k);
  return compose_branches(map, s, 0, n, seed_point(height, s.entry(n)));
}

Ray trace_ray_by_potential(const MapModel& map, const InfiniteAddress& s,
                           std::vector<double> t_grid, int max_depth) {
  require_increasing(t_grid);
  Ray ray{s, {}, 0, {}, true};
  ray.samples.reserve(t_grid.size());
  for (double t : t_grid) {
    ray.samples.push_back({t, ray_point(map, s, t, max_depth)});
    ray.depth = std::max(ray.depth, *potential_depth(map, t, max_depth));
    ray.depth_delta.push_back(0.0);
  }
  return ray;
}

std::optional<Complex> pull_back(const MapModel& map,
                                 const std::vector<DomainLabel>& labels,
                                 Complex z, bool* on_cut) noexcept {
  bool cut = false;
  for (std::size_t j = labels.size(); j-- > 0;) {
    BranchValue b = map.branch(z, labels[j]);
    if (b.status == BranchStatus::singular_hit) return std::nullopt;
    cut = cut || b.status == BranchStatus::on_cut;
    z = b.z;
  }
  if (on_cut) *on_cut = cut;
  return z;
}

PullbackResult pullback_along_address(const MapModel& map,
                                      const InfiniteAddress& s, Complex zeta,
                                      int steps, int m) {
  if (steps < 0 || m < 1)
    fail(ErrorCode::invalid_argument, "pullback needs n >= 0 and m >= 1");
  if (!(std::abs(zeta) > map.radius()) || map.on_cut(zeta))
    fail(ErrorCode::precondition, "pullback seed must lie outside D and off the cut");
  const std::size_t length = static_cast<std::size_t>(steps) * static_cast<std::size_t>(m);
  // chain[j] = L_{s_j}∘…∘L_{s_{length-1}}(ζ); chain[length] = ζ.
  std::vector<Complex> chain(length + 1);
  chain[length] = zeta;
  PullbackResult result{};
  for (std::size_t j = length; j-- > 0;) {
    BranchValue b = map.branch(chain[j + 1], s.entry(j));
    if (b.status == BranchStatus::singular_hit)
      fail(ErrorCode::singular_hit, "pullback hit the singular value");
    result.on_cut = result.on_cut || b.status == BranchStatus::on_cut;
    chain[j] = b.z;
  }
  result.z = chain[0];
  for (std::size_t j = 0; j < length; ++j) {
    auto w = map.evaluate(chain[j]);
    double scale = std::max(1.0, std::abs(chain[j + 1]));
    double residual = w ? std::abs(*w - chain[j + 1]) / scale
                        : std::numeric_limits<double>::infinity();
    result.chain_residual = std::max(result.chain_residual, residual);
  }
  Complex w = result.z;
  for (std::size_t j = 0; j < length; ++j) {
    auto next = map.evaluate(w);
    if (!next) {
      w = Complex(std::numeric_limits<double>::infinity(), 0);
      break;
    }
    w = *next;
  }
  result.direct_residual = std::abs(w - zeta) / std::max(1.0, std::abs(zeta));
  if (!std::isfinite(result.direct_residual))
    result.direct_residual = std::numeric_limits<double>::infinity();
  if (!(result.chain_residual <= 1e-8))
    fail(ErrorCode::numeric, "pullback round trip failed after re-expansion");
  return result;
}

std::string to_string(LandingStatus status) {
  switch (status) {
    case LandingStatus::landed: return "landed";
    case LandingStatus::not_converged: return "not-converged";
    case LandingStatus::escaped_pullback: return "escaped-pullback";
    case LandingStatus::singular_hit: return "singular-hit";
  }
  return "unknown";
}

std::optional<OrbitJet> iterate_jet(const MapModel& map, Complex z, int n) noexcept {
  Complex derivative(1.0, 0.0);
  for (int i = 0; i < n; ++i) {
    auto e = map.derivative(z);
    if (!e) return std::nullopt;
    derivative *= *e;
    z = *e + map.c();
  }
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
  return OrbitJet{z, derivative};
}

std::optional<Complex> newton_periodic(const MapModel& map, Complex z, int p,
                                       double tol, int max_iter) noexcept {
  constexpr double kMaxStep = 2.0;
  for (int it = 0; it < max_iter; ++it) {
    auto jet = iterate_jet(map, z, p);
    if (!jet) return std::nullopt;
    Complex denom = jet->derivative - 1.0;
    if (denom == Complex(0.0, 0.0)) return std::nullopt;
    Complex step = (jet->value - z) / denom;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return std::nullopt;
    double size = std::abs(step);
    if (size > kMaxStep) step *= kMaxStep / size;
    z -= step;
    if (size <= tol * std::max(1.0, std::abs(z))) return z;
  }
  return std::nullopt;
}

LandingResult landing_point(const MapModel& map, const InfiniteAddress& s,
                            const LandingOptions& options) {
  const std::size_t p = period_of(s);
  if (p == 0)
    fail(ErrorCode::precondition, "landing_point needs a purely periodic address");
  const std::vector<DomainLabel>& word = s.period();
  LandingResult result;
  Complex zeta = options.seed.value_or(seed_point(map.seed_potential(), s.entry(0)));
  for (int it = 1; it <= options.max_iter; ++it) {
    bool cut = false;
    auto next = pull_back(map, word, zeta, &cut);
    result.iterations = it;
    if (!next) {
      result.status = LandingStatus::singular_hit;
      return result;
    }
    if (cut || !std::isfinite(next->real()) || !std::isfinite(next->imag())) {
      result.status = LandingStatus::escaped_pullback;
      result.point = *next;
      return result;
    }
    double move = std::abs(*next - zeta);
    zeta = *next;
    if (move >= options.tol) continue;

    Complex z0 = zeta;
    if (auto polished = newton_periodic(map, zeta, static_cast<int>(p));
        polished && std::abs(*polished - zeta) < 1e-6)
      z0 = *polished;
    auto image = pull_back(map, word, z0);
    auto jet = iterate_jet(map, z0, static_cast<int>(p));
    if (!image || !jet || !(std::abs(*image - z0) < options.tol)) continue;
    result.status = LandingStatus::landed;
    result.point = z0;
    result.psi_derivative = 1.0 / jet->derivative;
    return result;
  }
  result.point = zeta;
  return result;
}

std::string to_string(SingularEscapeKind kind) {
  switch (kind) {
    case SingularEscapeKind::escapes_along_periodic_ray: return "escapes-along-periodic-ray";
    case SingularEscapeKind::escapes_other: return "escapes-other";
    case SingularEscapeKind::bounded_so_far: return "bounded-so-far";
    case SingularEscapeKind::enters_d_repeatedly: return "enters-D-repeatedly";
  }
  return "unknown";
}

SingularEscape singular_escape_status(const MapModel& map, int horizon) {
  if (horizon < 1) fail(ErrorCode::invalid_argument, "horizon must be positive");
  SingularEscape out;
  out.horizon = horizon;
  out.orbit.push_back(map.c());
  bool escaped = false;
  Complex z = map.c();
  for (int step = 1; step <= horizon; ++step) {
    auto w = map.evaluate(z);
    out.steps = step;
    if (!w || !std::isfinite(std::abs(*w))) {
      escaped = true;
      break;
    }
    out.orbit.push_back(*w);
    z = *w;
    if (std::abs(z) > MapModel::kEscapeRadius) {
      escaped = true;
      break;
    }
  }

  const double R = map.radius();
  if (escaped) {
    // Tail: the longest suffix outside D with strictly increasing moduli.
    std::size_t begin = out.orbit.size();
    while (begin > 0) {
      Complex v = out.orbit[begin - 1];
      if (!(std::abs(v) > R)) break;
      if (begin < out.orbit.size() && !(std::abs(v) < std::abs(out.orbit[begin]))) break;
      --begin;
    }
    std::vector<DomainLabel> labels;
    for (std::size_t i = begin; i < out.orbit.size(); ++i)
      labels.push_back(strip_label(out.orbit[i]));
    out.kind = SingularEscapeKind::escapes_other;
    for (std::size_t q = 1; 2 * q <= labels.size(); ++q) {
      bool periodic = true;
      for (std::size_t i = q; i < labels.size() && periodic; ++i)
        periodic = labels[i] == labels[i - q];
      if (periodic) {
        out.kind = SingularEscapeKind::escapes_along_periodic_ray;
        out.address = InfiniteAddress::periodic(
            std::vector<DomainLabel>(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(q)));
        break;
      }
    }
    return out;
  }

  double far = 0;
  int reentries = 0;
  for (std::size_t i = 1; i < out.orbit.size(); ++i) {
    double a = std::abs(out.orbit[i - 1]);
    double b = std::abs(out.orbit[i]);
    far = std::max(far, b);
    if (a >= R && b < R) ++reentries;
  }
  out.kind = (far > 100.0 * R && reentries >= 2) ? SingularEscapeKind::enters_d_repeatedly
                                                  : SingularEscapeKind::bounded_so_far;
  return out;
}

}  // namespace raycensus
