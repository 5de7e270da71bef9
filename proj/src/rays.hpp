#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "address.hpp"
#include "map_model.hpp"

namespace raycensus {

struct RaySample {
  double t;
  Complex z;
};

struct Ray {
  InfiniteAddress address;
  std::vector<RaySample> samples;  // strictly increasing in t
  int depth = 0;                   // largest composition length used
  // |z(N) - z(N-1)| per sample for the literal tracer; 0 for potential mode.
  std::vector<double> depth_delta;
  bool converged = true;
};

// Smallest admissible seed height for trace_ray: seeds t + 2πik with t > R
// lie outside D and off the cut.
double ray_t_min(const MapModel& map) noexcept;

// z = L_{s0}∘…∘L_{s_{N-1}}(t + 2πi s_N). Throws Error(singular_hit).
Complex ray_point_literal(const MapModel& map, const InfiniteAddress& s,
                          double t, int depth);

// Literal seed-height tracer. `tol` bounds the last depth-to-depth movement;
// exceeding it clears `converged`.
Ray trace_ray(const MapModel& map, const InfiniteAddress& s, int depth,
              std::vector<double> t_grid, double tol = 1e-6);

// Model potential of the exponential family: f(G_s(t)) = G_{σs}(F(t)) with
// F(t) = e^t - 1.
double model_potential_step(double t) noexcept;

// Number of F-steps taken from t before reaching the seed height, capped at
// max_depth; nullopt if the cap is reached first.
std::optional<int> potential_depth(const MapModel& map, double t,
                                   int max_depth) noexcept;

// G_s(t) = L_{s0}∘…∘L_{s_{k-1}}(F^k(t) + 2πi s_k) with the smallest k such
// that F^k(t) >= t0. Throws Error(singular_hit) or Error(numeric) when the
// depth cap is exceeded.
Complex ray_point(const MapModel& map, const InfiniteAddress& s, double t,
                  int max_depth = 4000);

Ray trace_ray_by_potential(const MapModel& map, const InfiniteAddress& s,
                           std::vector<double> t_grid, int max_depth = 4000);

// Applies L_{labels[0]}∘…∘L_{labels[n-1]} to z. Returns nullopt on a
// singular hit; *on_cut is set if any step sat on the cut.
std::optional<Complex> pull_back(const MapModel& map,
                                 const std::vector<DomainLabel>& labels,
                                 Complex z, bool* on_cut = nullptr) noexcept;

struct PullbackResult {
  Complex z;
  // max_j |f(w_j) - w_{j-1}| / max(1, |w_{j-1}|) over the pullback chain.
  double chain_residual = 0;
  // |f^{nm}(z) - ζ| / max(1, |ζ|) by direct forward composition; +inf on
  // overflow.
  double direct_residual = 0;
  bool on_cut = false;
};

// ζ_n(s) = L_{s0}∘…∘L_{s_{nm-1}}(ζ). Requires |ζ| > R and ζ off the cut.
// Throws Error(singular_hit), or Error(numeric) if the chain residual exceeds
// 1e-8.
PullbackResult pullback_along_address(const MapModel& map,
                                      const InfiniteAddress& s, Complex zeta,
                                      int steps, int m);

enum class LandingStatus { landed, not_converged, escaped_pullback, singular_hit };

std::string to_string(LandingStatus status);

struct LandingResult {
  LandingStatus status = LandingStatus::not_converged;
  Complex point{};
  Complex psi_derivative{};
  int iterations = 0;
};

struct LandingOptions {
  std::optional<Complex> seed;  // default t0 + 2πi s_0
  double tol = 1e-10;
  int max_iter = 10000;
};

// Iterates ψ = L_{s0}∘…∘L_{s_{p-1}} from the seed. Throws
// Error(precondition) unless s is purely periodic.
LandingResult landing_point(const MapModel& map, const InfiniteAddress& s,
                            const LandingOptions& options = {});

// f^n(z) and (f^n)'(z); nullopt on overflow.
struct OrbitJet {
  Complex value;
  Complex derivative;
};
std::optional<OrbitJet> iterate_jet(const MapModel& map, Complex z, int n) noexcept;

// Newton on f^p(z) - z. Returns nullopt when the iteration diverges,
// overflows or fails to reach `tol`.
std::optional<Complex> newton_periodic(const MapModel& map, Complex seed, int p,
                                       double tol = 1e-12, int max_iter = 100) noexcept;

enum class SingularEscapeKind {
  escapes_along_periodic_ray,
  escapes_other,
  bounded_so_far,
  enters_d_repeatedly,
};

std::string to_string(SingularEscapeKind kind);

struct SingularEscape {
  SingularEscapeKind kind = SingularEscapeKind::bounded_so_far;
  std::optional<InfiniteAddress> address;
  int steps = 0;  // iterates computed before the verdict
  int horizon = 0;
  std::vector<Complex> orbit;
};

// Finite-horizon verdict on the orbit of the singular value.
SingularEscape singular_escape_status(const MapModel& map, int horizon);

}  // namespace raycensus
