#pragma once

#include <optional>
#include <string>
#include <vector>

#include "address.hpp"
#include "cycles.hpp"
#include "map_model.hpp"
#include "regions.hpp"

namespace raycensus {

struct RadiusChoice {
  enum class Verdict { finite, unbounded };
  Verdict verdict = Verdict::finite;
  double r = 0;  // meaningful when finite
  // i(s): index of the cycle region holding the singular value.
  std::optional<int> start_index;
  // n(s): last step at which the orbit still followed B_{i(s)+j}; -1 when
  // the singular value lies in no B_i.
  int follow_steps = -1;
  bool followed_to_horizon = false;
  int horizon = 0;
};

std::string to_string(RadiusChoice::Verdict verdict);

// Region data around a repelling cycle. Arcs landing on the cycle itself are
// removed from Γ so that every z_i is interior.
struct TailSetup {
  RayGraph graph;
  std::vector<RegionId> regions;  // B_i = region of z_i
};

// Throws Error(precondition) unless the cycle is repelling and its period
// divides Γ.p(); Error(on_arc) if a cycle point still lies on the reduced Γ.
TailSetup prepare_tail_setup(const Cycle& cycle, const RayGraph& graph);

RadiusChoice choose_radius(const MapModel& map, const Cycle& cycle, const TailSetup& setup,
                           int horizon);

class TailContext {
 public:
  // Uses choose_radius unless `radius` is given; throws Error(precondition)
  // when the radius verdict is unbounded.
  static TailContext make(const MapModel& map, const Cycle& cycle, const RayGraph& graph,
                          int horizon = 1000, std::optional<double> radius = {});

  const MapModel& map() const noexcept { return map_; }
  const Cycle& cycle() const noexcept { return cycle_; }
  const RayGraph& graph() const noexcept { return setup_.graph; }
  RegionId region(int i) const noexcept {
    return setup_.regions[static_cast<std::size_t>(i % cycle_.period)];
  }
  int period() const noexcept { return cycle_.period; }
  double radius() const noexcept { return r_; }
  int horizon() const noexcept { return horizon_; }
  const RadiusChoice& radius_choice() const noexcept { return choice_; }

 private:
  TailContext(MapModel map, Cycle cycle, TailSetup setup, double r, int horizon,
              RadiusChoice choice)
      : map_(map), cycle_(std::move(cycle)), setup_(std::move(setup)), r_(r),
        horizon_(horizon), choice_(choice) {}

  MapModel map_;
  Cycle cycle_;
  TailSetup setup_;
  double r_;
  int horizon_;
  RadiusChoice choice_;
};

// z lies in the unbounded part of F ∩ B_0 ∩ f^{-1}(ℂ \ (D̄_r ∪ δ_r)).
// Throws Error(on_arc) when z sits on Γ.
bool tail1_membership(const TailContext& ctx, DomainLabel label, Complex z);

// `s` must have length m(n-1)+1.
bool tail_membership(const TailContext& ctx, const FiniteAddress& s, Complex z);

// Same predicate with orbit[j] standing for f^j(z). Lets callers supply
// images computed stably (pullback chains, ray points) instead of forward
// iterates, whose error grows like |λ|^n.
bool orbit_membership(const TailContext& ctx, const FiniteAddress& s,
                      const std::vector<Complex>& orbit);

struct TailAddressRecord {
  FiniteAddress address;
  int level = 0;
  bool exists = false;
  bool indeterminate = false;  // a region query landed on Γ
  Complex witness{};
  std::string reason;
};

// Searches a τ₁ witness for the label well inside the tract; nullopt if none.
std::optional<Complex> tail1_witness(const TailContext& ctx, DomainLabel label);

TailAddressRecord tail_exists(const TailContext& ctx, const InfiniteAddress& s, int n);

struct PieceSample {
  std::vector<Complex> points;
  std::size_t grid_points = 0;
  std::size_t on_arc = 0;  // grid points dropped because they sat on Γ
};

// Grid samples of P_n(s): points of τ₁(σ^{mn}s) ∩ D_r on a samples×samples
// grid, pulled back mn steps along s.
PieceSample sample_piece(const TailContext& ctx, const InfiniteAddress& s, int n, int samples);

struct PieceEstimate {
  double diameter = 0;
  std::size_t sample_count = 0;
  bool empty = true;
};

PieceEstimate piece_diameter(const TailContext& ctx, const InfiniteAddress& s, int n,
                             int samples);

struct PieceMappingReport {
  bool passed = false;
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::size_t excluded = 0;  // on Γ or overflowed
};

// f^m(P_j(s)) ⊂ P_{j-1}(σ^m s) on samples. Throws Error(precondition) for j < 2.
PieceMappingReport piece_mapping_check(const TailContext& ctx, const InfiniteAddress& s, int j,
                                       int samples);

}  // namespace raycensus
