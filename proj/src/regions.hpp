#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "address.hpp"
#include "cycles.hpp"
#include "map_model.hpp"
#include "rays.hpp"

namespace raycensus {

// Bit i is the crossing parity of the i-th Jordan curve of Γ.
using RegionId = std::uint64_t;

struct Arc {
  InfiniteAddress address;
  std::vector<Complex> polyline;  // landing point first, outermost vertex last
  Complex landing;
  double closure_gap = 0;  // |first traced sample - landing|
};

struct ExcludedAddress {
  InfiniteAddress address;
  LandingStatus status;
};

struct RegionRecord {
  RegionId id;
  Complex representative;
};

struct RayGraphOptions {
  Box region_box;
  int probe_grid = 200;  // 0 skips the region table
  unsigned threads = 1;
};

// Arcs of landed periodic rays, each continued horizontally to +∞ from its
// outermost vertex. Arcs sharing a landing point form a star; consecutive
// arcs of a star (in the vertical order of their extensions) bound one
// Jordan curve through ∞.
class RayGraph {
 public:
  static constexpr double kSnap = 1e-9;
  static constexpr double kLandingMerge = 1e-8;
  // Rays sharing a first entry approach each other like e^{-Re z}; beyond
  // this abscissa their samples coincide in double precision, so the
  // separation diagnostic ignores vertices to the right of it.
  static constexpr double kResolvedRe = 30;

  static RayGraph from_arcs(int p, int window, double truncation, std::vector<Arc> arcs,
                            const RayGraphOptions& options = {});

  int p() const noexcept { return p_; }
  int window() const noexcept { return window_; }
  double truncation() const noexcept { return truncation_; }
  const std::vector<Arc>& arcs() const noexcept { return arcs_; }
  const std::vector<ExcludedAddress>& excluded() const noexcept { return excluded_; }
  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }
  const std::vector<RegionRecord>& regions() const noexcept { return regions_; }
  const RayGraphOptions& options() const noexcept { return options_; }
  // Sampled separation of distinct arcs over Re <= kResolvedRe.
  double min_arc_separation() const noexcept { return min_separation_; }

  // Number of components of the complement: 1 + Σ(arcs per star - 1).
  std::size_t region_count() const noexcept { return curves_.size() + 1; }

  // Throws Error(on_arc) within kSnap of Γ.
  RegionId region_of(Complex z) const;
  // True iff some point of Γ lies within eps of z.
  bool near(Complex z, double eps) const;
  // True iff the closed segment [a, b] meets Γ or passes within kSnap of it.
  bool crosses(Complex a, Complex b) const;

  // Γ with every arc landing within kLandingMerge of one of `points` removed.
  RayGraph without_landing_at(const std::vector<Complex>& points) const;

  void add_excluded(ExcludedAddress e) { excluded_.push_back(std::move(e)); }
  void add_diagnostic(std::string d) { diagnostics_.push_back(std::move(d)); }

 private:
  struct Segment {
    Complex a, b;
    int arc;
  };

  void build();
  template <class Fn>
  void for_segments(double ylo, double yhi, Fn&& fn) const;

  int p_ = 1;
  int window_ = 0;
  double truncation_ = 100;
  RayGraphOptions options_;
  std::vector<Arc> arcs_;
  std::vector<ExcludedAddress> excluded_;
  std::vector<std::string> diagnostics_;
  std::vector<RegionRecord> regions_;
  double min_separation_ = 0;

  std::vector<std::pair<int, int>> curves_;
  std::vector<std::vector<int>> arc_curves_;
  std::vector<Segment> segments_;
  double slab_y0_ = 0, slab_h_ = 1;
  std::vector<std::vector<std::uint32_t>> slabs_;
};

// Traces every landed ray in enumerate_periodic(K, p). Arcs are sampled at
// potentials decreasing geometrically until within 1e-6 of the landing point
// or until a sample would need more than `depth` pullback steps.
RayGraph build_ray_graph(const MapModel& map, int p, int window, int depth,
                         const RayGraphOptions& options = {});

// Polyline for one landed ray; see build_ray_graph.
Arc trace_arc(const MapModel& map, const InfiniteAddress& s, Complex landing, int depth,
              double truncation);

RegionId basic_region_of(const RayGraph& graph, Complex z);

struct ItineraryEntry {
  enum class Kind { region, on_arc, escaped };
  Kind kind;
  RegionId id = 0;

  friend bool operator==(const ItineraryEntry&, const ItineraryEntry&) = default;
};

// Regions of z, f(z), ..., f^n(z); once escaped, every later entry is escaped.
std::vector<ItineraryEntry> itinerary(const MapModel& map, const RayGraph& graph, Complex z,
                                      int n_steps);

struct FixedPointAudit {
  std::map<RegionId, std::vector<Complex>> interior;
  std::vector<Complex> landing_points;  // fixed points of f^p on Γ
  std::vector<Complex> on_arc;          // near Γ but not a landing point
  std::vector<RegionId> attracting_regions;
  std::vector<RegionId> violations;  // regions with two or more interior points
  bool passed() const noexcept { return violations.empty(); }
};

// `cycles` may contain any periods; only those dividing Γ.p() are used.
FixedPointAudit interior_fixed_point_audit(const RayGraph& graph,
                                           const std::vector<Cycle>& cycles);

}  // namespace raycensus
