#pragma once

#include <optional>
#include <string>
#include <vector>

#include "address.hpp"
#include "cycles.hpp"
#include "map_model.hpp"
#include "rays.hpp"
#include "tails.hpp"

namespace raycensus {

struct AuditOptions {
  Box box;
  int max_period = 2;  // P
  int window = 1;      // K
  int depth = 40;
  int horizon = 1000;
  int grid = 50;
  double tol = 1e-12;
  double tol_band = 1e-6;
  double landing_tol = 1e-10;
  int landing_max_iter = 10000;
  double match_tol = 1e-6;
  unsigned threads = 1;
};

enum class SingularCase {
  in_basin,
  trapped_case_1,
  escaping_along_periodic_ray,
  escaping_other,
  undetermined,
};

std::string to_string(SingularCase kind);

enum class Verdict { satisfied, violated, not_applicable };

std::string to_string(Verdict verdict);

struct LandingRecord {
  std::size_t cycle_index;  // into CensusReport::cycles
  int period_cap;
  std::vector<InfiniteAddress> addresses;
  bool equal_period = true;
  bool invisible_candidate = false;
};

struct TrichotomyEvidence {
  std::size_t cycle_index;
  std::string supported_case;
  RadiusChoice choice;
  std::string note;
};

struct UnlandedAddress {
  InfiniteAddress address;
  LandingStatus status;
};

struct CensusReport {
  MapModel map = MapModel::exponential(Complex(0, 0));
  AuditOptions options;
  std::vector<Cycle> cycles;  // cycles entirely inside the box
  std::size_t partial_cycles = 0;
  std::vector<std::string> warnings;
  std::vector<LandingRecord> landings;  // one per repelling cycle
  int n_attracting = 0;
  int n_indifferent = 0;
  int n_repelling = 0;
  int n_invisible_candidates = 0;
  int q = 1;
  int q_effective = 1;
  SingularCase singular = SingularCase::undetermined;
  std::optional<InfiniteAddress> singular_address;
  SingularEscape escape;
  bool all_window_rays_landed = true;
  bool singular_escapes_along_periodic_ray = false;
  std::vector<UnlandedAddress> unlanded;
  Verdict verdict = Verdict::not_applicable;
  std::string reproducer;  // set when violated
  std::vector<TrichotomyEvidence> evidence;
};

CensusReport audit(const MapModel& map, const AuditOptions& options);

struct LandingSearchOptions {
  int window = 1;
  int period_cap = 1;
  double match_tol = 1e-6;
  LandingOptions landing;
  unsigned threads = 1;
};

struct LandingSearchResult {
  std::vector<InfiniteAddress> addresses;  // sorted
  bool equal_period = true;
  std::vector<UnlandedAddress> unlanded;
};

// Every address with entries in [-K, K] and period <= cap whose landing point
// is within match_tol of a cycle point. Throws Error(precondition) unless the
// cycle is repelling.
LandingSearchResult landing_search(const MapModel& map, const Cycle& cycle,
                                   const LandingSearchOptions& options);

}  // namespace raycensus
