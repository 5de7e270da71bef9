#pragma once

#include <string>
#include <vector>

#include "map_model.hpp"

namespace raycensus {

struct Box {
  double x0 = -3, x1 = 3, y0 = -7, y1 = 7;

  bool contains(Complex z) const noexcept {
    return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
  }
  bool valid() const noexcept { return x0 < x1 && y0 < y1; }
};

enum class CycleClass {
  attracting,
  superattracting,
  repelling,
  indifferent,
  parabolic_suspected,
};

std::string to_string(CycleClass kind);

struct Classification {
  CycleClass kind;
  double rotation_number;  // arg(λ)/2π in (-1/2, 1/2]
};

Classification classify(Complex multiplier, double tol_band = 1e-6);

struct Cycle {
  std::vector<Complex> points;  // points[i+1] = f(points[i]); points[0] least
  int period = 0;
  Complex multiplier{};
  CycleClass kind = CycleClass::repelling;
  double rotation_number = 0;
  bool in_box = false;  // every point inside the search box

  bool non_repelling() const noexcept { return kind != CycleClass::repelling; }
};

struct CycleSearchOptions {
  Box box;
  int max_period = 1;
  int grid = 50;  // cells per side; seeds sit on the (grid+1)^2 nodes
  double tol = 1e-12;
  double tol_band = 1e-6;
  unsigned threads = 1;
  bool coverage_check = true;
};

struct CycleSearchResult {
  // Cycles with at least one point in the box, sorted by (period, Re z0, Im z0).
  std::vector<Cycle> cycles;
  std::vector<std::string> warnings;
};

CycleSearchResult find_cycles(const MapModel& map, const CycleSearchOptions& options);

// Completes the orbit of a period-p point, polishes every point and fills
// multiplier and class.
Cycle make_cycle(const MapModel& map, Complex z, int period, double tol = 1e-12,
                 double tol_band = 1e-6);

}  // namespace raycensus
