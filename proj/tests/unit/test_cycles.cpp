#include <doctest.h>

#include <cmath>

#include "cycles.hpp"
#include "oracles.hpp"

using namespace raycensus;

namespace {

const MapModel kReal = MapModel::exponential({-2, 0});

CycleSearchResult search(const MapModel& f, Box box, int P, int grid = 50) {
  CycleSearchOptions o;
  o.box = box;
  o.max_period = P;
  o.grid = grid;
  return find_cycles(f, o);
}

bool same_cycle(const Cycle& a, const Cycle& b, double eps) {
  if (a.period != b.period) return false;
  for (Complex z : b.points)
    if (std::abs(z - a.points[0]) < eps) return true;
  return false;
}

}  // namespace

TEST_CASE("real fixed points of e^z - 2") {
  auto r = search(kReal, {-3, 3, -1, 1}, 1);
  std::vector<Cycle> in;
  for (const auto& c : r.cycles)
    if (c.in_box) in.push_back(c);
  REQUIRE(in.size() == 2);
  Complex a = oracle::fixed_point({-2, 0}, -1.8), b = oracle::fixed_point({-2, 0}, 1.1);
  CHECK(std::abs(in[0].points[0] - a) < 1e-12);
  CHECK(in[0].kind == CycleClass::attracting);
  CHECK(std::abs(in[0].multiplier - (a + 2.0)) < 1e-12);
  CHECK(in[0].multiplier.real() == doctest::Approx(0.15859).epsilon(1e-4));
  CHECK(std::abs(in[1].points[0] - b) < 1e-12);
  CHECK(in[1].kind == CycleClass::repelling);
  CHECK(in[1].multiplier.real() == doctest::Approx(3.14619).epsilon(1e-5));
}

TEST_CASE("upper fixed point of e^z - 2") {
  auto r = search(kReal, {-3, 3, 3, 9}, 1);
  std::vector<Cycle> in;
  for (const auto& c : r.cycles)
    if (c.in_box) in.push_back(c);
  REQUIRE(in.size() == 1);
  Complex z = in[0].points[0];
  CHECK(std::abs(std::exp(z) - (z + 2.0)) < 1e-11);
  CHECK(std::abs(z - oracle::fixed_point({-2, 0}, {2, 7})) < 1e-12);
  CHECK(in[0].kind == CycleClass::repelling);
}

TEST_CASE("Siegel fixed point is found and indifferent") {
  auto f = MapModel::exponential(oracle::siegel_parameter());
  double theta = (std::sqrt(5.0) - 1) / 2;
  Complex z0(0, 2 * oracle::kPi * theta);
  auto r = search(f, {-1, 2, 2, 6}, 1);
  const Cycle* hit = nullptr;
  for (const auto& c : r.cycles)
    if (std::abs(c.points[0] - z0) < 1e-10) hit = &c;
  REQUIRE(hit);
  CHECK(hit->kind == CycleClass::indifferent);
  CHECK(std::abs(std::abs(hit->multiplier) - 1) < 1e-10);
  double rot = theta - 1;  // arg(λ)/2π folded into (-1/2, 1/2]
  CHECK(hit->rotation_number == doctest::Approx(rot).epsilon(1e-9));
}

TEST_CASE("classify examples") {
  CHECK(classify(0.15859).kind == CycleClass::attracting);
  CHECK(classify(0.0).kind == CycleClass::superattracting);
  CHECK(classify(3.14619).kind == CycleClass::repelling);
  CHECK(classify(1.0).kind == CycleClass::parabolic_suspected);
  CHECK(classify(-1.0).kind == CycleClass::parabolic_suspected);
  CHECK(classify(std::polar(1.0, 2 * oracle::kPi / 7)).kind == CycleClass::parabolic_suspected);
  CHECK(classify(1 + 1e-7).kind == CycleClass::parabolic_suspected);
  CHECK(classify(1 + 1e-5).kind == CycleClass::repelling);
  CHECK(classify(1 - 1e-5).kind == CycleClass::attracting);

  double theta = (std::sqrt(5.0) - 1) / 2;
  Complex golden = std::polar(1.0, 2 * oracle::kPi * theta);
  CHECK(classify(golden).kind == CycleClass::indifferent);
  double least = 1e300;
  Complex power = 1.0;
  for (int k = 1; k <= 64; ++k) {
    power *= golden;
    least = std::min(least, std::abs(power - 1.0));
  }
  // Closest return at the Fibonacci denominator 55: 2 sin(π |55θ - 34|) ≈ 0.051.
  CHECK(least == doctest::Approx(2 * std::sin(oracle::kPi * std::abs(55 * theta - 34))).epsilon(1e-9));
  CHECK(least > 1e-6);
}

TEST_CASE("cycle invariants over several parameters") {
  for (Complex c : {Complex(-2, 0), Complex(-1, 0.5), Complex(0.3, 2.0), oracle::siegel_parameter()}) {
    auto f = MapModel::exponential(c);
    auto r = search(f, {-3, 3, -7, 7}, 3, 30);
    CHECK(!r.cycles.empty());
    for (std::size_t i = 0; i < r.cycles.size(); ++i) {
      const Cycle& cy = r.cycles[i];
      REQUIRE(cy.points.size() == static_cast<std::size_t>(cy.period));
      // Multiplier identity: f'(z_i) = z_{i+1} - c.
      Complex product = 1.0;
      for (Complex z : cy.points) product *= z - c;
      CHECK(std::abs(product - cy.multiplier) <= 1e-8 * std::abs(cy.multiplier));
      // Closure and orbit order.
      Complex z = cy.points[0];
      for (int k = 0; k < cy.period; ++k) {
        CHECK(std::abs(z - cy.points[static_cast<std::size_t>(k)]) < 1e-9 * std::max(1.0, std::abs(z)));
        z = std::exp(z) + c;
      }
      CHECK(std::abs(z - cy.points[0]) < 1e-10 * std::max(1.0, std::abs(z)));
      // Minimal period.
      for (int d = 1; d < cy.period; ++d) CHECK(std::abs(cy.points[static_cast<std::size_t>(d)] - cy.points[0]) > 1e-6);
      // Least point first.
      for (Complex q : cy.points)
        CHECK((cy.points[0].real() < q.real() || (cy.points[0].real() == q.real() && cy.points[0].imag() <= q.imag())));
      CHECK(cy.kind == classify(cy.multiplier).kind);
      bool any = false;
      for (Complex q : cy.points) any = any || Box{-3, 3, -7, 7}.contains(q);
      CHECK(any);
      for (std::size_t j = 0; j < i; ++j) CHECK(!same_cycle(r.cycles[j], cy, 1e-9));
      if (i > 0) {
        const Cycle& prev = r.cycles[i - 1];
        CHECK(std::make_tuple(prev.period, prev.points[0].real(), prev.points[0].imag()) <
              std::make_tuple(cy.period, cy.points[0].real(), cy.points[0].imag()));
      }
    }
  }
}

TEST_CASE("divisor consistency: period-m cycles reappear in the 2m search once") {
  Box box{-3, 3, -7, 7};
  auto one = search(kReal, box, 1, 40), two = search(kReal, box, 2, 40);
  for (const auto& c : one.cycles) {
    int matches = 0;
    for (const auto& d : two.cycles) matches += same_cycle(d, c, 1e-9);
    CHECK(matches == 1);
  }
  for (const auto& d : two.cycles) CHECK((d.period == 1 || d.period == 2));
}

TEST_CASE("grid refinement finds a superset") {
  for (Complex c : {Complex(-2, 0), Complex(0.3, 2.0)}) {
    auto f = MapModel::exponential(c);
    Box box{-3, 3, -7, 7};
    auto coarse = search(f, box, 2, 20), fine = search(f, box, 2, 40);
    for (const auto& a : coarse.cycles) {
      bool found = false;
      for (const auto& b : fine.cycles) found = found || same_cycle(b, a, 1e-10);
      CHECK(found);
    }
  }
}

TEST_CASE("deterministic under thread count") {
  CycleSearchOptions o;
  o.max_period = 2;
  o.grid = 30;
  auto a = find_cycles(kReal, o);
  o.threads = 4;
  auto b = find_cycles(kReal, o);
  REQUIRE(a.cycles.size() == b.cycles.size());
  for (std::size_t i = 0; i < a.cycles.size(); ++i) CHECK(a.cycles[i].points == b.cycles[i].points);
}

TEST_CASE("make_cycle completes an orbit from any of its points") {
  Complex z = oracle::periodic_point({-2, 0}, {2.0, -1.1}, 2);
  Cycle a = make_cycle(kReal, z, 2);
  Cycle b = make_cycle(kReal, std::exp(z) - 2.0, 2);
  CHECK(std::abs(a.points[0] - b.points[0]) < 1e-12);
  CHECK(a.period == 2);
  CHECK(a.kind == CycleClass::repelling);
}
