#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "oracles.hpp"
#include "tails.hpp"

using namespace raycensus;

namespace {

const MapModel kReal = MapModel::exponential({-2, 0});

const RayGraph& graph(int p) {
  static const RayGraph g1 = build_ray_graph(kReal, 1, 1, 40);
  static const RayGraph g2 = build_ray_graph(kReal, 2, 1, 40);
  return p == 1 ? g1 : g2;
}

const TailContext& real_context() {
  static const TailContext ctx =
      TailContext::make(kReal, make_cycle(kReal, oracle::fixed_point({-2, 0}, 1.1), 1), graph(1));
  return ctx;
}

// Star at -10 + 10πi whose two arcs enclose the far part of strip 5.
RayGraph fenced_graph() {
  Complex hub(-10, 10 * oracle::kPi);
  std::vector<Arc> arcs = {
      {InfiniteAddress::constant(5), {hub, {-5, 9 * oracle::kPi}, {101, 9 * oracle::kPi}}, hub, 0},
      {InfiniteAddress::constant(6), {hub, {-5, 11 * oracle::kPi}, {101, 11 * oracle::kPi}}, hub, 0},
  };
  return RayGraph::from_arcs(1, 6, 100, arcs);
}

// Potential whose k-fold image under t -> e^t - 1 equals u.
double potential_before(double u, int k) {
  for (int i = 0; i < k; ++i) u = std::log1p(u);
  return u;
}

InfiniteAddress word(std::initializer_list<int> ks) {
  std::vector<DomainLabel> out;
  for (int k : ks) out.emplace_back(k);
  return InfiniteAddress::periodic(out);
}

}  // namespace

TEST_CASE("choose_radius at the real repelling fixed point") {
  const TailContext& ctx = real_context();
  const RadiusChoice& choice = ctx.radius_choice();
  CHECK(choice.verdict == RadiusChoice::Verdict::finite);
  // Oracle: 1.25 · max(R, |z_0|, moduli along the orbit of c).
  double peak = std::max(kReal.radius(), 1.1461932206205825);
  Complex z = -2.0;
  for (int k = 0; k <= 1001; ++k) {
    peak = std::max(peak, std::abs(z));
    z = std::exp(z) - 2.0;
  }
  CHECK(ctx.radius() == doctest::Approx(1.25 * peak).epsilon(1e-12));
  CHECK(ctx.radius() == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(ctx.radius() > ctx.cycle().points[0].real());
}

TEST_CASE("choose_radius is dominated by large cycle points") {
  Complex up = oracle::fixed_point({-2, 0}, {2, 7});
  auto ctx = TailContext::make(kReal, make_cycle(kReal, up, 1), graph(1));
  CHECK(ctx.radius() >= 1.25 * std::abs(up) - 1e-12);
  Complex two = oracle::periodic_point({-2, 0}, {1.9, 5.3}, 2);
  auto ctx2 = TailContext::make(kReal, make_cycle(kReal, two, 2), graph(2));
  CHECK(ctx2.radius() >= 1.25 * std::abs(two) - 1e-12);
  CHECK(std::abs(two) == doctest::Approx(5.66).epsilon(1e-2));
}

TEST_CASE("choose_radius reports an unbounded singular orbit for e^z") {
  auto e = MapModel::exponential({0, 0});
  auto g = build_ray_graph(e, 1, 1, 40);
  Cycle cycle = make_cycle(e, oracle::fixed_point({0, 0}, {0.3, 1.3}), 1);
  REQUIRE(cycle.kind == CycleClass::repelling);
  TailSetup setup = prepare_tail_setup(cycle, g);
  RadiusChoice choice = choose_radius(e, cycle, setup, 1000);
  CHECK(choice.verdict == RadiusChoice::Verdict::unbounded);
  CHECK_THROWS_AS(TailContext::make(e, cycle, g), Error);
}

TEST_CASE("tail contexts require a repelling cycle") {
  Cycle attracting = make_cycle(kReal, oracle::fixed_point({-2, 0}, -1.8), 1);
  CHECK_THROWS_AS(TailContext::make(kReal, attracting, graph(1)), Error);
  Cycle two = make_cycle(kReal, oracle::periodic_point({-2, 0}, {1.9, 5.3}, 2), 2);
  CHECK_THROWS_AS(TailContext::make(kReal, two, graph(1)), Error);  // 2 does not divide 1
}

TEST_CASE("tail1 membership examples") {
  const TailContext& ctx = real_context();
  double r = ctx.radius();
  for (double t : {r + 1, 10.0, 50.0, 90.0, 99.0}) CHECK(tail1_membership(ctx, DomainLabel(0), t));
  CHECK(!tail1_membership(ctx, DomainLabel(0), 1.0));  // |f(1)| < r
  CHECK(!tail1_membership(ctx, DomainLabel(0), ctx.cycle().points[0]));
  CHECK(!tail1_membership(ctx, DomainLabel(1), 10.0));  // wrong domain
  CHECK(tail1_membership(ctx, DomainLabel(1), Complex(10, 2 * oracle::kPi + 0.5)));
  // f maps Im = π into the cut.
  CHECK(!tail1_membership(ctx, DomainLabel(0), Complex(10, oracle::kPi)));
}

TEST_CASE("tail membership examples") {
  const TailContext& ctx = real_context();
  for (double x = -3; x <= 60; x += 0.7)
    for (double y = -4; y <= 4; y += 0.9) {
      Complex z(x, y);
      for (int k : {-1, 0, 1})
        CHECK(tail_membership(ctx, FiniteAddress{{DomainLabel(k)}}, z) ==
              tail1_membership(ctx, DomainLabel(k), z));
    }
  auto zero = InfiniteAddress::constant(0);
  Complex z = pullback_along_address(kReal, zero, kReal.seed_potential(), 1, 1).z;
  CHECK(tail_membership(ctx, project(zero, 2, 1), z));
  for (int n = 1; n <= 6; ++n) CHECK(!tail_membership(ctx, project(zero, n, 1), ctx.cycle().points[0]));
}

TEST_CASE("tail_exists converges to the landing point") {
  const TailContext& ctx = real_context();
  auto zero = InfiniteAddress::constant(0);
  Complex z0 = ctx.cycle().points[0];
  double previous = 1e300;
  for (int n = 1; n <= 30; ++n) {
    TailAddressRecord rec = tail_exists(ctx, zero, n);
    REQUIRE(rec.exists);
    CHECK(rec.level == n);
    CHECK(rec.address == project(zero, n, 1));
    // Forward iteration of the witness stays accurate while |λ|^n eps is small.
    if (n <= 20) CHECK(tail_membership(ctx, rec.address, rec.witness));
    double d = std::abs(rec.witness - z0);
    if (n > 3) CHECK(d < previous);
    previous = d;
  }
  CHECK(previous < 1e-8);

  TailAddressRecord one = tail_exists(ctx, InfiniteAddress::constant(2), 1);
  CHECK(one.exists);
  CHECK(tail1_membership(ctx, DomainLabel(2), one.witness));
}

TEST_CASE("labels cut off from B_0 have no tail") {
  Cycle cycle = make_cycle(kReal, oracle::fixed_point({-2, 0}, 1.1), 1);
  auto ctx = TailContext::make(kReal, cycle, fenced_graph());
  CHECK(!tail1_witness(ctx, DomainLabel(5)));
  TailAddressRecord rec = tail_exists(ctx, InfiniteAddress::constant(5), 1);
  CHECK(!rec.exists);
  CHECK(!rec.reason.empty());
  CHECK(tail_exists(ctx, InfiniteAddress::constant(4), 1).exists);
  PieceEstimate none = piece_diameter(ctx, InfiniteAddress::constant(5), 3, 20);
  CHECK(none.empty);
  CHECK(none.diameter == 0);
}

TEST_CASE("pullback witnesses converge exactly for landed addresses") {
  for (const auto& s : {word({0}), word({0, 1}), word({1, -1})}) {
    int m = static_cast<int>(period_of(s));
    LandingResult land = landing_point(kReal, s);
    REQUIRE(land.status == LandingStatus::landed);
    auto ctx = TailContext::make(kReal, make_cycle(kReal, land.point, m), graph(m));
    std::vector<Complex> w;
    for (int n = 1; n <= 40 / m; ++n) {
      auto rec = tail_exists(ctx, s, n);
      REQUIRE(rec.exists);
      w.push_back(rec.witness);
    }
    CHECK(std::abs(w.back() - land.point) < 1e-8);
    // Geometric Cauchy rate.
    for (std::size_t k = 6; k + 1 < w.size(); ++k) {
      double a = std::abs(w[k] - w[k - 1]), b = std::abs(w[k + 1] - w[k]);
      if (a > 1e-13) CHECK(b < 0.9 * a);
    }
  }
}

// The last image sits at potential u. Larger u puts ray (0,1) within the snap
// tolerance of the real arc of Γ, where region queries report on_arc.
TEST_CASE("ray points lie in tails wherever membership is decidable") {
  for (const auto& s : {word({0}), word({0, 1})}) {
    int m = static_cast<int>(period_of(s));
    LandingResult land = landing_point(kReal, s);
    auto ctx = TailContext::make(kReal, make_cycle(kReal, land.point, m), graph(m));
    double lambda = std::abs(ctx.cycle().multiplier);
    for (int n = 1; n <= 20; ++n)
      for (double u : {3.0, 6.0, 12.0, 18.0}) {
        INFO(s.to_string(), " n=", n, " u=", u);
        auto address = project(s, n, m);
        // Orbit as ray points: f^k(G_s(t)) = G_{σ^k s}(F^k(t)).
        std::vector<Complex> orbit;
        for (int k = 0; k <= m * (n - 1); ++k)
          orbit.push_back(ray_point(kReal, shift(s, static_cast<std::size_t>(k)),
                                    potential_before(u, m * (n - 1) - k)));
        for (std::size_t k = 1; k < orbit.size(); ++k)
          CHECK(std::abs(*kReal.evaluate(orbit[k - 1]) - orbit[k]) <= 1e-9 * std::abs(orbit[k]));
        CHECK(orbit_membership(ctx, address, orbit));
        // Plain forward iteration agrees while the error |λ|^n eps stays small.
        if (std::pow(lambda, n - 1) * 1e-16 < 1e-6) CHECK(tail_membership(ctx, address, orbit[0]));
      }
  }
}

TEST_CASE("tails nest at large modulus") {
  const TailContext& ctx = real_context();
  auto zero = InfiniteAddress::constant(0);
  for (int n = 1; n <= 8; ++n)
    for (double u : {10.0, 100.0, 600.0})
      for (double eta : {-0.3, -0.1, 0.0, 0.1, 0.3}) {
        Complex z = ray_point(kReal, zero, potential_before(u, n)) + Complex(0, eta);
        if (std::abs(z) <= ctx.radius()) continue;
        if (tail_membership(ctx, project(zero, n + 1, 1), z)) CHECK(tail_membership(ctx, project(zero, n, 1), z));
      }
  for (double x = 101; x < 140; x += 3)
    for (double y = -1; y <= 1; y += 0.25)
      if (tail_membership(ctx, project(zero, 2, 1), {x, y})) CHECK(tail1_membership(ctx, DomainLabel(0), {x, y}));
}

TEST_CASE("pieces shrink at the rate 1/|λ|") {
  const TailContext& ctx = real_context();
  auto zero = InfiniteAddress::constant(0);
  std::vector<double> diam;
  for (int n = 0; n <= 25; ++n) {
    PieceEstimate e = piece_diameter(ctx, zero, n, 40);
    if (n >= 1) {
      CHECK(!e.empty);
      CHECK(e.sample_count > 0);
    }
    diam.push_back(e.diameter);
  }
  for (int n = 5; n <= 20; ++n) CHECK(diam[n + 5] < diam[n]);
  double rate = 1 / std::abs(ctx.cycle().multiplier);
  for (int n = 10; n < 20; ++n) CHECK(diam[n + 1] / diam[n] == doctest::Approx(rate).epsilon(0.05));
}

TEST_CASE("pieces map onto pieces") {
  const TailContext& ctx = real_context();
  auto zero = InfiniteAddress::constant(0);
  PieceMappingReport rep = piece_mapping_check(ctx, zero, 6, 30);
  CHECK(rep.passed);
  CHECK(rep.checked > 0);
  CHECK(rep.failures == 0);
  CHECK_THROWS_AS(piece_mapping_check(ctx, zero, 1, 30), Error);
  for (int j = 2; j <= 10; ++j) CHECK(piece_mapping_check(ctx, zero, j, 20).passed);
}
