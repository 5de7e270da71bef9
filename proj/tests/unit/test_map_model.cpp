#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "error.hpp"
#include "map_model.hpp"
#include "oracles.hpp"

using namespace raycensus;

TEST_CASE("evaluate and derivative on the real map e^z - 2") {
  auto f = MapModel::exponential({-2, 0});
  CHECK(std::abs(*f.evaluate({0, 0}) - Complex(-1, 0)) < 1e-15);
  CHECK(std::abs(*f.evaluate({0, kPi}) - Complex(-3, 0)) < 1e-15);
  CHECK(std::abs(*f.evaluate({1, 0}) - Complex(std::numbers::e - 2, 0)) < 1e-15);
  CHECK(std::abs(*f.derivative({0, 0}) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(*f.derivative({std::log(3.0), 0}) - Complex(3, 0)) < 1e-14);
  Complex z0 = oracle::fixed_point({-2, 0}, {1.1, 0});
  CHECK(std::abs(*f.derivative(z0) - (z0 - f.c())) < 1e-14);
}

TEST_CASE("overflow is reported as escape") {
  auto f = MapModel::exponential({-2, 0});
  CHECK_FALSE(f.evaluate({701, 0}).has_value());
  CHECK_FALSE(f.derivative({800, 3}).has_value());
  CHECK(f.evaluate({699, 0}).has_value());
}

TEST_CASE("singular values") {
  CHECK(MapModel::exponential({-2, 0}).singular_values() == std::vector<Complex>{{-2, 0}});
  CHECK(MapModel::exponential({0.7375, 4.5588}).singular_values() ==
        std::vector<Complex>{{0.7375, 4.5588}});
  CHECK(MapModel::exponential({0, 0}).singular_values() == std::vector<Complex>{{0, 0}});
}

TEST_CASE("default radius contains c and f(0)") {
  for (Complex c : {Complex(-2, 0), Complex(0, 0), oracle::siegel_parameter(), Complex(5, -7)}) {
    auto f = MapModel::exponential(c);
    CHECK(std::abs(c) < f.radius());
    CHECK(std::abs(1.0 + c) < f.radius());
    CHECK(std::log(f.radius() - std::abs(c)) > -f.radius());
  }
  CHECK_THROWS_AS(MapModel::exponential({-2, 0}, 1.5), Error);
}

TEST_CASE("inverse branches") {
  auto f = MapModel::exponential({-2, 0});
  CHECK(std::abs(f.inverse_branch({10, 0}, DomainLabel(0)) - Complex(std::log(12.0), 0)) < 1e-15);
  CHECK(std::abs(f.inverse_branch({10, 0}, DomainLabel(1)) - Complex(std::log(12.0), 2 * kPi)) <
        1e-15);
  try {
    f.inverse_branch({-2, 0}, DomainLabel(0));
    FAIL("expected a singular hit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular_hit);
  }
  bool cut = false;
  Complex z = f.inverse_branch({-10, 0}, DomainLabel(0), &cut);
  CHECK(cut);
  CHECK(z.imag() == doctest::Approx(kPi));
  CHECK(std::abs(*f.evaluate(z) - Complex(-10, 0)) < 1e-13);
}

TEST_CASE("fundamental domains with R = 5") {
  auto f = MapModel::exponential({-2, 0}, 5.0);
  CHECK(f.fundamental_domain_of({10, 0})->k == 0);
  CHECK(f.fundamental_domain_of({10, 2 * kPi})->k == 1);
  CHECK_FALSE(f.fundamental_domain_of({-10, 0}).has_value());
}

TEST_CASE("round trip, branch separation and label consistency") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> logr(0.0, 8.0);
  for (Complex c : {Complex(-2, 0), oracle::siegel_parameter(), Complex(0, 0)}) {
    auto f = MapModel::exponential(c);
    for (int i = 0; i < 300; ++i) {
      Complex w = std::polar(f.radius() * std::exp(logr(rng)) * 1.0001, angle(rng));
      if (f.on_cut(w)) continue;
      for (int k = -10; k <= 10; ++k) {
        Complex z = f.inverse_branch(w, DomainLabel(k));
        CHECK(std::abs(*f.evaluate(z) - w) <= 1e-12 * std::max(1.0, std::abs(w)));
        Complex z1 = f.inverse_branch(w, DomainLabel(k + 1));
        // Exact up to the rounding of the two sums Arg + 2πk.
        double scale = std::max(std::abs(z.imag()), std::abs(z1.imag()));
        CHECK(std::abs(z1.imag() - z.imag() - 2 * kPi) <= 4 * 0x1p-52 * scale);
      }
      Complex z = f.inverse_branch(w, DomainLabel(0)) + Complex(1.0 + logr(rng), 0);
      if (auto label = f.fundamental_domain_of(z)) {
        Complex back = f.inverse_branch(*f.evaluate(z), *label);
        CHECK(f.fundamental_domain_of(back) == label);
      }
    }
  }
}

TEST_CASE("derivative minus evaluate is -c on random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-20, 20);
  for (Complex c : {Complex(-2, 0), oracle::siegel_parameter()}) {
    auto f = MapModel::exponential(c);
    for (int i = 0; i < 1000; ++i) {
      Complex z(u(rng), u(rng));
      Complex diff = *f.derivative(z) - *f.evaluate(z);
      CHECK(std::abs(diff + c) <= 1e-15 * std::max(1.0, std::abs(*f.evaluate(z))) + 1e-15);
    }
  }
}

TEST_CASE("strip labels") {
  CHECK(strip_label({0, 0}).k == 0);
  CHECK(strip_label({0, kPi}).k == 0);
  CHECK(strip_label({0, kPi + 1e-9}).k == 1);
  CHECK(strip_label({0, -kPi + 1e-9}).k == 0);
  CHECK(strip_label({3, -2 * kPi}).k == -1);
}
