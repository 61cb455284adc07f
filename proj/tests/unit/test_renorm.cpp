#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "loggas/errors.hpp"
#include "loggas/renorm.hpp"

using namespace loggas;
using std::numbers::pi;

TEST_CASE("lattice value is -pi log 2pi for every period") {
  for (int n = 1; n <= 64; ++n)
    CHECK(periodic_w(PeriodicConfig::lattice(n)) == doctest::Approx(-pi * std::log(2 * pi)).epsilon(1e-13));
  CHECK(lattice_min(1.0) == doctest::Approx(-pi * std::log(2 * pi)));
}

TEST_CASE("two points: direct sum oracle") {
  for (double a : {0.1, 0.5, 1.0, 1.7}) {
    const double w = -(pi / 2) * 2 * std::log(std::abs(2 * std::sin(pi * a / 2))) - pi * std::log(pi);
    CHECK(periodic_w(PeriodicConfig(2, {0.0, a})) == doctest::Approx(w).epsilon(1e-13));
  }
}

TEST_CASE("translation and relabelling invariance") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 7);
  std::vector<double> a(7);
  for (double& x : a) x = u(rng);
  const PeriodicConfig c(7, a);
  std::vector<double> rev(a.rbegin(), a.rend());
  CHECK(periodic_w(c.translated(2.345)) == doctest::Approx(periodic_w(c)).epsilon(1e-12));
  CHECK(periodic_w(PeriodicConfig(7, rev)) == doctest::Approx(periodic_w(c)).epsilon(1e-14));
  std::vector<double> shifted = a;
  for (double& x : shifted) x += 14.0;
  CHECK(periodic_w(PeriodicConfig(7, shifted)) == doctest::Approx(periodic_w(c)).epsilon(1e-12));
}

TEST_CASE("scaling relation between densities") {
  for (double m : {0.5, 2.0, 3.0}) CHECK(rescale_w(periodic_w(PeriodicConfig::lattice(5)), m) == doctest::Approx(lattice_min(m)));
  CHECK_THROWS_AS(lattice_min(0.0), DomainError);
}

TEST_CASE("random configurations lie above the lattice value") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + t % 20;
    std::uniform_real_distribution<double> u(0, n);
    std::vector<double> a(n);
    for (double& x : a) x = u(rng);
    CHECK(periodic_w(PeriodicConfig(n, a)) >= -pi * std::log(2 * pi) - 1e-12);
  }
}

TEST_CASE("invalid configurations") {
  CHECK_THROWS_AS(PeriodicConfig(3, {0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(PeriodicConfig(2, {0.5, 0.5}), DegenerateConfiguration);
  CHECK_THROWS_AS(PeriodicConfig(2, {0.0, 2.0}), DegenerateConfiguration);
  CHECK(PeriodicConfig::lattice(4).min_gap() == doctest::Approx(1.0));
}
