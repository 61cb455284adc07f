#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "loggas/errors.hpp"
#include "loggas/hamiltonian.hpp"

using namespace loggas;

namespace {

std::vector<double> normal_points(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, 1);
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return x;
}

double brute_energy(const std::vector<double>& x, const Potential& v) {
  const double n = x.size();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j)
      if (i != j) s -= std::log(std::abs(x[i] - x[j]));
    s += n * v(x[i]);
  }
  return s;
}

}  // namespace

TEST_CASE("energy of two points by hand") {
  // -2 log 2 + 2 (1/2 + 1/2)
  CHECK(energy(std::vector<double>{-1.0, 1.0}, quadratic()) == doctest::Approx(2.0 - 2 * std::log(2.0)));
}

TEST_CASE("energy, gradient and single-site differences agree with brute force") {
  const Potential v = double_well();
  for (int n : {3, 10, 25}) {
    const auto x = normal_points(n, n);
    CHECK(energy(x, v) == doctest::Approx(brute_energy(x, v)).epsilon(1e-12));
    const auto g = gradient(x, v);
    for (int i = 0; i < n; ++i) {
      const double h = 1e-6;
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      CHECK(g[i] == doctest::Approx((brute_energy(xp, v) - brute_energy(xm, v)) / (2 * h)).epsilon(1e-5));
      auto moved = x;
      moved[i] = 0.123;
      CHECK(energy_delta(x, i, 0.123, v) == doctest::Approx(brute_energy(moved, v) - brute_energy(x, v)).epsilon(1e-10));
    }
  }
}

TEST_CASE("moving onto an occupied site costs infinite energy") {
  const std::vector<double> x{-1.0, 0.0, 2.0};
  CHECK(energy_delta(x, 0, 2.0, quadratic()) == std::numeric_limits<double>::infinity());
}

TEST_CASE("configurations are sorted and reject repeats") {
  const Configuration c({3.0, -1.0, 0.5});
  CHECK(c.points() == std::vector<double>{-1.0, 0.5, 3.0});
  CHECK_THROWS_AS(Configuration({1.0, 1.0}), DegenerateConfiguration);
}

TEST_CASE("splitting identity") {
  const Model m = quadratic_model();
  const auto x = normal_points(20, 5);
  const EnergyBreakdown b = breakdown(Configuration(x), m.potential, m.measure, m.constants);
  const double n = 20;
  CHECK(b.w_n == doctest::Approx(n * n * 0.75 - n * std::log(n) + n * b.f_n));
  CHECK(b.leading == doctest::Approx(n * n * 0.75));
  CHECK(b.log_term == doctest::Approx(n * std::log(n)));
  CHECK(b.f_hat == doctest::Approx(b.f_n - 2 * b.zeta_sum));
  CHECK(b.zeta_sum >= 0.0);
}

TEST_CASE("effective zeta") {
  const Model m = quadratic_model();
  CHECK(effective_zeta(m.measure, m.potential, m.constants.c, 0.3) == 0.0);
  CHECK(effective_zeta(m.measure, m.potential, m.constants.c, 3.0) == doctest::Approx(0.7147).epsilon(1e-4));
}

TEST_CASE("discrepancy counts points against the measure") {
  const EquilibriumMeasure mu = EquilibriumMeasure::semicircle();
  const std::vector<double> x{-0.5, -0.1, 0.0, 0.2, 1.5};
  const double n = 5, r = 1.0;
  // Window [-0.2, 0.2] holds three points (boundary inclusive).
  CHECK(discrepancy(Configuration(x), mu, 0.0, r) == doctest::Approx(3 - n * mu.mass(-0.2, 0.2)));
  CHECK(discrepancy(std::vector<double>{}, 10, mu, 0.0, 2.0) == doctest::Approx(-10 * mu.mass(-0.2, 0.2)));
}
