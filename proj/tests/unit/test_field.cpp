#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "loggas/errors.hpp"
#include "loggas/field.hpp"

using namespace loggas;
using std::numbers::pi;

namespace {

PeriodicConfig random_config(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, n);
  std::vector<double> a(n);
  for (double& x : a) x = u(rng);
  return PeriodicConfig(n, a);
}

// -(1/2) sum log|2 sin(pi (z - a)/N)|^2 + pi |y| straight from the definition.
double potential_oracle(const PeriodicConfig& c, double x, double y) {
  const double N = c.period();
  double s = 0.0;
  for (double a : c.points()) {
    const double u = pi * (x - a) / N, v = pi * y / N;
    const double m2 = 4 * (std::sin(u) * std::sin(u) * std::cosh(v) * std::cosh(v) + std::cos(u) * std::cos(u) * std::sinh(v) * std::sinh(v));
    s -= 0.5 * std::log(m2);
  }
  return s + pi * std::abs(y);
}

}  // namespace

TEST_CASE("potential matches the sine-product form") {
  const PeriodicConfig c = random_config(5, 1);
  const CylinderField f(c);
  for (double x : {0.3, 1.7, 4.2})
    for (double y : {-1.3, 0.2, 0.9, 2.5}) CHECK(f.potential(x, y) == doctest::Approx(potential_oracle(c, x, y)).epsilon(1e-11));
}

TEST_CASE("field is minus the gradient of the potential") {
  const CylinderField f(random_config(4, 2));
  const double h = 1e-5;
  for (double x : {0.45, 2.2, 3.3})
    for (double y : {-0.8, 0.3, 1.4}) {
      const auto e = f.field(x, y);
      CHECK(e[0] == doctest::Approx(-(f.potential(x + h, y) - f.potential(x - h, y)) / (2 * h)).epsilon(1e-6));
      CHECK(e[1] == doctest::Approx(-(f.potential(x, y + h) - f.potential(x, y - h)) / (2 * h)).epsilon(1e-6));
      CHECK(f.field_norm2(x, y) == doctest::Approx(e[0] * e[0] + e[1] * e[1]));
    }
}

TEST_CASE("mirror symmetry, periodicity and decay") {
  const PeriodicConfig c = random_config(6, 3);
  const CylinderField f(c);
  for (double x : {0.1, 2.9, 5.5})
    for (double y : {0.2, 1.0, 3.0}) {
      CHECK(f.potential(x, -y) == doctest::Approx(f.potential(x, y)));
      CHECK(f.field(x, -y)[0] == doctest::Approx(f.field(x, y)[0]));
      CHECK(f.field(x, -y)[1] == doctest::Approx(-f.field(x, y)[1]));
      CHECK(f.potential(x + 6, y) == doctest::Approx(f.potential(x, y)).epsilon(1e-11));
    }
  const double near = std::sqrt(f.field_norm2(1.0, 6.0)), far = std::sqrt(f.field_norm2(1.0, 12.0));
  CHECK(far / near == doctest::Approx(std::exp(-2 * pi * 6.0 / 6.0)).epsilon(1e-2));
}

TEST_CASE("field is divergence free off the line") {
  const CylinderField f(random_config(3, 4));
  const double h = 1e-4;
  for (double x : {0.2, 1.1, 2.6})
    for (double y : {0.3, -0.7, 1.5}) {
      const double div = (f.field(x + h, y)[0] - f.field(x - h, y)[0] + f.field(x, y + h)[1] - f.field(x, y - h)[1]) / (2 * h);
      CHECK(std::abs(div) < 1e-6);
    }
}

TEST_CASE("definition-level W matches the closed form") {
  for (int n : {1, 2, 3}) {
    const PeriodicConfig c = PeriodicConfig::lattice(n);
    const double exact = periodic_w(c);
    WQuadratureOptions o;
    o.eta = 1e-3;
    const double w = w_quadrature(make_field(c), o);
    CHECK(std::abs(w - exact) / std::abs(exact) < 1e-2);
    // Leading finite-eta bias.
    CHECK(w - exact == doctest::Approx(4 * pi * o.eta).epsilon(0.1));
  }
  const PeriodicConfig r = random_config(4, 9);
  WQuadratureOptions o;
  o.eta = std::min(1e-6, r.min_gap() / 4);
  CHECK(w_quadrature(make_field(r), o) == doctest::Approx(periodic_w(r)).epsilon(1e-4));
}

TEST_CASE("w_quadrature argument checks") {
  const CylinderField f(PeriodicConfig::lattice(8));
  WQuadratureOptions big;
  big.eta = 0.6;
  CHECK_THROWS_AS(w_quadrature(f, big), DomainError);
  WQuadratureOptions short_cut;
  short_cut.y_cut = 6.0;
  CHECK_THROWS_AS(w_quadrature(f, short_cut), DomainError);
}
