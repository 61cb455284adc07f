#include <doctest.h>

#include <cmath>
#include <numbers>

#include "loggas/errors.hpp"
#include "loggas/model.hpp"
#include "loggas/quadrature.hpp"

using namespace loggas;
using std::numbers::pi;

namespace {

double rho(double x) { return std::abs(x) < 2 ? std::sqrt(4 - x * x) / (2 * pi) : 0.0; }

// zeta of the quadratic model for |x| > 2.
double zeta_closed(double x) {
  const double a = std::abs(x);
  const double r = std::sqrt(a * a - 4);
  return a * r / 4 - std::log((a + r) / 2);
}

// -int log|x - y| rho(y) dy by quadrature split at x.
double potential_oracle(double x) {
  const double br[] = {x};
  const bool inside = std::abs(x) < 2;
  auto f = [x](double y) { return y == x ? 0.0 : -std::log(std::abs(x - y)) * rho(y); };
  return inside ? quad::integrate_split(f, -2, 2, br, 1e-12, 1e-14) : quad::integrate(f, -2, 2, 1e-12, 1e-14);
}

}  // namespace

TEST_CASE("semicircle measure: density, mass, quantiles") {
  const EquilibriumMeasure mu = EquilibriumMeasure::semicircle();
  CHECK(mu.closed_form() == ClosedForm::semicircle);
  REQUIRE(mu.support().size() == 1);
  CHECK(mu.hull().lo == -2.0);
  CHECK(mu.total_mass() == doctest::Approx(1.0));
  CHECK(mu.density(0.0) == doctest::Approx(1 / pi));
  CHECK(mu.density(2.5) == 0.0);
  CHECK(mu.mass(-1, 1) == doctest::Approx(1.0 / 3 + std::sqrt(3.0) / (2 * pi)).epsilon(1e-13));
  CHECK(mu.mass(-1, 1) == doctest::Approx(quad::integrate(rho, -1, 1, 1e-13, 1e-15)).epsilon(1e-12));
  for (double p : {0.01, 0.3, 0.5, 0.77, 0.99}) CHECK(mu.mass(-2, mu.quantile(p)) == doctest::Approx(p).epsilon(1e-10));
}

TEST_CASE("quadratic model constants match independent quadratures") {
  const Model m = quadratic_model();
  const double alpha = quad::integrate([](double x) { return rho(x) > 0 ? rho(x) * std::log(2 * pi * rho(x)) : 0.0; },
                                       -2, 2, 1e-13, 1e-15);
  // F = int (U + V) dmu with U = 1/2 - x^2/4 on the support.
  const double F = quad::integrate([](double x) { return (0.5 - x * x / 4 + x * x / 2) * rho(x); }, -2, 2);
  CHECK(alpha == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(m.constants.alpha == doctest::Approx(alpha).epsilon(1e-8));
  CHECK(m.constants.mean_field_energy == doctest::Approx(F).epsilon(1e-8));
  CHECK(m.constants.mean_field_energy == doctest::Approx(0.75).epsilon(1e-8));
  CHECK(m.constants.c == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("log potential of the semicircle") {
  const EquilibriumMeasure mu = EquilibriumMeasure::semicircle();
  for (double x : {-1.9, -0.3, 0.0, 1.2, 2.5, -3.7, 6.0}) {
    CHECK(log_potential(mu, x) == doctest::Approx(potential_oracle(x)).epsilon(1e-8));
    CHECK(log_potential_quadrature(mu, x) == doctest::Approx(potential_oracle(x)).epsilon(1e-7));
  }
}

TEST_CASE("effective potential vanishes on the support and matches the closed form outside") {
  const Model m = quadratic_model();
  for (double x : {-1.5, 0.0, 1.99}) CHECK(std::abs(zeta(m.measure, m.potential, m.constants.c, x)) < 1e-8);
  CHECK(zeta_closed(3.0) == doctest::Approx(0.7147).epsilon(1e-4));
  const ZetaTable table(m.measure, m.potential, m.constants.c);
  for (double x : {2.1, 2.5, 3.0, -3.0, 4.4, 7.0, -12.0}) {
    CHECK(zeta(m.measure, m.potential, m.constants.c, x) == doctest::Approx(zeta_closed(x)).epsilon(1e-8));
    CHECK(table(x) == doctest::Approx(zeta_closed(x)).epsilon(1e-4));
  }
  CHECK(table(0.5) == 0.0);
}

TEST_CASE("grid solver reproduces the semicircle") {
  const Model m = numerical_model(quadratic(), -3, 3, 2000);
  double worst = 0.0;
  for (double x : m.measure.nodes()) worst = std::max(worst, std::abs(m.measure.density(x) - rho(x)));
  CHECK(worst < 2e-2);
  CHECK(m.measure.hull().lo == doctest::Approx(-2).epsilon(5e-3));
  CHECK(m.measure.hull().hi == doctest::Approx(2).epsilon(5e-3));
  CHECK(m.constants.c == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(m.constants.mean_field_energy == doctest::Approx(0.75).epsilon(1e-4));
  CHECK(m.constants.alpha == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(stationarity_residual(m.measure, m.potential, m.constants.c) < 1e-3);
}

TEST_CASE("shifted quadratic moves the semicircle") {
  const Model m = numerical_model(shifted_quadratic(1.0), -2, 4, 1200);
  CHECK(m.measure.hull().lo == doctest::Approx(-1).epsilon(1e-2));
  CHECK(m.measure.hull().hi == doctest::Approx(3).epsilon(1e-2));
  CHECK(m.measure.density(1.0) == doctest::Approx(1 / pi).epsilon(1e-2));
}

TEST_CASE("quartic equilibrium against its closed form") {
  // V = x^4/4: rho = (x^2 + b^2/2) sqrt(b^2 - x^2) / (2 pi), 3 b^4 / 16 = 1.
  const double b = std::pow(16.0 / 3.0, 0.25);
  auto exact = [b](double x) { return std::abs(x) < b ? (x * x + b * b / 2) * std::sqrt(b * b - x * x) / (2 * pi) : 0.0; };
  CHECK(quad::integrate(exact, -b, b) == doctest::Approx(1.0).epsilon(1e-9));
  const Model m = auto_model(quartic(), 1500);
  CHECK(m.measure.hull().hi == doctest::Approx(b).epsilon(1e-2));
  double worst = 0.0;
  for (double x : m.measure.nodes()) worst = std::max(worst, std::abs(m.measure.density(x) - exact(x)));
  CHECK(worst < 2e-2);
}

TEST_CASE("critical double well has support [-2, 2]") {
  const Model m = auto_model(double_well(), 1500);
  CHECK(m.measure.hull().lo == doctest::Approx(-2).epsilon(1e-2));
  CHECK(m.measure.hull().hi == doctest::Approx(2).epsilon(1e-2));
}

TEST_CASE("cell measures") {
  const EquilibriumMeasure mu = EquilibriumMeasure::from_cells({0, 1, 2, 3, 4}, {1, 0, 2, 1});
  CHECK(mu.total_mass() == doctest::Approx(1.0));
  CHECK(mu.support().size() == 2);
  CHECK(mu.in_support(0.5));
  CHECK_FALSE(mu.in_support(1.5));
  CHECK(mu.density(2.5) == doctest::Approx(0.5));
  CHECK(mu.mass(2, 4) == doctest::Approx(0.75));
  const EquilibriumMeasure u = EquilibriumMeasure::uniform(-1, 3);
  CHECK(u.density(0) == doctest::Approx(0.25));
  CHECK(u.quantile(0.5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(EquilibriumMeasure::from_cells({0, 1}, {1, 2}), DomainError);
}

TEST_CASE("solver box that cuts the support raises a bracket error") {
  CHECK_THROWS_AS(numerical_model(quadratic(), -1, 1, 400), BracketError);
}
