#include <doctest.h>

#include <cmath>
#include <numbers>

#include "loggas/quadrature.hpp"

using namespace loggas;

TEST_CASE("Gauss-Legendre rules integrate polynomials of degree 2n-1 exactly") {
  for (int n : {1, 2, 5, 10, 16}) {
    const auto& r = quad::gauss_legendre(n);
    double wsum = 0.0;
    for (double w : r.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    const int deg = 2 * n - 1 - (2 * n - 1) % 2;  // largest even degree <= 2n-1
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += r.weights[k] * std::pow(r.nodes[k], deg);
    CHECK(s == doctest::Approx(2.0 / (deg + 1)).epsilon(1e-13));
  }
}

TEST_CASE("adaptive integration handles endpoint singularities") {
  CHECK(quad::integrate([](double x) { return std::log(x); }, 0.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(quad::integrate([](double x) { return std::sqrt(1 - x * x); }, -1.0, 1.0) ==
        doctest::Approx(std::numbers::pi / 2).epsilon(1e-10));
  CHECK(quad::integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0) ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("split integration places interior singularities on panel edges") {
  const double b[] = {0.3};
  const double v = quad::integrate_split([](double x) { return std::log(std::abs(x - 0.3)); }, 0.0, 1.0, b);
  const double exact = 0.3 * std::log(0.3) - 0.3 + 0.7 * std::log(0.7) - 0.7;
  CHECK(v == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("fixed rule on a mapped interval") {
  CHECK(quad::fixed([](double x) { return x * x * x; }, 1.0, 3.0, 4) == doctest::Approx(20.0));
}
