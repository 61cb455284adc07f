#include "loggas/potential.hpp"

#include <cmath>
#include <utility>

#include "loggas/errors.hpp"

namespace loggas {

namespace {

double horner(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> differentiate(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return d;
}

}  // namespace

double growth_radius(const std::function<double(double)>& deriv, double r_max) {
  // Scan geometrically outward; the last radius where the growth condition
  // fails bounds the check radius.
  double last_bad = 0.0;
  for (double r = 1e-3; r <= r_max; r *= 1.05) {
    for (double x : {r, -r}) {
      const double slope = 0.5 * deriv(x) - 1.0 / x;
      if (!(slope * x > 0.0)) last_bad = r;
    }
  }
  if (last_bad * 1.05 > r_max) throw DomainError("potential does not grow faster than 2 log|x|");
  return std::max(1.0, last_bad * 1.05);
}

Potential polynomial(std::vector<double> coeffs, std::string label) {
  while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
  const std::size_t degree = coeffs.empty() ? 0 : coeffs.size() - 1;
  if (degree < 2 || degree % 2 != 0 || !(coeffs.back() > 0.0))
    throw DomainError("polynomial potential needs even degree >= 2 and positive leading coefficient");

  Potential v;
  auto d1 = differentiate(coeffs);
  auto d2 = differentiate(d1);
  v.eval = [c = coeffs](double x) { return horner(c, x); };
  v.deriv = [c = d1](double x) { return horner(c, x); };
  v.deriv2 = [c = d2](double x) { return horner(c, x); };
  v.coeffs = std::move(coeffs);
  v.label = std::move(label);
  v.growth_check_radius = growth_radius(v.deriv);
  return v;
}

Potential quadratic() { return polynomial({0.0, 0.0, 0.5}, "quadratic"); }

Potential shifted_quadratic(double a) {
  return polynomial({0.5 * a * a, -a, 0.5}, "quadratic-shifted");
}

Potential quartic() { return polynomial({0.0, 0.0, 0.0, 0.0, 0.25}, "quartic"); }

Potential double_well() { return polynomial({0.0, 0.0, -1.0, 0.0, 0.25}, "double-well"); }

Potential interpolate(const Potential& a, const Potential& b, double t) {
  if (!a.coeffs.empty() && !b.coeffs.empty()) {
    std::vector<double> c(std::max(a.coeffs.size(), b.coeffs.size()), 0.0);
    for (std::size_t k = 0; k < a.coeffs.size(); ++k) c[k] += (1.0 - t) * a.coeffs[k];
    for (std::size_t k = 0; k < b.coeffs.size(); ++k) c[k] += t * b.coeffs[k];
    return polynomial(std::move(c), a.label + "->" + b.label);
  }
  Potential v;
  v.eval = [=](double x) { return (1.0 - t) * a.eval(x) + t * b.eval(x); };
  v.deriv = [=](double x) { return (1.0 - t) * a.deriv(x) + t * b.deriv(x); };
  v.deriv2 = [=](double x) { return (1.0 - t) * a.deriv2(x) + t * b.deriv2(x); };
  v.label = a.label + "->" + b.label;
  v.growth_check_radius = growth_radius(v.deriv);
  return v;
}

Potential potential_by_name(const std::string& name, const std::vector<double>& coeffs) {
  if (name == "quadratic") return quadratic();
  if (name == "quartic") return quartic();
  if (name == "double-well") return double_well();
  if (name == "polynomial") return polynomial(coeffs);
  throw DomainError("unknown potential '" + name +
                    "' (expected quadratic, quartic, double-well or polynomial)");
}

}  // namespace loggas
