#pragma once

#include <functional>
#include <string>
#include <vector>

namespace loggas {

/// Confining external field V of the log gas.
///
/// All built-in potentials are polynomials, so eval/deriv/deriv2 are exact.
/// `growth_check_radius` is a radius beyond which V/2 - log|x| is increasing
/// in |x|; it is used to size integration boxes and sampling brackets.
struct Potential {
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  std::function<double(double)> deriv2;
  double growth_check_radius = 1.0;
  std::string label;
  /// Monomial coefficients c0 + c1 x + c2 x^2 + ...; empty for non-polynomial V.
  std::vector<double> coeffs;

  double operator()(double x) const { return eval(x); }
};

/// V(x) = sum_k coeffs[k] x^k. Throws DomainError unless the degree is even
/// and at least 2 with a positive leading coefficient.
Potential polynomial(std::vector<double> coeffs, std::string label = "polynomial");

/// V(x) = x^2/2, the canonical quadratic model (semicircle on [-2, 2]).
Potential quadratic();
/// V(x) = (x - a)^2 / 2.
Potential shifted_quadratic(double a);
/// V(x) = x^4 / 4.
Potential quartic();
/// V(x) = x^4/4 - x^2.
Potential double_well();

/// (1 - t) a + t b, pointwise. Polynomial coefficients are mixed when both
/// inputs carry them.
Potential interpolate(const Potential& a, const Potential& b, double t);

/// Named built-in lookup: "quadratic", "quartic", "double-well", or
/// "polynomial" (which uses `coeffs`).
Potential potential_by_name(const std::string& name, const std::vector<double>& coeffs = {});

/// Smallest R on a scan grid such that d/dx (V/2 - log|x|) has the sign of x
/// for all sampled |x| >= R.
double growth_radius(const std::function<double(double)>& deriv, double r_max = 1e4);

}  // namespace loggas
