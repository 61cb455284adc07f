#pragma once

#include <functional>
#include <span>
#include <vector>

namespace loggas::quad {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]. Rules are cached per n.
const Rule& gauss_legendre(int n);

/// Adaptive Gauss-Legendre: an interval is accepted when the 10-point
/// estimate agrees with the sum over its two halves within
/// max(abs_tol, rel_tol * |total|) scaled by the interval length.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 1e-14, int max_depth = 60);

/// As `integrate`, splitting [a, b] at every interior breakpoint first so
/// that integrable endpoint singularities (log, sqrt) sit on panel edges.
double integrate_split(const std::function<double(double)>& f, double a, double b,
                       std::span<const double> breaks, double rel_tol = 1e-10,
                       double abs_tol = 1e-14);

/// Fixed-order rule mapped onto [a, b].
double fixed(const std::function<double(double)>& f, double a, double b, int n);

}  // namespace loggas::quad
