#pragma once

#include <vector>

namespace loggas {

/// N points on the circle R/(N Z): a density-one periodic configuration.
class PeriodicConfig {
 public:
  /// Points are reduced modulo N and sorted. Throws DomainError if the count
  /// differs from N, and DegenerateConfiguration if two points coincide
  /// (closer than 1e-12 N on the circle).
  PeriodicConfig(int period, std::vector<double> points);

  /// The integer lattice {0, 1, ..., N-1}.
  static PeriodicConfig lattice(int period, double shift = 0.0);

  int period() const { return period_; }
  const std::vector<double>& points() const { return points_; }
  /// Smallest circular distance between two distinct points.
  double min_gap() const;
  /// Every point moved by t (mod N).
  PeriodicConfig translated(double t) const;

 private:
  int period_;
  std::vector<double> points_;
};

/// Renormalized energy of the periodic configuration:
/// -(pi/N) sum_{i != j} log|2 sin(pi (a_i - a_j)/N)| - pi log(2 pi / N).
double periodic_w(const PeriodicConfig& config);

/// min over A_m of W, attained by the lattice (1/m) Z: -pi m log(2 pi m).
double lattice_min(double m);

/// Energy of a density-one configuration dilated to density m:
/// m (w_unit - pi log m).
double rescale_w(double w_unit, double m);

}  // namespace loggas
