#pragma once

#include <span>
#include <vector>

#include "loggas/model.hpp"
#include "loggas/potential.hpp"

namespace loggas {

/// Sorted particle positions at the original (macroscopic) scale.
class Configuration {
 public:
  Configuration() = default;
  /// Sorts the points; throws DegenerateConfiguration on repeated points.
  explicit Configuration(std::vector<double> points);

  std::size_t size() const { return points_.size(); }
  const std::vector<double>& points() const { return points_; }
  std::span<const double> span() const { return points_; }

 private:
  std::vector<double> points_;
};

struct EnergyBreakdown {
  double w_n = 0.0;
  double leading = 0.0;   // n^2 F(mu0)
  double log_term = 0.0;  // n log n
  double f_n = 0.0;
  double f_hat = 0.0;
  double zeta_sum = 0.0;  // sum_i zeta(x_i)
};

/// w_n = -sum_{i != j} log|x_i - x_j| + n sum_i V(x_i). O(n^2).
double energy(std::span<const double> points, const Potential& v);
double energy(const Configuration& config, const Potential& v);

/// d w_n / d x_i = -2 sum_{j != i} 1/(x_i - x_j) + n V'(x_i).
std::vector<double> gradient(std::span<const double> points, const Potential& v);
std::vector<double> gradient(const Configuration& config, const Potential& v);

/// Change of w_n when particle i moves to `x_new`, in O(n). Returns +inf if
/// x_new coincides with another particle.
double energy_delta(std::span<const double> points, std::size_t i, double x_new,
                    const Potential& v);

/// Effective potential at a point: 0 on the support of mu (where zeta
/// vanishes identically) and max(0, zeta) elsewhere.
double effective_zeta(const EquilibriumMeasure& mu, const Potential& v, double c, double x);

/// Splits w_n = n^2 F(mu0) - n log n + n F_n and records
/// F_hat_n = F_n - 2 sum_i zeta(x_i).
EnergyBreakdown breakdown(const Configuration& config, const Potential& v,
                          const EquilibriumMeasure& mu, const ModelConstants& consts);
/// Same split from a precomputed w_n and zeta sum.
EnergyBreakdown breakdown_from(double w_n, double zeta_sum, std::size_t n,
                               const ModelConstants& consts);

/// D(x0, R) = #{i : |x_i - x0| <= R/n} - n mu0([x0 - R/n, x0 + R/n]) with n
/// the number of points (boundary points count fully).
double discrepancy(const Configuration& config, const EquilibriumMeasure& mu, double x0, double r);
/// As above with an explicit particle number n (used when the window scale
/// should not follow the configuration size, e.g. for an empty set).
double discrepancy(std::span<const double> points, std::size_t n, const EquilibriumMeasure& mu,
                   double x0, double r);

}  // namespace loggas
