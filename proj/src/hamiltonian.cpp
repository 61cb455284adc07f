#include "loggas/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "loggas/errors.hpp"

namespace loggas {

Configuration::Configuration(std::vector<double> points) : points_(std::move(points)) {
  for (double x : points_)
    if (!std::isfinite(x)) throw DomainError("configuration has a non-finite point");
  std::sort(points_.begin(), points_.end());
  if (std::adjacent_find(points_.begin(), points_.end()) != points_.end())
    throw DegenerateConfiguration("configuration has coincident points (energy diverges)");
}

double energy(std::span<const double> x, const Potential& v) {
  const std::size_t n = x.size();
  double pair = 0.0, carry = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::abs(x[i] - x[j]);
      if (d == 0.0) throw DegenerateConfiguration("coincident points: energy diverges");
      // Compensated: lattice-level cancellations are checked to 1e-9 relative.
      const double term = -2.0 * std::log(d);
      const double t = pair + term;
      carry += std::abs(pair) >= std::abs(term) ? (pair - t) + term : (term - t) + pair;
      pair = t;
    }
  }
  double confinement = 0.0;
  for (double xi : x) confinement += v(xi);
  return (pair + carry) + static_cast<double>(n) * confinement;
}

double energy(const Configuration& config, const Potential& v) { return energy(config.span(), v); }

std::vector<double> gradient(std::span<const double> x, const Potential& v) {
  const std::size_t n = x.size();
  std::vector<double> g(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = x[i] - x[j];
      if (d == 0.0) throw DegenerateConfiguration("coincident points: gradient diverges");
      g[i] -= 2.0 / d;
      g[j] += 2.0 / d;
    }
    g[i] += static_cast<double>(n) * v.deriv(x[i]);
  }
  return g;
}

std::vector<double> gradient(const Configuration& config, const Potential& v) {
  return gradient(config.span(), v);
}

double energy_delta(std::span<const double> x, std::size_t i, double x_new, const Potential& v) {
  const double x_old = x[i];
  double d_pair = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j == i) continue;
    const double dn = std::abs(x_new - x[j]);
    if (dn == 0.0) return std::numeric_limits<double>::infinity();
    d_pair += std::log(std::abs(x_old - x[j]) / dn);
  }
  return 2.0 * d_pair + static_cast<double>(x.size()) * (v(x_new) - v(x_old));
}

double effective_zeta(const EquilibriumMeasure& mu, const Potential& v, double c, double x) {
  if (mu.in_support(x)) return 0.0;
  return std::max(0.0, zeta(mu, v, c, x));
}

EnergyBreakdown breakdown_from(double w_n, double zeta_sum, std::size_t n,
                               const ModelConstants& consts) {
  EnergyBreakdown b;
  const double nn = static_cast<double>(n);
  b.w_n = w_n;
  b.leading = nn * nn * consts.mean_field_energy;
  b.log_term = n > 0 ? nn * std::log(nn) : 0.0;
  b.f_n = n > 0 ? (w_n - b.leading + b.log_term) / nn : 0.0;
  b.zeta_sum = zeta_sum;
  b.f_hat = b.f_n - 2.0 * zeta_sum;
  return b;
}

EnergyBreakdown breakdown(const Configuration& config, const Potential& v,
                          const EquilibriumMeasure& mu, const ModelConstants& consts) {
  double zsum = 0.0;
  for (double x : config.points()) zsum += effective_zeta(mu, v, consts.c, x);
  return breakdown_from(energy(config, v), zsum, config.size(), consts);
}

double discrepancy(std::span<const double> points, std::size_t n, const EquilibriumMeasure& mu,
                   double x0, double r) {
  if (!(r > 0.0)) throw DomainError("discrepancy radius R must be positive");
  if (n == 0) throw DomainError("discrepancy needs a positive particle number");
  const double nn = static_cast<double>(n);
  const double lo = x0 - r / nn, hi = x0 + r / nn;
  const auto count = std::count_if(points.begin(), points.end(),
                                   [&](double x) { return x >= lo && x <= hi; });
  return static_cast<double>(count) - nn * mu.mass(lo, hi);
}

double discrepancy(const Configuration& config, const EquilibriumMeasure& mu, double x0, double r) {
  return discrepancy(config.span(), config.size(), mu, x0, r);
}

}  // namespace loggas
