#include "loggas/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "loggas/errors.hpp"

namespace loggas {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return r;
}

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

PeriodicConfig::PeriodicConfig(int period, std::vector<double> points)
    : period_(period), points_(std::move(points)) {
  if (period_ < 1) throw DomainError("period N must be a positive integer");
  if (static_cast<int>(points_.size()) != period_)
    throw DomainError("periodic configuration needs exactly N points");
  for (double& p : points_) {
    if (!std::isfinite(p)) throw DomainError("periodic configuration has a non-finite point");
    p = wrap(p, period_);
  }
  std::sort(points_.begin(), points_.end());
  if (period_ > 1 && min_gap() < 1e-12 * period_)
    throw DegenerateConfiguration("degenerate configuration: two points coincide modulo N");
}

PeriodicConfig PeriodicConfig::lattice(int period, double shift) {
  std::vector<double> pts(std::max(period, 0));
  for (int i = 0; i < period; ++i) pts[i] = i + shift;
  return PeriodicConfig(period, std::move(pts));
}

double PeriodicConfig::min_gap() const {
  if (points_.size() < 2) return static_cast<double>(period_);
  double g = points_.front() + period_ - points_.back();
  for (std::size_t i = 1; i < points_.size(); ++i) g = std::min(g, points_[i] - points_[i - 1]);
  return g;
}

PeriodicConfig PeriodicConfig::translated(double t) const {
  std::vector<double> pts = points_;
  for (double& p : pts) p += t;
  return PeriodicConfig(period_, std::move(pts));
}

double periodic_w(const PeriodicConfig& config) {
  const int n = config.period();
  const auto& a = config.points();
  CompensatedSum s;
  // Each unordered pair counted twice.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      s.add(2.0 * std::log(std::abs(2.0 * std::sin(kPi * (a[i] - a[j]) / n))));
  return -(kPi / n) * s.value() - kPi * std::log(2.0 * kPi / n);
}

double lattice_min(double m) {
  if (!(m > 0.0)) throw DomainError("lattice_min requires density m > 0");
  return -kPi * m * std::log(2.0 * kPi * m);
}

double rescale_w(double w_unit, double m) {
  if (!(m > 0.0)) throw DomainError("rescale_w requires density m > 0");
  return m * (w_unit - kPi * std::log(m));
}

}  // namespace loggas
