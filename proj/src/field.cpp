#include "loggas/field.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "loggas/errors.hpp"
#include "loggas/quadrature.hpp"

namespace loggas {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

CylinderField::CylinderField(PeriodicConfig config) : config_(std::move(config)) {}

CylinderField make_field(const PeriodicConfig& config) { return CylinderField(config); }

double CylinderField::potential(double x, double y) const {
  const int n = config_.period();
  const double q = std::exp(-2.0 * kPi * std::abs(y) / n);
  const double one_minus_q = -std::expm1(-2.0 * kPi * std::abs(y) / n);
  double h = 0.0;
  for (double a : config_.points()) {
    const double s = std::sin(kPi * (x - a) / n);
    h -= 0.5 * std::log(one_minus_q * one_minus_q + 4.0 * q * s * s);
  }
  return h;
}

std::array<double, 2> CylinderField::field(double x, double y) const {
  const int n = config_.period();
  const double q = std::exp(-2.0 * kPi * std::abs(y) / n);
  const double one_minus_q = -std::expm1(-2.0 * kPi * std::abs(y) / n);
  double ex = 0.0, ey = 0.0;
  for (double a : config_.points()) {
    const double u = kPi * (x - a) / n;
    const double s = std::sin(u);
    const double d = one_minus_q * one_minus_q + 4.0 * q * s * s;
    ex += 2.0 * q * std::sin(2.0 * u) / d;
    ey += 2.0 * q * (std::cos(2.0 * u) - q) / d;
  }
  const double sign = (y > 0.0) - (y < 0.0);
  return {kPi / n * ex, sign * kPi / n * ey};
}

double CylinderField::field_norm2(double x, double y) const {
  const auto e = field(x, y);
  return e[0] * e[0] + e[1] * e[1];
}

double w_quadrature(const CylinderField& field, const WQuadratureOptions& opts) {
  const PeriodicConfig& cfg = field.config();
  const int n = cfg.period();
  const auto& a = cfg.points();
  const double gap = cfg.min_gap();
  if (!(opts.eta > 0.0) || opts.eta >= 0.5 * gap)
    throw DomainError("eta too large: must be below half the minimal gap (" +
                      std::to_string(0.5 * gap) + ")");
  if (opts.y_cut < n) throw DomainError("y_cut must be at least the period N");
  if (opts.nodes_per_unit < 1) throw DomainError("nodes_per_unit must be positive");

  const double box = 0.45 * gap;  // half-width and height of the box around each charge
  const double tol = opts.rel_tol;
  std::mt19937_64 rng(opts.jitter_seed);

  auto attempt = [&](double jitter) {
    bool finite = true;
    auto e2 = [&](double x, double y) {
      const double v = field.field_norm2(x, y);
      if (!std::isfinite(v)) finite = false;
      return std::isfinite(v) ? v : 0.0;
    };
    auto breaks_for = [&](double lo, double hi) {
      std::vector<double> b;
      const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) * opts.nodes_per_unit)));
      for (int k = 1; k < panels; ++k) b.push_back(lo + (hi - lo) * (k + jitter) / panels);
      return b;
    };
    auto rectangle = [&](double x0, double x1, double y0, double y1) {
      const auto xb = breaks_for(x0, x1);
      auto row = [&](double y) {
        return quad::integrate_split([&](double x) { return e2(x, y); }, x0, x1, xb, tol);
      };
      return quad::integrate_split(row, y0, y1, breaks_for(y0, y1), tol);
    };
    // Upper half of the box around charge p minus the half-disc of radius eta,
    // in log-polar coordinates (the |E|^2 r^2 integrand is bounded at p).
    auto polar_box = [&](double p) {
      auto rmax = [&](double th) {
        const double c = std::abs(std::cos(th)), s = std::sin(th);
        return box / std::max(c, s);
      };
      auto ray = [&](double th) {
        auto f = [&](double t) {
          const double r = std::exp(t);
          return e2(p + r * std::cos(th), r * std::sin(th)) * r * r;
        };
        return quad::integrate(f, std::log(opts.eta), std::log(rmax(th)), tol);
      };
      const double cuts[] = {0.25 * kPi, 0.75 * kPi};
      return quad::integrate_split(ray, 0.0, kPi, cuts, tol);
    };

    double upper = 0.0;
    for (int i = 0; i < n; ++i) {
      upper += polar_box(a[i]);
      const double next = i + 1 < n ? a[i + 1] : a[0] + n;
      upper += rectangle(a[i] + box, next - box, 0.0, box);
    }
    // Band above the boxes, graded geometrically in y.
    const double x0 = a[0] - box, x1 = x0 + n;
    for (double y0 = box; y0 < opts.y_cut;) {
      const double y1 = std::min(2.0 * y0, opts.y_cut);
      upper += rectangle(x0, x1, y0, y1);
      y0 = y1;
    }
    // Tail: |E|^2 ~ A exp(-4 pi (y - y_cut)/N) above the cut.
    const double mean_e2 =
        quad::integrate_split([&](double x) { return e2(x, opts.y_cut); }, x0, x1,
                              breaks_for(x0, x1), 1e-8) / n;
    upper += n * mean_e2 * n / (4.0 * kPi);

    // (1/2) of the mirror-symmetric full-plane integral equals the upper half.
    const double w = upper / n + kPi * std::log(opts.eta);
    return finite ? std::optional<double>(w) : std::nullopt;
  };

  std::uniform_real_distribution<double> unif(-0.25, 0.25);
  double jitter = 0.0;
  for (int tries = 0; tries < 3; ++tries) {
    if (auto w = attempt(jitter)) return *w;
    jitter = unif(rng);
  }
  throw ConvergenceError("w_quadrature: non-finite integrand after 3 jittered attempts",
                         std::numeric_limits<double>::quiet_NaN());
}

}  // namespace loggas
