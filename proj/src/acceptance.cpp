#include "loggas/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "loggas/errors.hpp"
#include "loggas/fekete.hpp"
#include "loggas/field.hpp"
#include "loggas/hamiltonian.hpp"
#include "loggas/model.hpp"
#include "loggas/partition.hpp"
#include "loggas/quadrature.hpp"
#include "loggas/renorm.hpp"
#include "loggas/sampler.hpp"

namespace loggas::acceptance {

namespace {

using std::numbers::pi;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double semicircle_density(double x) { return std::abs(x) < 2.0 ? std::sqrt(4.0 - x * x) / (2.0 * pi) : 0.0; }

// Semicircle mass of [a, b] and alpha by direct quadrature of the density.
double semicircle_mass(double a, double b) {
  return quad::integrate_split(semicircle_density, std::max(a, -2.0), std::min(b, 2.0), {}, 1e-13, 1e-15);
}

double semicircle_alpha() {
  return quad::integrate(
      [](double x) {
        const double m = semicircle_density(x);
        return m > 0.0 ? m * std::log(2.0 * pi * m) : 0.0;
      },
      -2.0, 2.0, 1e-13, 1e-15);
}

std::vector<double> random_points(std::mt19937_64& rng, int n, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> x(n);
  for (double& xi : x) xi = g(rng);
  std::sort(x.begin(), x.end());
  return x;
}

// w_n(x with x_i moved by d) - w_n(x), term by term so that only O(1)
// quantities cancel.
double move_cost(const std::vector<double>& x, std::size_t i, double d, const Potential& v) {
  const double n = static_cast<double>(x.size());
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (j != i) s -= 2.0 * std::log1p(d / (x[i] - x[j]));
  return s + n * (v(x[i] + d) - v(x[i]));
}

Result c1(const Options&) {
  const double target = -pi * std::log(2.0 * pi);
  double worst = 0.0;
  for (int n = 1; n <= 64; ++n) worst = std::max(worst, std::abs(periodic_w(PeriodicConfig::lattice(n)) - target));
  return {1, "lattice value", worst <= 1e-12, fmt("max |W - (-pi log 2pi)| = %.2e over N=1..64", worst), 0, 1.0};
}

Result c2(const Options& o) {
  const double floor = -pi * std::log(2.0 * pi) - 1e-12;
  std::mt19937_64 rng(split_seed(o.seed, 2));
  std::uniform_int_distribution<int> pick_n(1, 32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int below = 0, accepted = 0;
  double lowest = INFINITY;
  while (accepted < 1000) {
    const int n = pick_n(rng);
    std::vector<double> a(n);
    for (double& x : a) x = n * u(rng);
    try {
      const double w = periodic_w(PeriodicConfig(n, a));
      lowest = std::min(lowest, w);
      below += w < floor;
      ++accepted;
    } catch (const DegenerateConfiguration&) {
    }
  }
  int not_increased = 0, trials = 0;
  double smallest_rise = INFINITY;
  for (int n = 2; n <= 32; ++n) {
    const double base = periodic_w(PeriodicConfig::lattice(n));
    for (int t = 0; t < 10; ++t, ++trials) {
      std::vector<double> a(n);
      int positive = 0;
      for (int i = 0; i < n; ++i) {
        const double s = u(rng) < 0.5 ? -1.0 : 1.0;
        a[i] = i + 1e-2 * s;
        positive += s > 0.0;
      }
      // A common shift is a translation, which leaves W unchanged.
      if (positive == 0 || positive == n) a[0] = positive == n ? -1e-2 : 1e-2;
      const double rise = periodic_w(PeriodicConfig(n, a)) - base;
      smallest_rise = std::min(smallest_rise, rise);
      not_increased += !(rise > 0.0);
    }
  }
  const bool ok = below == 0 && not_increased == 0;
  return {2, "lattice optimality", ok,
          fmt("1000 random configs: %d below bound (lowest W %.6f); %d/%d perturbations rose, min rise %.2e",
              below, lowest, trials - not_increased, trials, smallest_rise),
          0, 10.0};
}

Result c3(const Options& o) {
  double worst = 0.0;
  int count = 0;
  auto check = [&](const PeriodicConfig& cfg, double eta) {
    WQuadratureOptions q;
    q.eta = eta;
    q.y_cut = std::max(6.0, static_cast<double>(cfg.period()));
    const double exact = periodic_w(cfg);
    const double approx = w_quadrature(make_field(cfg), q);
    worst = std::max(worst, std::abs(approx - exact) / std::abs(exact));
    ++count;
  };
  for (int n : {1, 2, 8}) check(PeriodicConfig::lattice(n), 1e-3);
  std::mt19937_64 rng(split_seed(o.seed, 3));
  std::uniform_int_distribution<int> pick_n(1, 16);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int random = 0;
  while (random < 20) {
    const int n = pick_n(rng);
    std::vector<double> a(n);
    for (double& x : a) x = n * u(rng);
    try {
      PeriodicConfig cfg(n, a);
      const double eta = n == 1 ? 1e-6 : std::min(1e-6, cfg.min_gap() / 4.0);
      check(cfg, eta);
      ++random;
    } catch (const DegenerateConfiguration&) {
    }
  }
  return {3, "definition vs closed form", worst <= 1e-2,
          fmt("max relative error %.2e over %d configs (3 lattices, 20 random N<=16)", worst, count), 0, 300.0};
}

Result c4(const Options& o) {
  const Model m = quadratic_model();
  double worst = 0.0, worst_grad = 0.0;
  for (int n = 2; n <= 64; ++n) {
    const Configuration oracle = hermite_oracle(n);
    const FeketeResult r = minimize(n, m, o.seed);
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(r.config.points()[i] - oracle.points()[i]));
    double g = 0.0;
    for (double gi : gradient(oracle, m.potential)) g = std::max(g, std::abs(gi));
    worst_grad = std::max(worst_grad, g / n);
  }
  return {4, "Fekete vs Hermite oracle", worst <= 1e-8 && worst_grad <= 1e-9,
          fmt("max sup-norm gap %.2e (tol 1e-8); max |grad|/n at oracle %.2e (tol 1e-9)", worst, worst_grad), 0,
          60.0};
}

std::vector<Result> c5(const Options& o) {
  const Model m = quadratic_model();
  const double a = semicircle_alpha();
  std::vector<double> f;
  std::string list;
  for (int n : {16, 32, 64, 128, 256}) {
    f.push_back(minimize(n, m, o.seed).breakdown.f_n);
    list += fmt("%s%d:%.5f", list.empty() ? "" : " ", n, f.back());
  }
  auto monotone_to = [&](double target) {
    bool dec = true;
    for (std::size_t k = 1; k < f.size(); ++k) dec = dec && std::abs(f[k] - target) < std::abs(f[k - 1] - target);
    return dec;
  };
  const double gap = std::abs(f.back() - a);
  Result main{5, "next-order ground state", monotone_to(a) && gap < 0.15,
              fmt("f_n %s; |f_n - alpha| decreasing: %s; |f_256 - alpha| = %.4f (tol 0.15), alpha = %.6f",
                  list.c_str(), monotone_to(a) ? "yes" : "no", gap, a),
              0, 600.0};
  const double gap_neg = std::abs(f.back() + a);
  Result info{5, "next-order ground state, limit -alpha", monotone_to(-a) && gap_neg < 0.15,
              fmt("|f_n + alpha| decreasing: %s; |f_256 + alpha| = %.4f", monotone_to(-a) ? "yes" : "no", gap_neg),
              0, 600.0};
  info.informational = true;
  return {main, info};
}

Result c6(const Options&) {
  double worst2 = 0.0, worst3 = 0.0;
  for (double b : {0.5, 1.0, 2.0, 4.0}) {
    const double e = mehta_log_z(2, b);
    worst2 = std::max(worst2, std::abs(quadrature_log_z(2, b, quadratic()) - e) / std::abs(e));
  }
  for (double b : {1.0, 2.0}) {
    const double e = mehta_log_z(3, b);
    worst3 = std::max(worst3, std::abs(quadrature_log_z(3, b, quadratic()) - e) / std::abs(e));
  }
  const double log_pi = std::abs(mehta_log_z(2, 2.0) - std::log(pi));
  return {6, "partition oracles", worst2 <= 1e-6 && worst3 <= 1e-5 && log_pi <= 1e-10,
          fmt("n=2 rel %.2e (tol 1e-6); n=3 rel %.2e (tol 1e-5); |log Z_2(2) - log pi| = %.2e", worst2, worst3,
              log_pi),
          0, 120.0};
}

Result c7(const Options&) {
  const ModelConstants k = quadratic_model().constants;
  double worst = 0.0;
  for (int n = 8; n <= 512; ++n)
    worst = std::max(worst, std::abs(next_order_report(n, 2.0, k, mehta_log_z(n, 2.0)).next_order));
  const double limit = next_order_report(256, 1e4, k, mehta_log_z(256, 1e4)).next_order;
  const bool ok = worst <= 1.0 && std::abs(std::abs(limit) - 0.25) <= 0.05;
  return {7, "next-order bound and limit", ok,
          fmt("max |next_order| at beta=2, n=8..512: %.4f (tol 1); next_order(256, 1e4) = %+.5f (sign %s)", worst,
              limit, limit >= 0 ? "+alpha/2" : "-alpha/2"),
          0, 10.0};
}

Result c8(const Options& o) {
  const Model m = quadratic_model();
  SamplerConfig cfg;
  cfg.n = 32;
  cfg.beta = 2.0;
  cfg.chains = 8;
  cfg.steps = 100000;
  cfg.burn_in = 5000;
  cfg.thinning = 10;
  cfg.seed = split_seed(o.seed, 8);
  cfg.threads = o.threads;
  const GasStatistics s = run(cfg, m);
  const double target = 32.0 * semicircle_mass(-1.0, 1.0);
  const double z = (s.window_count.mean - target) / s.window_count.se;
  const bool ok = std::abs(z) <= 3.0 && s.r_hat <= 1.1 && s.max_audit_error <= 1e-8;
  return {8, "Gibbs macroscopics", ok,
          fmt("count in [-1,1] %.4f +- %.4f vs %.4f (z = %+.2f); R-hat %.4f; audit %.1e", s.window_count.mean,
              s.window_count.se, target, z, s.r_hat, s.max_audit_error),
          0, 600.0};
}

Result c9(const Options& o) {
  const Model m = quadratic_model();
  const std::vector<double> betas{1.0, 5.0, 20.0, 50.0};
  std::vector<double> means;
  std::string list;
  for (double b : betas) {
    double sum = 0.0;
    for (int seed = 0; seed < 5; ++seed) {
      SamplerConfig cfg;
      cfg.n = 32;
      cfg.beta = b;
      cfg.chains = 2;
      cfg.steps = 20000;
      cfg.burn_in = 5000;
      cfg.seed = split_seed(o.seed, 900 + static_cast<std::uint64_t>(seed));
      cfg.threads = o.threads;
      sum += run(cfg, m).spacing_variance;
    }
    means.push_back(sum / 5.0);
    list += fmt("%sbeta=%g:%.4f", list.empty() ? "" : " ", b, means.back());
  }
  bool dec = true;
  for (std::size_t k = 1; k < means.size(); ++k) dec = dec && means[k] < means[k - 1];
  return {9, "crystallization trend", dec, "mean spacing variance " + list, 0, 1200.0};
}

Result c10(const Options&) {
  const Model m = numerical_model(quadratic(), -3.0, 3.0, 2000);
  double worst = 0.0;
  const auto nodes = m.measure.nodes();
  for (double x : nodes) worst = std::max(worst, std::abs(m.measure.density(x) - semicircle_density(x)));
  const double res = stationarity_residual(m.measure, m.potential, m.constants.c);
  return {10, "equilibrium solver", worst <= 2e-2 && res <= 1e-3,
          fmt("sup |m - semicircle| = %.2e (tol 2e-2); stationarity residual %.2e (tol 1e-3)", worst, res), 0,
          120.0};
}

Result c11(const Options& o) {
  std::mt19937_64 rng(split_seed(o.seed, 11));
  std::uniform_int_distribution<int> pick_n(2, 40);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Potential potentials[] = {quadratic(), quartic(), double_well()};
  double worst_fd = 0.0;
  for (int c = 0; c < 50; ++c) {
    const int n = pick_n(rng);
    const Potential& v = potentials[c % 3];
    std::vector<double> x = random_points(rng, n, 1.0);
    const std::vector<double> g = gradient(x, v);
    double gmax = 0.0, err = 0.0;
    for (int i = 0; i < n; ++i) {
      double gap = 1.0;
      if (i > 0) gap = std::min(gap, x[i] - x[i - 1]);
      if (i + 1 < n) gap = std::min(gap, x[i + 1] - x[i]);
      const double h = 1e-3 * gap;
      const double fd = (8.0 * (move_cost(x, i, h, v) - move_cost(x, i, -h, v)) -
                         (move_cost(x, i, 2.0 * h, v) - move_cost(x, i, -2.0 * h, v))) /
                        (12.0 * h);
      err = std::max(err, std::abs(fd - g[i]));
      gmax = std::max(gmax, std::abs(g[i]));
    }
    worst_fd = std::max(worst_fd, err / std::max(1.0, gmax));
  }

  int failures = 0, points = 0;
  double worst_mirror = 0.0, worst_div = 0.0, worst_decay = 0.0;
  std::uniform_int_distribution<int> pick_N(1, 8);
  for (int c = 0; c < 10; ++c) {
    const int n = pick_N(rng);
    std::vector<double> a(n);
    for (double& t : a) t = n * u(rng);
    PeriodicConfig cfg = c == 0 ? PeriodicConfig::lattice(4) : PeriodicConfig(n, a);
    const CylinderField f = make_field(cfg);
    const int N = cfg.period();
    for (int k = 0; k < 100; ++k, ++points) {
      const double x = N * u(rng);
      const double y = 0.05 + 2.0 * u(rng);
      bool near = false;
      for (double p : cfg.points()) {
        const double dx = std::remainder(x - p, static_cast<double>(N));
        near = near || std::hypot(dx, y) < 0.1;
      }
      if (near) continue;
      const auto e = f.field(x, y), em = f.field(x, -y);
      const double mirror = std::max({std::abs(f.potential(x, y) - f.potential(x, -y)), std::abs(e[0] - em[0]),
                                      std::abs(e[1] + em[1])});
      worst_mirror = std::max(worst_mirror, mirror);
      const double h = 1e-4;
      const double div = (f.field(x + h, y)[0] - f.field(x - h, y)[0] + f.field(x, y + h)[1] -
                          f.field(x, y - h)[1]) / (2.0 * h);
      const double scale = std::max(1.0, std::sqrt(f.field_norm2(x, y))) / (0.1 * 0.1);
      worst_div = std::max(worst_div, std::abs(div) / scale);
      // |E| <= 2 pi q (2 + q) / (1 - q)^2 with q = exp(-2 pi |y| / N), at height y + N.
      const double yy = y + N;
      const double q = std::exp(-2.0 * pi * yy / N);
      const double bound = 2.0 * pi * q * (2.0 + q) / ((1.0 - q) * (1.0 - q));
      const double ratio = std::sqrt(f.field_norm2(x, yy)) / bound;
      worst_decay = std::max(worst_decay, ratio);
      failures += mirror > 1e-12 || std::abs(div) / scale > 1e-6 || ratio > 1.0;
    }
  }
  const bool ok = worst_fd <= 1e-6 && failures == 0;
  return {11, "gradient and field audits", ok,
          fmt("FD gradient rel err %.2e (tol 1e-6); field: %d points, mirror %.1e, div %.1e, decay ratio %.2f, "
              "%d failures",
              worst_fd, points, worst_mirror, worst_div, worst_decay, failures),
          0, 60.0};
}

}  // namespace

std::vector<int> criteria() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}; }

std::vector<Result> run(int id, const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Result> out;
  try {
    switch (id) {
      case 1: out = {c1(o)}; break;
      case 2: out = {c2(o)}; break;
      case 3: out = {c3(o)}; break;
      case 4: out = {c4(o)}; break;
      case 5: out = c5(o); break;
      case 6: out = {c6(o)}; break;
      case 7: out = {c7(o)}; break;
      case 8: out = {c8(o)}; break;
      case 9: out = {c9(o)}; break;
      case 10: out = {c10(o)}; break;
      case 11: out = {c11(o)}; break;
      default: throw DomainError("unknown criterion " + std::to_string(id));
    }
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception& e) {
    out = {{id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what(), 0, 0}};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (auto& r : out) {
    r.seconds = secs;
    if (r.budget > 0.0 && secs > r.budget) {
      r.pass = false;
      r.detail += "; over time budget";
    }
  }
  return out;
}

std::vector<Result> run_all(const Options& o, const std::function<void(const Result&)>& report) {
  std::vector<Result> all;
  for (int id : criteria())
    for (auto& r : run(id, o)) {
      if (report) report(r);
      all.push_back(std::move(r));
    }
  return all;
}

std::string format(const Result& r) {
  const char* tag = r.informational ? "INFO" : (r.pass ? "PASS" : "FAIL");
  return fmt("[%s] %2d %-40s %s (%.2f s / %.0f s)", tag, r.id, r.name.c_str(), r.detail.c_str(), r.seconds,
             r.budget);
}

}  // namespace loggas::acceptance
