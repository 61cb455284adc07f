#include "loggas/partition.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "loggas/errors.hpp"
#include "loggas/fekete.hpp"
#include "loggas/hamiltonian.hpp"
#include "loggas/quadrature.hpp"

namespace loggas {

std::string to_string(PartitionMethod m) {
  switch (m) {
    case PartitionMethod::exact_quadratic: return "exact-quadratic";
    case PartitionMethod::quadrature: return "quadrature";
    case PartitionMethod::thermo: return "thermo";
  }
  return "unknown";
}

PartitionMethod partition_method_from(const std::string& name) {
  if (name == "exact-quadratic" || name == "exact") return PartitionMethod::exact_quadratic;
  if (name == "quadrature") return PartitionMethod::quadrature;
  if (name == "thermo") return PartitionMethod::thermo;
  throw DomainError("unknown partition method '" + name + "'");
}

double mehta_log_z(int n, double beta) {
  if (n < 1) throw DomainError("mehta_log_z needs n >= 1");
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  const double nn = n, g = 0.5 * beta;
  const double log_s = 0.5 * std::log(2.0 / (beta * nn));
  double sum = 0.0;
  for (int j = 1; j <= n; ++j) sum += std::lgamma(1.0 + j * g) - std::lgamma(1.0 + g);
  return (beta * nn * (nn - 1.0) / 2.0 + nn) * log_s + 0.5 * nn * std::log(2.0 * std::numbers::pi) + sum;
}

namespace {

// Fekete configuration for n <= 3 without an equilibrium solve: the measure
// only seeds the start, so a uniform law on a growth-based box suffices.
std::vector<double> small_fekete(int n, const Potential& v) {
  const double r = std::max(2.0, growth_radius(v.deriv));
  Model m{v, EquilibriumMeasure::uniform(-r, r), {}};
  return minimize(n, m, 0, 1e-13, 5000).config.points();
}

}  // namespace

double quadrature_log_z(int n, double beta, const Potential& v, const QuadratureOptions& opts) {
  if (n < 1 || n > 3) throw DomainError("quadrature_log_z supports 1 <= n <= 3");
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  const std::vector<double> star = small_fekete(n, v);
  const double nn = n;
  const double w_min = energy(star, v);
  const double half_beta = 0.5 * beta;

  // log of the ordered-sector integrand at x, scaled by exp((beta/2) w_min).
  auto log_weight = [&](const double* x) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      s -= half_beta * nn * v(x[i]);
      for (int j = i + 1; j < n; ++j) s += beta * std::log(std::abs(x[j] - x[i]));
    }
    return s + half_beta * w_min;
  };

  const double rel = opts.rel_tol;
  auto integrate_box = [&](double lo, double hi) {
    // x_{k+1} = x_k + t^2 with dx = 2 t dt; breaks at the Fekete gaps.
    std::function<double(int, double*)> level = [&](int k, double* x) -> double {
      if (k == n) return std::exp(log_weight(x));
      if (k == 0) {
        auto f = [&](double x0) {
          x[0] = x0;
          return level(1, x);
        };
        const std::vector<double> breaks{star[0]};
        return quad::integrate_split(f, lo, hi, breaks, rel, 0.0);
      }
      const double room = hi - x[k - 1];
      if (room <= 0.0) return 0.0;
      const double t_hi = std::sqrt(room);
      const double t_star = std::sqrt(std::max(0.0, star[k] - star[k - 1]));
      auto f = [&, k](double t) {
        x[k] = x[k - 1] + t * t;
        return 2.0 * t * level(k + 1, x);
      };
      std::vector<double> breaks;
      if (t_star > 0.0 && t_star < t_hi) breaks.push_back(t_star);
      return quad::integrate_split(f, 0.0, t_hi, breaks, rel, 0.0);
    };
    double x[3] = {0.0, 0.0, 0.0};
    return level(0, x);
  };

  // Boundary contribution: one particle moved to the box edge with the
  // rest at the optimum, times the box volume.
  auto boundary = [&](double lo, double hi) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (double edge : {lo, hi}) {
        std::vector<double> x = star;
        x[i] = edge;
        bool clash = false;
        for (int j = 0; j < n; ++j) clash |= (j != i && x[j] == edge);
        if (clash) continue;
        std::sort(x.begin(), x.end());
        worst = std::max(worst, std::exp(log_weight(x.data())));
      }
    return worst * std::pow(hi - lo, n);
  };

  const double reach = std::max(1.0, 0.5 * (star.back() - star.front()));
  double lo = star.front() - reach, hi = star.back() + reach;
  double lgamma_n1 = std::lgamma(nn + 1.0);
  for (int d = 0;; ++d) {
    const double value = integrate_box(lo, hi);
    if (!(value > 0.0) || !std::isfinite(value))
      throw ConvergenceError("tensor quadrature produced a non-positive value", value);
    if (boundary(lo, hi) <= opts.target * value)
      return std::log(value) + lgamma_n1 - half_beta * w_min;
    if (d >= opts.max_doublings)
      throw ConvergenceError("integration box too small after repeated doubling",
                             boundary(lo, hi) / value);
    const double mid = 0.5 * (lo + hi), half = hi - lo;
    lo = mid - half;
    hi = mid + half;
  }
}

ThermoResult thermo_log_z(int n, double beta, const Potential& v, const SamplerConfig& sampler_cfg,
                          int grid, int model_nodes) {
  if (n < 1) throw DomainError("thermo_log_z needs n >= 1");
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  if (grid < 1) throw DomainError("thermo grid needs at least one node");
  const Potential v0 = quadratic();
  const auto& rule = quad::gauss_legendre(grid);

  ThermoResult out;
  out.nodes.resize(grid);
  out.integrand.resize(grid);
  out.integrand_se.resize(grid);
  std::vector<char> converged(grid, 1);
  std::vector<std::exception_ptr> errors(grid);

  auto node = [&](int k) {
    const double t = 0.5 * (rule.nodes[k] + 1.0);
    out.nodes[k] = t;
    const Potential vt = interpolate(v0, v, t);
    const Model model = t == 0.0 ? quadratic_model() : auto_model(vt, model_nodes);
    SamplerConfig cfg = sampler_cfg;
    cfg.n = n;
    cfg.beta = beta;
    cfg.v = vt;
    cfg.threads = 1;
    cfg.seed = split_seed(sampler_cfg.seed, 7000 + static_cast<std::uint64_t>(k));
    cfg.keep_samples = false;
    const double scale = -0.5 * beta * n;
    const Observable obs = [&](std::span<const double> x) {
      double s = 0.0;
      for (double xi : x) s += v(xi) - v0(xi);
      return scale * s;
    };
    const GasStatistics st = run(cfg, model, obs);
    out.integrand[k] = st.observable.mean;
    out.integrand_se[k] = st.observable.se;
    converged[k] = st.converged;
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      std::min<unsigned>(sampler_cfg.threads > 0 ? sampler_cfg.threads : hw, static_cast<unsigned>(grid));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int k = next++; k < grid; k = next++) {
        try {
          node(k);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  double integral = 0.0, var = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double w = 0.5 * rule.weights[k];
    integral += w * out.integrand[k];
    var += w * w * out.integrand_se[k] * out.integrand_se[k];
    out.converged = out.converged && converged[k];
  }
  out.log_z = mehta_log_z(n, beta) + integral;
  out.error_bar = std::sqrt(var);
  return out;
}

PartitionReport next_order_report(int n, double beta, const ModelConstants& consts, double log_z) {
  if (n < 1) throw DomainError("next_order_report needs n >= 1");
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  PartitionReport r;
  r.n = n;
  r.beta = beta;
  r.log_z = log_z;
  const double nn = n;
  r.next_order = (log_z + 0.5 * beta * nn * nn * consts.mean_field_energy - 0.5 * beta * nn * std::log(nn)) /
                 (nn * beta);
  return r;
}

}  // namespace loggas
