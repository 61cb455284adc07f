#include "loggas/fekete.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "loggas/errors.hpp"

namespace loggas {

namespace {

bool strictly_increasing(const std::vector<double>& x) {
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) return false;
  return true;
}

double sup_norm(const std::vector<double>& g) {
  double m = 0.0;
  for (double v : g) m = std::max(m, std::abs(v));
  return m;
}

Eigen::MatrixXd hessian(const std::vector<double>& x, const Potential& v) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = x[i] - x[j];
      const double k = 2.0 / (d * d);
      h(i, j) = h(j, i) = -k;
      h(i, i) += k;
      h(j, j) += k;
    }
    h(i, i) += static_cast<double>(n) * v.deriv2(x[i]);
  }
  return h;
}

std::vector<double> initial_points(int n, const EquilibriumMeasure& mu, std::uint64_t seed) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = mu.quantile((i + 0.5) / n);
  // Quantiles of a measure with gaps in its support can repeat; spread them.
  for (int i = 1; i < n; ++i)
    if (!(x[i] > x[i - 1])) x[i] = x[i - 1] + 1e-6;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-0.2, 0.2);
  std::vector<double> y = x;
  for (int i = 0; i < n; ++i) {
    const double left = i > 0 ? x[i] - x[i - 1] : (n > 1 ? x[1] - x[0] : 1.0);
    const double right = i + 1 < n ? x[i + 1] - x[i] : left;
    y[i] = x[i] + unif(rng) * std::min(left, right);
  }
  return y;
}

FeketeResult single_start(int n, const Model& model, std::uint64_t seed, double tol, int max_iter) {
  const Potential& v = model.potential;
  std::vector<double> x = initial_points(n, model.measure, seed);
  double e = energy(x, v);
  std::vector<double> g = gradient(x, v);
  double gn = sup_norm(g);
  const double nn = static_cast<double>(n);

  FeketeResult res;
  res.energy_trace.push_back(e);
  double gd_step = 1.0 / (nn * nn);
  int it = 0;
  for (; it < max_iter && gn > tol * nn; ++it) {
    std::vector<double> d(n);
    const bool newton = gn < 1e-3 * nn;
    if (newton) {
      const Eigen::Map<const Eigen::VectorXd> gv(g.data(), n);
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian(x, v));
      Eigen::VectorXd dv = ldlt.solve(-gv);
      const bool descent = ldlt.info() == Eigen::Success && dv.allFinite() && gv.dot(dv) < 0.0;
      if (descent)
        std::copy(dv.data(), dv.data() + n, d.begin());
      else
        for (int i = 0; i < n; ++i) d[i] = -gd_step * g[i];
    } else {
      for (int i = 0; i < n; ++i) d[i] = -gd_step * g[i];
    }

    double slope = 0.0;
    for (int i = 0; i < n; ++i) slope += g[i] * d[i];
    double t = 1.0;
    std::vector<double> trial(n);
    bool accepted = false;
    double e_new = e;
    for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
      for (int i = 0; i < n; ++i) trial[i] = x[i] + t * d[i];
      if (!strictly_increasing(trial)) continue;
      e_new = energy(trial, v);
      if (e_new <= e + 1e-4 * t * slope && e_new < e) {
        accepted = true;
        break;
      }
    }
    if (!accepted && newton) {
      // At the end of a Newton run the energy decrease falls below rounding;
      // keep a full step that shrinks the gradient without raising w_n.
      for (int i = 0; i < n; ++i) trial[i] = x[i] + d[i];
      if (strictly_increasing(trial)) {
        e_new = energy(trial, v);
        const double gn_trial = sup_norm(gradient(trial, v));
        if (gn_trial < gn && e_new <= e + 1e-14 * std::max(1.0, std::abs(e))) {
          accepted = true;
          t = 1.0;
        }
      }
    }
    if (!accepted) break;

    x.swap(trial);
    e = e_new;
    g = gradient(x, v);
    gn = sup_norm(g);
    res.energy_trace.push_back(e);
    if (!newton) gd_step *= (t == 1.0 ? 2.0 : t);
  }
  res.config = Configuration(std::move(x));
  res.energy = e;
  res.grad_norm = gn;
  res.iterations = it;
  res.converged = gn <= tol * nn;
  return res;
}

}  // namespace

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

FeketeResult minimize(int n, const Model& model, std::uint64_t seed, double tol, int max_iter) {
  if (n < 1) throw DomainError("Fekete minimization needs n >= 1");
  if (!(tol > 0.0)) throw DomainError("Fekete tolerance must be positive");
  std::optional<FeketeResult> best;
  for (std::uint64_t k = 0; k < 3; ++k) {
    FeketeResult r = single_start(n, model, split_seed(seed, k), tol, max_iter);
    const bool better =
        !best || r.energy < best->energy - 1e-12 * std::abs(best->energy) ||
        (std::abs(r.energy - best->energy) <= 1e-12 * std::abs(best->energy) &&
         r.grad_norm < best->grad_norm);
    if (better) best = std::move(r);
  }
  best->breakdown = breakdown(best->config, model.potential, model.measure, model.constants);
  return std::move(*best);
}

Configuration hermite_oracle(int n) {
  if (n < 1) throw DomainError("hermite_oracle needs n >= 1");
  // Orthonormal recurrence p_{k+1} = z sqrt(2/(k+1)) p_k - sqrt(k/(k+1)) p_{k-1}.
  // Consecutive p_k interlace, so the sign changes of (p_0, ..., p_n) count
  // the roots above z; bisection on that count brackets each root, and
  // Newton polishes it.
  auto roots_above = [n](double z) {
    int changes = 0;
    double ratio = z * std::sqrt(2.0);  // p_1 / p_0
    for (int k = 1;; ++k) {
      if (ratio < 0.0) ++changes;
      if (k == n) break;
      if (ratio == 0.0) ratio = 1e-300;
      ratio = z * std::sqrt(2.0 / (k + 1)) - std::sqrt(static_cast<double>(k) / (k + 1)) / ratio;
    }
    return changes;
  };
  auto newton_ratio = [n](double z) {
    double p1 = 1.0, p2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      if (std::abs(p1) > 1e150) {
        p1 *= 1e-150;
        p2 *= 1e-150;
      }
    }
    return p1 / (std::sqrt(2.0 * n) * p2);
  };

  const double bound = std::sqrt(2.0 * n + 1.0) + 1.0;
  std::vector<double> roots(n);
  for (int k = 0; k < n; ++k) {
    // k-th smallest root: n - k roots lie above lo, at most n - k - 1 above hi.
    double lo = k > 0 ? roots[k - 1] : -bound, hi = bound;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (roots_above(mid) >= n - k ? lo : hi) = mid;
    }
    double z = 0.5 * (lo + hi);
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
      const double dz = newton_ratio(z);
      if (!std::isfinite(dz)) break;
      z -= dz;
      if (std::abs(dz) <= 4e-16 * std::max(1.0, std::abs(z))) {
        ok = true;
        break;
      }
    }
    if (!ok || !(z > lo - 1e-9) || !(z < hi + 1e-9))
      throw ConvergenceError("Hermite root iteration did not converge", z);
    roots[k] = z;
  }
  if (n % 2 == 1) roots[n / 2] = 0.0;
  const double scale = std::sqrt(2.0 / n);
  for (double& r : roots) r *= scale;
  return Configuration(std::move(roots));
}

}  // namespace loggas
