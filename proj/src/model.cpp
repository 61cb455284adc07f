#include "loggas/model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "loggas/errors.hpp"
#include "loggas/quadrature.hpp"

namespace loggas {

namespace {

constexpr double kPi = std::numbers::pi;

double semicircle_density(double x) {
  const double r = 4.0 - x * x;
  return r > 0.0 ? std::sqrt(r) / (2.0 * kPi) : 0.0;
}

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * kPi) + std::asin(0.5 * x) / kPi;
}

// Antiderivative of log|t|, and of that again.
double g1(double t) { return t == 0.0 ? 0.0 : t * std::log(std::abs(t)) - t; }
double g2(double t) { return t == 0.0 ? 0.0 : 0.5 * t * t * std::log(std::abs(t)) - 0.75 * t * t; }

// -(1/h) int_l^r log|x - y| dy: potential of unit mass spread over [l, r].
double cell_potential(double x, double l, double r) {
  const double h = r - l, d = x - 0.5 * (l + r);
  if (std::abs(d) > 8.0 * h) {
    const double q = (h * h) / (d * d);
    return -std::log(std::abs(d)) + q / 24.0 + q * q / 320.0 + q * q * q / 2688.0;
  }
  return -(g1(x - l) - g1(x - r)) / h;
}

// -(1/(hi hj)) iint log|x - y| over two cells.
double cell_interaction(double li, double ri, double lj, double rj) {
  const double hi = ri - li, hj = rj - lj;
  const double d = 0.5 * (li + ri) - 0.5 * (lj + rj);
  if (std::abs(d) > 8.0 * std::max(hi, hj)) {
    const double d2 = d * d;
    const double m2 = (hi * hi + hj * hj) / 12.0;
    const double m4 = std::pow(hi, 4) / 80.0 + hi * hi * hj * hj / 24.0 + std::pow(hj, 4) / 80.0;
    return -(std::log(std::abs(d)) - m2 / (2.0 * d2) - m4 / (4.0 * d2 * d2));
  }
  const double s = g2(ri - lj) - g2(li - lj) - g2(ri - rj) + g2(li - rj);
  return -s / (hi * hj);
}

double median(std::vector<double> v) {
  if (v.empty()) throw DomainError("median of an empty sample");
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  double m = *mid;
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), mid));
  return m;
}

// Euclidean projection onto the probability simplex.
void project_simplex(Eigen::VectorXd& x) {
  std::vector<double> u(x.data(), x.data() + x.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  x = (x.array() - theta).max(0.0);
}

std::vector<double> edges_from_nodes(std::span<const double> nodes) {
  const std::size_t n = nodes.size();
  std::vector<double> e(n + 1);
  for (std::size_t i = 1; i < n; ++i) e[i] = 0.5 * (nodes[i - 1] + nodes[i]);
  e[0] = nodes[0] - (e[1] - nodes[0]);
  e[n] = nodes[n - 1] + (nodes[n - 1] - e[n - 1]);
  return e;
}

// Sample points used for the Robin constant on the closed form.
std::vector<double> interior_samples(const Interval& iv, int count) {
  const double pad = 0.1 * iv.length();
  std::vector<double> xs(count);
  for (int k = 0; k < count; ++k)
    xs[k] = iv.lo + pad + (iv.length() - 2.0 * pad) * (k + 0.5) / count;
  return xs;
}

}  // namespace

// ---------------------------------------------------------------------------
// EquilibriumMeasure

EquilibriumMeasure EquilibriumMeasure::semicircle() {
  EquilibriumMeasure m;
  m.closed_form_ = ClosedForm::semicircle;
  m.support_ = {{-2.0, 2.0}};
  m.max_density_ = 1.0 / kPi;
  return m;
}

EquilibriumMeasure EquilibriumMeasure::from_cells(std::vector<double> edges,
                                                  std::vector<double> weights) {
  if (weights.empty() || edges.size() != weights.size() + 1)
    throw DomainError("grid measure needs one more edge than weights");
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) throw DomainError("grid edges must be strictly increasing");
    if (!(weights[i] >= 0.0)) throw DomainError("grid weights must be non-negative");
    total += weights[i];
  }
  if (!(total > 0.0)) throw DomainError("grid measure has zero mass");

  EquilibriumMeasure m;
  m.edges_ = std::move(edges);
  m.weights_ = std::move(weights);
  m.nodes_.resize(m.weights_.size());
  m.cumulative_.assign(m.weights_.size() + 1, 0.0);
  for (std::size_t i = 0; i < m.weights_.size(); ++i) {
    m.weights_[i] /= total;
    m.nodes_[i] = 0.5 * (m.edges_[i] + m.edges_[i + 1]);
    m.cumulative_[i + 1] = m.cumulative_[i] + m.weights_[i];
    const double dens = m.weights_[i] / (m.edges_[i + 1] - m.edges_[i]);
    m.max_density_ = std::max(m.max_density_, dens);
    if (m.weights_[i] > 0.0) {
      if (!m.support_.empty() && m.support_.back().hi == m.edges_[i])
        m.support_.back().hi = m.edges_[i + 1];
      else
        m.support_.push_back({m.edges_[i], m.edges_[i + 1]});
    }
  }
  return m;
}

EquilibriumMeasure EquilibriumMeasure::uniform(double a, double b) {
  if (!(b > a)) throw DomainError("uniform measure needs a < b");
  return from_cells({a, b}, {1.0});
}

bool EquilibriumMeasure::in_support(double x) const {
  return std::any_of(support_.begin(), support_.end(),
                     [x](const Interval& iv) { return iv.contains(x); });
}

double EquilibriumMeasure::density(double x) const {
  if (closed_form_ == ClosedForm::semicircle) return semicircle_density(x);
  if (x < edges_.front() || x >= edges_.back()) return 0.0;
  const auto i = static_cast<std::size_t>(std::upper_bound(edges_.begin(), edges_.end(), x) -
                                          edges_.begin()) - 1;
  return weights_[i] / (edges_[i + 1] - edges_[i]);
}

double EquilibriumMeasure::cdf(double x) const {
  if (closed_form_ == ClosedForm::semicircle) return semicircle_cdf(x);
  if (x <= edges_.front()) return 0.0;
  if (x >= edges_.back()) return 1.0;
  const auto i = static_cast<std::size_t>(std::upper_bound(edges_.begin(), edges_.end(), x) -
                                          edges_.begin()) - 1;
  return cumulative_[i] + weights_[i] * (x - edges_[i]) / (edges_[i + 1] - edges_[i]);
}

double EquilibriumMeasure::mass(double a, double b) const {
  if (b < a) return 0.0;
  return cdf(b) - cdf(a);
}

double EquilibriumMeasure::total_mass() const {
  if (closed_form_ == ClosedForm::semicircle)
    return quad::integrate(semicircle_density, -2.0, 2.0, 1e-13);
  return cumulative_.back();
}

double EquilibriumMeasure::quantile(double p) const {
  p = std::clamp(p, 0.0, 1.0);
  double lo = hull().lo, hi = hull().hi;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) >= p ? hi : lo) = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------
// Potentials and energies

std::vector<double> uniform_grid(double a, double b, int n) {
  if (n < 1 || !(b > a)) throw DomainError("uniform_grid needs n >= 1 and a < b");
  std::vector<double> g(n);
  const double h = (b - a) / n;
  for (int i = 0; i < n; ++i) g[i] = a + (i + 0.5) * h;
  return g;
}

EquilibriumMeasure semicircle_equilibrium() { return EquilibriumMeasure::semicircle(); }

double log_potential_quadrature(const EquilibriumMeasure& mu, double x) {
  auto integrand = [&](double y) {
    const double d = mu.density(y);
    return d == 0.0 ? 0.0 : -std::log(std::abs(x - y)) * d;
  };
  std::vector<double> breaks{x};
  if (mu.closed_form() == ClosedForm::none)
    breaks.assign(mu.edges().begin(), mu.edges().end()), breaks.push_back(x);
  else
    breaks.insert(breaks.end(), {mu.hull().lo, mu.hull().hi});
  double s = 0.0;
  for (const auto& iv : mu.support()) s += quad::integrate_split(integrand, iv.lo, iv.hi, breaks, 1e-12);
  return s;
}

double log_potential(const EquilibriumMeasure& mu, double x) {
  if (mu.closed_form() == ClosedForm::semicircle) {
    if (std::abs(x) <= 2.0) return 0.5 - 0.25 * x * x;
    return log_potential_quadrature(mu, x);
  }
  const auto e = mu.edges();
  const auto w = mu.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) s += w[i] * cell_potential(x, e[i], e[i + 1]);
  return s;
}

double zeta(const EquilibriumMeasure& mu, const Potential& v, double c, double x) {
  return log_potential(mu, x) + 0.5 * v(x) - c;
}

double log_energy(const EquilibriumMeasure& mu) {
  if (mu.closed_form() == ClosedForm::semicircle) {
    // Outer integral in x = 2 sin(t), which removes the sqrt edges; inner
    // potential by quadrature split at the evaluation point.
    auto outer = [&](double t) {
      const double x = 2.0 * std::sin(t), ct = std::cos(t);
      return log_potential_quadrature(mu, x) * (2.0 / kPi) * ct * ct;
    };
    return quad::integrate(outer, -0.5 * kPi, 0.5 * kPi, 1e-11);
  }
  const auto e = mu.edges();
  const auto w = mu.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    s += w[i] * w[i] * cell_interaction(e[i], e[i + 1], e[i], e[i + 1]);
    for (std::size_t j = i + 1; j < w.size(); ++j)
      if (w[j] > 0.0) s += 2.0 * w[i] * w[j] * cell_interaction(e[i], e[i + 1], e[j], e[j + 1]);
  }
  return s;
}

namespace {

double expected_v(const EquilibriumMeasure& mu, const Potential& v) {
  if (mu.closed_form() == ClosedForm::semicircle) {
    auto f = [&](double t) {
      const double ct = std::cos(t);
      return v(2.0 * std::sin(t)) * (2.0 / kPi) * ct * ct;
    };
    return quad::integrate(f, -0.5 * kPi, 0.5 * kPi, 1e-13);
  }
  const auto e = mu.edges();
  const auto w = mu.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) s += w[i] * quad::fixed(v.eval, e[i], e[i + 1], 3) / (e[i + 1] - e[i]);
  return s;
}

}  // namespace

double mean_field_energy(const EquilibriumMeasure& mu, const Potential& v) {
  return log_energy(mu) + expected_v(mu, v);
}

double alpha(const EquilibriumMeasure& mu) {
  if (mu.closed_form() == ClosedForm::semicircle) {
    auto f = [](double x) {
      const double d = semicircle_density(x);
      return d > 0.0 ? d * std::log(2.0 * kPi * d) : 0.0;
    };
    return quad::integrate(f, -2.0, 2.0, 1e-13);
  }
  const auto e = mu.edges();
  const auto w = mu.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) s += w[i] * std::log(2.0 * kPi * w[i] / (e[i + 1] - e[i]));
  return s;
}

double robin_constant(const EquilibriumMeasure& mu, const Potential& v) {
  std::vector<double> vals;
  for (const auto& iv : mu.support()) {
    std::vector<double> xs;
    if (mu.closed_form() == ClosedForm::semicircle) {
      xs = interior_samples(iv, 201);
    } else {
      const double pad = 0.1 * iv.length();
      for (double x : mu.nodes())
        if (x >= iv.lo + pad && x <= iv.hi - pad) xs.push_back(x);
      if (xs.empty()) xs = interior_samples(iv, 1);
    }
    for (double x : xs) vals.push_back(log_potential(mu, x) + 0.5 * v(x));
  }
  return median(std::move(vals));
}

ModelConstants model_constants(const EquilibriumMeasure& mu, const Potential& v) {
  return {robin_constant(mu, v), mean_field_energy(mu, v), alpha(mu)};
}

double stationarity_residual(const EquilibriumMeasure& mu, const Potential& v, double c) {
  std::vector<double> xs;
  if (mu.closed_form() == ClosedForm::semicircle) {
    for (int k = 0; k <= 400; ++k) xs.push_back(-3.0 + 6.0 * k / 400.0);
  } else {
    xs.assign(mu.nodes().begin(), mu.nodes().end());
  }
  double r = 0.0;
  for (double x : xs) {
    const double z = log_potential(mu, x) + 0.5 * v(x) - c;
    r = std::max(r, mu.in_support(x) ? std::abs(z) : std::max(0.0, -z));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Discrete solver

EquilibriumMeasure solve_equilibrium(const Potential& v, std::span<const double> grid, double tol,
                                     int max_iter) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (n < 3) throw DomainError("equilibrium grid needs at least 3 nodes");
  if (!(tol > 0.0)) throw DomainError("equilibrium tolerance must be positive");
  if (!std::is_sorted(grid.begin(), grid.end()) ||
      std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw DomainError("equilibrium grid must be strictly increasing");

  const std::vector<double> e = edges_from_nodes(grid);
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j)
      k(i, j) = k(j, i) = cell_interaction(e[i], e[i + 1], e[j], e[j + 1]);
  Eigen::VectorXd vbar(n);
  for (Eigen::Index i = 0; i < n; ++i)
    vbar(i) = quad::fixed(v.eval, e[i], e[i + 1], 3) / (e[i + 1] - e[i]);

  // Lipschitz constant of the gradient 2Kw on the zero-sum subspace.
  Eigen::VectorXd p = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
  double lambda = 1.0;
  for (int it = 0; it < 100; ++it) {
    p.array() -= p.mean();
    Eigen::VectorXd q = k * p;
    q.array() -= q.mean();
    lambda = q.norm() / p.norm();
    p = q / q.norm();
  }
  const double step = 1.0 / (2.0 * lambda * 1.05);

  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::VectorXd y = w, w_prev = w;
  double t = 1.0;
  double residual = std::numeric_limits<double>::infinity();

  auto kkt_residual = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd s = k * x + 0.5 * vbar;
    // Robin constant: median over the interior 80% of the support run.
    Eigen::Index first = -1, last = -1;
    for (Eigen::Index i = 0; i < n; ++i)
      if (x(i) > 0.0) {
        if (first < 0) first = i;
        last = i;
      }
    const auto span = last - first;
    std::vector<double> inner;
    for (Eigen::Index i = first + span / 10; i <= last - span / 10; ++i)
      if (x(i) > 0.0) inner.push_back(s(i));
    const double c = median(inner);
    double r = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      r = std::max(r, x(i) > 0.0 ? std::abs(s(i) - c) : std::max(0.0, c - s(i)));
    return r;
  };

  int iter = 0;
  for (; iter < max_iter; ++iter) {
    const Eigen::VectorXd g = 2.0 * (k * y) + vbar;
    w_prev = w;
    w = y - step * g;
    project_simplex(w);
    // Gradient-based adaptive restart.
    if ((y - w).dot(w - w_prev) > 0.0) {
      t = 1.0;
      y = w;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = w + ((t - 1.0) / t_next) * (w - w_prev);
    t = t_next;
    if (iter % 25 == 0) {
      residual = kkt_residual(w);
      if (residual < tol) break;
    }
  }
  if (iter >= max_iter) {
    residual = kkt_residual(w);
    if (!(residual < tol))
      throw ConvergenceError("equilibrium solver did not converge (residual " +
                                 std::to_string(residual) + ")",
                             residual);
  }

  // Mass at a grid end with density rising toward it means the true support
  // extends beyond the bracket.
  auto piles = [&](Eigen::Index end, Eigen::Index inward) {
    const double d_end = w(end) / (e[end + 1] - e[end]);
    const double d_in = w(inward) / (e[inward + 1] - e[inward]);
    return w(end) > 1e-9 && d_end >= d_in;
  };
  if (piles(0, 2) || piles(n - 1, n - 3))
    throw BracketError("equilibrium mass piles on the grid bracket [" + std::to_string(e.front()) +
                       ", " + std::to_string(e.back()) + "]; enlarge the grid");

  std::vector<double> weights(w.data(), w.data() + n);
  return EquilibriumMeasure::from_cells(e, std::move(weights));
}

Model quadratic_model() {
  Potential v = quadratic();
  EquilibriumMeasure mu = semicircle_equilibrium();
  const ModelConstants k = model_constants(mu, v);
  return {std::move(v), std::move(mu), k};
}

Model numerical_model(const Potential& v, double lo, double hi, int nodes, double tol) {
  EquilibriumMeasure mu = solve_equilibrium(v, uniform_grid(lo, hi, nodes), tol);
  const ModelConstants k = model_constants(mu, v);
  return {v, std::move(mu), k};
}

Model auto_model(const Potential& v, int nodes, double tol) {
  // Smallest r where V at +-r clears its minimum over [-r, r] by 2 log(2r) + 4.
  double r = 1.0;
  for (; r < 1e4; r *= 1.25) {
    double vmin = std::min(v(r), v(-r));
    for (int k = 0; k <= 200; ++k) vmin = std::min(vmin, v(-r + 2.0 * r * k / 200.0));
    if (std::min(v(r), v(-r)) - vmin >= 2.0 * std::log(2.0 * r) + 4.0) break;
  }
  const int coarse = std::max(200, nodes / 4);
  for (int attempt = 0;; ++attempt) {
    try {
      const EquilibriumMeasure mu = solve_equilibrium(v, uniform_grid(-r, r, coarse), tol);
      const Interval h = mu.hull();
      const double pad = 0.25 * h.length();
      return numerical_model(v, h.lo - pad, h.hi + pad, nodes, tol);
    } catch (const BracketError&) {
      if (attempt >= 5) throw;
      r *= 2.0;
    }
  }
}

// ---------------------------------------------------------------------------

ZetaTable::ZetaTable(const EquilibriumMeasure& mu, const Potential& v, double c, double reach,
                     int points)
    : mu_(mu), v_(v), c_(c) {
  const Interval h = mu.hull();
  lo_ = h.lo - reach;
  step_ = (h.length() + 2.0 * reach) / points;
  table_.resize(points + 1);
  for (int i = 0; i <= points; ++i) {
    const double x = lo_ + i * step_;
    table_[i] = mu.in_support(x) ? 0.0 : std::max(0.0, zeta(mu, v, c, x));
  }
}

double ZetaTable::operator()(double x) const {
  if (mu_.in_support(x)) return 0.0;
  const double s = (x - lo_) / step_;
  if (s < 0.0 || s >= static_cast<double>(table_.size() - 1))
    return std::max(0.0, zeta(mu_, v_, c_, x));
  const auto i = static_cast<std::size_t>(s);
  const double f = s - static_cast<double>(i);
  return (1.0 - f) * table_[i] + f * table_[i + 1];
}

}  // namespace loggas
