#include "loggas/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

namespace loggas::quad {

namespace {

Rule build_rule(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

double apply(const Rule& r, const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
  return s * half;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double fixed(const std::function<double(double)>& f, double a, double b, int n) {
  return apply(gauss_legendre(n), f, a, b);
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  const Rule& r = gauss_legendre(10);
  // Global adaptive bisection: always split the panel with the largest error
  // estimate, until the summed estimate meets the tolerance or the panel
  // budget is spent.
  struct Panel {
    double a, b, value, error;
    int depth;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  auto make = [&](double lo, double hi, int depth) {
    const double m = 0.5 * (lo + hi);
    const double coarse = apply(r, f, lo, hi);
    const double fine = apply(r, f, lo, m) + apply(r, f, m, hi);
    return Panel{lo, hi, fine, std::abs(fine - coarse), depth};
  };
  std::priority_queue<Panel> heap;
  heap.push(make(a, b, 0));
  double total = heap.top().value, err = heap.top().error;
  std::vector<Panel> done;
  for (int count = 0; count < 4000 && !heap.empty(); ++count) {
    if (err <= std::max(abs_tol, rel_tol * std::abs(total))) break;
    Panel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (p.depth >= max_depth || !(m > p.a && m < p.b)) {
      done.push_back(p);
      continue;
    }
    const Panel left = make(p.a, m, p.depth + 1), right = make(m, p.b, p.depth + 1);
    total += left.value + right.value - p.value;
    err += left.error + right.error - p.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  double s = 0.0;
  for (const auto& p : done) s += p.value;
  while (!heap.empty()) {
    s += heap.top().value;
    heap.pop();
  }
  return s;
}

double integrate_split(const std::function<double(double)>& f, double a, double b,
                       std::span<const double> breaks, double rel_tol, double abs_tol) {
  std::vector<double> pts{a};
  for (double p : breaks)
    if (p > a && p < b) pts.push_back(p);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    s += integrate(f, pts[i], pts[i + 1], rel_tol, abs_tol);
  return s;
}

}  // namespace loggas::quad
