#pragma once

#include <optional>
#include <span>
#include <vector>

#include "loggas/potential.hpp"

namespace loggas {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

enum class ClosedForm { none, semicircle };

/// Probability measure with a density, either the closed-form semicircle law
/// or a piecewise-constant density on grid cells.
///
/// Grid measures store one cell [edges[i], edges[i+1]] per node with mass
/// weights[i]; the density is weights[i] / cell width on that cell. The
/// support is the union of maximal runs of cells with positive mass.
class EquilibriumMeasure {
 public:
  /// rho(x) = sqrt(4 - x^2) / (2 pi) on [-2, 2].
  static EquilibriumMeasure semicircle();
  /// Piecewise-constant measure. `edges` has weights.size() + 1 increasing
  /// entries; weights are renormalized to total mass one.
  static EquilibriumMeasure from_cells(std::vector<double> edges, std::vector<double> weights);
  /// Uniform density 1/(b - a) on [a, b].
  static EquilibriumMeasure uniform(double a, double b);

  ClosedForm closed_form() const { return closed_form_; }
  const std::vector<Interval>& support() const { return support_; }
  /// Convex hull of the support.
  Interval hull() const { return {support_.front().lo, support_.back().hi}; }
  bool in_support(double x) const;

  double density(double x) const;
  /// mu([a, b]).
  double mass(double a, double b) const;
  double total_mass() const;
  /// Smallest x with mu((-inf, x]) >= p, for p in [0, 1].
  double quantile(double p) const;
  /// Recorded upper bound on the density.
  double max_density() const { return max_density_; }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> edges() const { return edges_; }

 private:
  EquilibriumMeasure() = default;
  double cdf(double x) const;

  ClosedForm closed_form_ = ClosedForm::none;
  std::vector<Interval> support_;
  std::vector<double> nodes_, weights_, edges_, cumulative_;
  double max_density_ = 0.0;
};

struct ModelConstants {
  double c = 0.0;                  // Robin constant
  double mean_field_energy = 0.0;  // F(mu0)
  double alpha = 0.0;              // int m0 log(2 pi m0)
};

/// Cell-centred grid of n nodes on [a, b] (node i at a + (i + 1/2) h).
std::vector<double> uniform_grid(double a, double b, int n);

/// Closed-form equilibrium measure of V(x) = x^2/2.
EquilibriumMeasure semicircle_equilibrium();

/// Minimizes the mean-field energy over piecewise-constant densities on the
/// Voronoi cells of `grid` (accelerated projected gradient on the simplex).
/// Throws ConvergenceError carrying the last residual, or BracketError when
/// mass accumulates at an end of the grid.
EquilibriumMeasure solve_equilibrium(const Potential& v, std::span<const double> grid,
                                     double tol = 1e-6, int max_iter = 20000);

/// Residual of the optimality condition after the last solve:
/// max over support nodes of |U + V/2 - c|, together with the worst
/// off-support violation max(0, c - U - V/2).
double stationarity_residual(const EquilibriumMeasure& mu, const Potential& v, double c);

/// U^mu(x) = -int log|x - y| dmu(y). Uses the on-support closed form for the
/// semicircle and exact cell integrals for grid measures.
double log_potential(const EquilibriumMeasure& mu, double x);
/// Same quantity by adaptive quadrature of the density, split at x and at
/// the support endpoints; never uses a closed form.
double log_potential_quadrature(const EquilibriumMeasure& mu, double x);

/// zeta(x) = U^mu(x) + V(x)/2 - c.
double zeta(const EquilibriumMeasure& mu, const Potential& v, double c, double x);

/// F(mu) = -iint log|x-y| dmu dmu + int V dmu.
double mean_field_energy(const EquilibriumMeasure& mu, const Potential& v);
/// Kernel part of F only: -iint log|x-y| dmu dmu.
double log_energy(const EquilibriumMeasure& mu);

/// alpha = int m0 log(2 pi m0) dx.
double alpha(const EquilibriumMeasure& mu);

/// Median of U + V/2 over the interior 80% of each support interval.
double robin_constant(const EquilibriumMeasure& mu, const Potential& v);

ModelConstants model_constants(const EquilibriumMeasure& mu, const Potential& v);

/// A potential together with its equilibrium measure and constants.
struct Model {
  Potential potential;
  EquilibriumMeasure measure;
  ModelConstants constants;
};

/// V = x^2/2 with the closed-form semicircle.
Model quadratic_model();
/// Any potential, with the measure solved on `nodes` cells over [lo, hi].
Model numerical_model(const Potential& v, double lo, double hi, int nodes = 2000,
                      double tol = 1e-6);
/// Same, with the box chosen from the growth of V: a first solve on a wide
/// box (doubled on BracketError, at most 5 times) locates the hull, a second
/// solve on the hull padded by a quarter of its length on each side.
Model auto_model(const Potential& v, int nodes = 2000, double tol = 1e-6);

/// Tabulated zeta for repeated evaluation (sampler observables). Zero on the
/// support; linear interpolation on a fine grid outside it up to `reach`
/// beyond the hull, direct evaluation farther out.
class ZetaTable {
 public:
  ZetaTable(const EquilibriumMeasure& mu, const Potential& v, double c, double reach = 4.0,
            int points = 4000);
  double operator()(double x) const;

 private:
  EquilibriumMeasure mu_;
  Potential v_;
  double c_;
  double lo_, step_;
  std::vector<double> table_;
};

}  // namespace loggas
