#pragma once

#include <string>
#include <vector>

#include "loggas/model.hpp"
#include "loggas/potential.hpp"
#include "loggas/sampler.hpp"

namespace loggas {

enum class PartitionMethod { exact_quadratic, quadrature, thermo };

std::string to_string(PartitionMethod m);
PartitionMethod partition_method_from(const std::string& name);

struct PartitionReport {
  int n = 0;
  double beta = 0.0;
  double log_z = 0.0;
  PartitionMethod method = PartitionMethod::exact_quadratic;
  double next_order = 0.0;  // (log Z + (beta/2) n^2 F - (beta/2) n log n) / (n beta)
  double error_bar = 0.0;
  bool converged = true;
};

/// log Z for V = x^2/2 in closed form:
/// log Z = (beta n(n-1)/2 + n) log s + (n/2) log 2 pi
///         + sum_{j=1}^n [lgamma(1 + j g) - lgamma(1 + g)],
/// s = sqrt(2/(beta n)), g = beta/2.
double mehta_log_z(int n, double beta);

struct QuadratureOptions {
  double rel_tol = 1e-10;  // per nested level
  double target = 1e-10;   // allowed relative boundary weight of the box
  int max_doublings = 5;
};

/// log Z = log int prod_{i<j} |x_i - x_j|^beta exp(-(beta n/2) sum V(x_i)) dx
/// by nested adaptive quadrature over the ordered sector (times n!), with
/// gaps written as t^2. The integrand is scaled by its maximum at the
/// Fekete configuration. The box grows from the Fekete points until the
/// boundary contribution is below `target`. n <= 3.
double quadrature_log_z(int n, double beta, const Potential& v, const QuadratureOptions& opts = {});

struct ThermoResult {
  double log_z = 0.0;
  double error_bar = 0.0;
  bool converged = true;
  std::vector<double> nodes;       // t_k
  std::vector<double> integrand;   // <-(beta n/2) sum (V - x^2/2)>_{V_t}
  std::vector<double> integrand_se;
};

/// log Z(V) = log Z(x^2/2) + int_0^1 <-(beta n/2) sum_i (V - x^2/2)(x_i)>_{V_t} dt
/// along V_t = (1-t) x^2/2 + t V, with `grid` Gauss-Legendre nodes in t and
/// each expectation from the sampler. Nodes run concurrently, up to
/// sampler_cfg.threads (0: hardware). The error bar is the quadrature-weighted
/// combination of the batch-means errors.
ThermoResult thermo_log_z(int n, double beta, const Potential& v, const SamplerConfig& sampler_cfg,
                          int grid = 16, int model_nodes = 400);

PartitionReport next_order_report(int n, double beta, const ModelConstants& consts, double log_z);

}  // namespace loggas
