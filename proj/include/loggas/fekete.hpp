#pragma once

#include <cstdint>
#include <vector>

#include "loggas/hamiltonian.hpp"
#include "loggas/model.hpp"

namespace loggas {

struct FeketeResult {
  Configuration config;
  double energy = 0.0;
  double grad_norm = 0.0;  // sup norm
  int iterations = 0;
  bool converged = false;
  EnergyBreakdown breakdown;
  /// w_n after every accepted step of the winning start.
  std::vector<double> energy_trace;
};

/// Weighted Fekete set: a local minimizer of w_n, best of three seeded
/// starts. Starts are jittered quantiles of the model's equilibrium measure.
/// Gradient descent with Armijo backtracking runs until the sup-norm
/// gradient drops below 1e-3 n, then damped Newton on the exact Hessian.
/// Converged means sup-norm gradient <= tol * n. Steps never reorder the
/// particles.
FeketeResult minimize(int n, const Model& model, std::uint64_t seed = 0, double tol = 1e-12,
                      int max_iter = 5000);

/// sqrt(2/n) times the roots of the physicists' Hermite polynomial H_n, in
/// increasing order: the exact Fekete set of V = x^2/2.
Configuration hermite_oracle(int n);

/// 64-bit mixing step used to derive per-run seeds from a master seed.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace loggas
