#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "loggas/hamiltonian.hpp"
#include "loggas/model.hpp"
#include "loggas/potential.hpp"

namespace loggas {

/// Parameters of a Metropolis run targeting exp(-(beta/2) w_n). Sweep counts
/// are in units of n single-site proposals.
struct SamplerConfig {
  int n = 32;
  double beta = 2.0;
  Potential v = quadratic();
  double step_scale = 0.0;  // 0 selects 1/(n sqrt(beta))
  int burn_in = 5000;       // sweeps, with step adaptation
  int steps = 10000;        // sweeps after burn-in
  int thinning = 10;        // sweeps between recorded samples
  int chains = 4;
  std::uint64_t seed = 0;
  bool iid_init = false;    // start from iid mu0 draws instead of Fekete points
  Interval count_window{-1.0, 1.0};
  double window_radius = 2.0;  // R of the discrepancy windows
  bool keep_samples = false;
  int threads = 0;             // 0: one thread per chain, capped by hardware
};

struct ChainState {
  std::vector<double> x;  // sorted
  double energy = 0.0;    // cached w_n
  std::uint64_t accepted = 0;
  std::uint64_t proposed = 0;
  std::mt19937_64 rng;
  double step_scale = 0.0;
  std::uint64_t audits = 0;
  double max_audit_error = 0.0;  // relative, cached vs recomputed energy
};

/// min(1, exp(-(beta/2) delta_w)); zero for an infinite delta.
double acceptance_probability(double beta, double delta_w);

/// Fresh chain at `points` with the RNG seeded from `seed`.
ChainState make_chain(std::vector<double> points, const SamplerConfig& cfg, std::uint64_t seed);

/// One single-site random-walk proposal x_i -> x_i + step_scale * N(0, 1),
/// Metropolis accept/reject with an O(n) energy difference. The particle is
/// re-inserted in sorted position if it crosses a neighbour. Every 10^4
/// proposals the cached energy is audited against a full recomputation.
/// Returns true when the move was accepted.
bool step(ChainState& state, const SamplerConfig& cfg);

struct Histogram {
  double lo = 0.0, hi = 1.0;
  std::vector<double> mass;  // normalized to total mass 1; out-of-range values clip to the ends
  double bin_width() const { return (hi - lo) / static_cast<double>(mass.size()); }
};

struct MeanWithError {
  double mean = 0.0;
  double se = 0.0;  // batch-means standard error
};

struct GasStatistics {
  Histogram count_fluctuations;  // D(x0, R) over windows
  Histogram spacing_hist;        // n m0(x_i) (x_{i+1} - x_i)
  std::vector<double> f_n_trace;
  std::vector<double> zeta_trace;
  MeanWithError mean_energy;
  MeanWithError mean_f_n;
  MeanWithError window_count;  // points in cfg.count_window
  MeanWithError observable;    // user observable, if supplied
  double spacing_mean = 0.0;
  double spacing_variance = 0.0;
  double outside_fraction = 0.0;  // share of sampled points with zeta > 0
  double r_hat = 1.0;             // split-chain R-hat, max over energy and window count
  bool converged = true;          // r_hat <= 1.1
  double acceptance_rate = 0.0;
  double max_audit_error = 0.0;
  std::uint64_t audits = 0;
  std::size_t samples = 0;
  std::vector<double> final_step_scales;
  /// Thinned configurations, chain-major, when cfg.keep_samples is set.
  std::vector<std::vector<double>> configs;
};

using Observable = std::function<double(std::span<const double>)>;

/// Runs cfg.chains independent chains concurrently and merges their
/// statistics in chain order. `model` supplies mu0 and the constants used for
/// f_n, zeta and spacing normalization; its potential should match cfg.v.
GasStatistics run(const SamplerConfig& cfg, const Model& model, const Observable& obs = {});

/// Split-chain potential scale reduction of per-chain traces.
double split_r_hat(const std::vector<std::vector<double>>& traces);

/// Batch-means mean and standard error over per-chain traces (20 batches per
/// chain).
MeanWithError batch_means(const std::vector<std::vector<double>>& traces);

}  // namespace loggas
