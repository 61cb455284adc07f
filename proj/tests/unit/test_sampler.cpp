#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "loggas/errors.hpp"
#include "loggas/fekete.hpp"
#include "loggas/sampler.hpp"

using namespace loggas;

TEST_CASE("Metropolis acceptance rule") {
  CHECK(acceptance_probability(2.0, -1.0) == 1.0);
  CHECK(acceptance_probability(2.0, 0.0) == 1.0);
  CHECK(acceptance_probability(3.0, 0.4) == doctest::Approx(std::exp(-0.6)));
  CHECK(acceptance_probability(2.0, std::numeric_limits<double>::infinity()) == 0.0);
  const std::vector<double> x{-1.0, 0.0, 1.0};
  CHECK(acceptance_probability(2.0, energy_delta(x, 0, 1.0, quadratic())) == 0.0);
}

TEST_CASE("detailed balance on a three-state chain") {
  const double beta = 2.0;
  const double e[3] = {0.0, 0.7, 1.5};
  double z = 0.0, pi[3];
  for (int i = 0; i < 3; ++i) z += pi[i] = std::exp(-0.5 * beta * e[i]);
  for (double& p : pi) p /= z;

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0, 1);
  const long steps = 1000000;
  double counts[3][3] = {};
  int s = 0;
  for (long t = 0; t < steps; ++t) {
    const int j = (s + 1 + (u(rng) < 0.5 ? 0 : 1)) % 3;
    const double a = acceptance_probability(beta, e[j] - e[s]);
    const int next = (a >= 1.0 || u(rng) < a) ? j : s;
    counts[s][next] += 1;
    s = next;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double fij = counts[i][j] / steps, fji = counts[j][i] / steps;
      const double sigma = std::sqrt((fij + fji) / steps);
      CHECK(std::abs(fij - fji) <= 3 * sigma);
      const double exact = pi[i] * 0.5 * std::min(1.0, pi[j] / pi[i]);
      CHECK(std::abs(fij - exact) <= 3 * std::sqrt(exact / steps) + 1e-4);
    }
}

TEST_CASE("single particle is Gaussian under the quadratic potential") {
  SamplerConfig cfg;
  cfg.n = 1;
  cfg.beta = 2.0;  // density exp(-x^2/2)
  cfg.chains = 4;
  cfg.steps = 40000;
  cfg.thinning = 50;
  cfg.burn_in = 500;
  cfg.seed = 17;
  cfg.keep_samples = true;
  const GasStatistics s = run(cfg, quadratic_model());
  std::vector<double> x;
  for (const auto& c : s.configs) x.push_back(c[0]);
  std::sort(x.begin(), x.end());
  const double m = x.size();
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = 0.5 * std::erfc(-x[i] / std::sqrt(2.0));
    d = std::max({d, std::abs(f - i / m), std::abs(f - (i + 1) / m)});
  }
  CHECK(d < 1.628 / std::sqrt(m));
}

TEST_CASE("chain state stays sorted and its energy cache stays exact") {
  SamplerConfig cfg;
  cfg.n = 12;
  cfg.beta = 1.0;
  cfg.step_scale = 0.3;  // large enough to cross neighbours often
  ChainState st = make_chain(hermite_oracle(12).points(), cfg, 5);
  for (int k = 0; k < 30000; ++k) step(st, cfg);
  CHECK(std::is_sorted(st.x.begin(), st.x.end()));
  CHECK(st.audits == 3);
  CHECK(st.max_audit_error < 1e-8);
  CHECK(st.energy == doctest::Approx(energy(st.x, cfg.v)).epsilon(1e-10));
  CHECK(st.accepted > 0);
  CHECK(st.accepted < st.proposed);
}

TEST_CASE("run statistics are well formed and reproducible") {
  SamplerConfig cfg;
  cfg.n = 16;
  cfg.beta = 2.0;
  cfg.chains = 3;
  cfg.steps = 4000;
  cfg.burn_in = 1000;
  cfg.seed = 99;
  const Model m = quadratic_model();
  const GasStatistics a = run(cfg, m), b = run(cfg, m);
  CHECK(a.mean_energy.mean == b.mean_energy.mean);
  CHECK(a.f_n_trace == b.f_n_trace);
  double mass = 0.0;
  for (double v : a.spacing_hist.mass) mass += v;
  CHECK(mass == doctest::Approx(1.0));
  mass = 0.0;
  for (double v : a.count_fluctuations.mass) mass += v;
  CHECK(mass == doctest::Approx(1.0));
  CHECK(a.samples == 3u * 400u);
  CHECK(std::all_of(a.f_n_trace.begin(), a.f_n_trace.end(), [](double v) { return std::isfinite(v); }));
  CHECK(std::all_of(a.zeta_trace.begin(), a.zeta_trace.end(), [](double v) { return std::isfinite(v) && v >= 0; }));
  CHECK(a.max_audit_error < 1e-8);
  CHECK(a.acceptance_rate > 0.25);
  CHECK(a.acceptance_rate < 0.6);
  CHECK(a.converged);
}

TEST_CASE("finite temperature sits above the ground state and sharpens with beta") {
  const Model m = quadratic_model();
  const double ground = minimize(16, m).breakdown.f_n;
  double prev_f = INFINITY, prev_out = INFINITY;
  for (double beta : {1.0, 4.0, 16.0}) {
    SamplerConfig cfg;
    cfg.n = 16;
    cfg.beta = beta;
    cfg.chains = 2;
    cfg.steps = 10000;
    cfg.burn_in = 2000;
    cfg.seed = 3;
    const GasStatistics s = run(cfg, m);
    CHECK(s.mean_f_n.mean > ground);
    CHECK(s.mean_f_n.mean < prev_f);
    CHECK(s.outside_fraction <= prev_out);
    prev_f = s.mean_f_n.mean;
    prev_out = s.outside_fraction;
  }
}

TEST_CASE("R-hat and batch means") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0, 1);
  std::vector<std::vector<double>> same(4, std::vector<double>(2000)), apart = same;
  for (int c = 0; c < 4; ++c)
    for (int k = 0; k < 2000; ++k) {
      same[c][k] = g(rng);
      apart[c][k] = g(rng) + 2.0 * c;
    }
  CHECK(split_r_hat(same) < 1.02);
  CHECK(split_r_hat(apart) > 1.1);
  const MeanWithError mw = batch_means(same);
  CHECK(std::abs(mw.mean) < 4 * mw.se);
  CHECK(mw.se == doctest::Approx(1 / std::sqrt(8000.0)).epsilon(0.35));
  CHECK(batch_means({{3.0, 3.0, 3.0}}).mean == 3.0);
}

TEST_CASE("invalid sampler settings") {
  SamplerConfig cfg;
  cfg.beta = 0.0;
  CHECK_THROWS_AS(run(cfg, quadratic_model()), DomainError);
  cfg.beta = 1.0;
  cfg.burn_in = 0;
  CHECK_THROWS_AS(run(cfg, quadratic_model()), DomainError);
  cfg.burn_in = 10;
  cfg.n = 0;
  CHECK_THROWS_AS(run(cfg, quadratic_model()), DomainError);
}
