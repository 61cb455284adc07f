#include "loggas/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <numeric>
#include <thread>

#include "loggas/errors.hpp"
#include "loggas/fekete.hpp"

namespace loggas {

namespace {

constexpr std::uint64_t kAuditEvery = 10000;
constexpr double kRHatThreshold = 1.1;

void validate(const SamplerConfig& cfg) {
  if (cfg.n < 1) throw DomainError("sampler needs n >= 1");
  if (!(cfg.beta > 0.0)) throw DomainError("beta must be positive");
  if (cfg.burn_in < 1 || cfg.thinning < 1) throw DomainError("burn_in and thinning must be >= 1");
  if (cfg.steps < cfg.thinning) throw DomainError("steps must be at least the thinning interval");
  if (cfg.chains < 1) throw DomainError("chains must be >= 1");
  if (cfg.step_scale < 0.0) throw DomainError("step_scale must be non-negative");
  if (!(cfg.window_radius > 0.0)) throw DomainError("window radius must be positive");
}

Histogram make_hist(double lo, double hi, int bins) {
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.mass.assign(bins, 0.0);
  return h;
}

void add(Histogram& h, double value) {
  const auto bins = static_cast<long>(h.mass.size());
  long k = static_cast<long>(std::floor((value - h.lo) / h.bin_width()));
  k = std::clamp(k, 0L, bins - 1);
  h.mass[k] += 1.0;
}

void normalize(Histogram& h) {
  const double total = std::accumulate(h.mass.begin(), h.mass.end(), 0.0);
  if (total > 0.0)
    for (double& m : h.mass) m /= total;
}

// Everything one chain records; merged in chain order afterwards.
struct ChainRecord {
  std::vector<double> energy, f_n, zeta, count, obs;
  Histogram counts = make_hist(-5.0, 5.0, 40);
  Histogram spacings = make_hist(0.0, 4.0, 80);
  double spacing_sum = 0.0, spacing_sq = 0.0;
  std::size_t spacing_count = 0, points = 0, outside = 0;
  std::vector<std::vector<double>> configs;
  ChainState state;
};

ChainRecord run_chain(const SamplerConfig& cfg, const Model& model, const ZetaTable& zeta_of,
                      const std::vector<double>& windows, std::vector<double> start,
                      std::uint64_t seed, const Observable& obs) {
  ChainRecord rec;
  rec.state = make_chain(std::move(start), cfg, seed);
  ChainState& st = rec.state;
  const auto n = static_cast<std::size_t>(cfg.n);
  const double nn = static_cast<double>(n);

  // Burn-in with step adaptation toward 30-50% acceptance.
  for (int sweep = 0; sweep < cfg.burn_in; ++sweep) {
    const auto acc0 = st.accepted, prop0 = st.proposed;
    for (std::size_t k = 0; k < n; ++k) step(st, cfg);
    if ((sweep + 1) % 20 == 0 || n >= 20) {
      const double rate = static_cast<double>(st.accepted - acc0) / static_cast<double>(st.proposed - prop0);
      if (rate > 0.5) st.step_scale *= 1.1;
      if (rate < 0.3) st.step_scale *= 0.9;
    }
  }
  st.accepted = st.proposed = 0;

  for (int sweep = 1; sweep <= cfg.steps; ++sweep) {
    for (std::size_t k = 0; k < n; ++k) step(st, cfg);
    if (sweep % cfg.thinning != 0) continue;

    const auto& x = st.x;
    const EnergyBreakdown b0 = breakdown_from(st.energy, 0.0, n, model.constants);
    double zsum = 0.0;
    for (double xi : x) {
      const double z = zeta_of(xi);
      zsum += z;
      if (z > 0.0) ++rec.outside;
    }
    rec.points += n;
    rec.energy.push_back(st.energy);
    rec.f_n.push_back(b0.f_n);
    rec.zeta.push_back(zsum);
    rec.count.push_back(static_cast<double>(std::count_if(x.begin(), x.end(), [&](double xi) {
      return cfg.count_window.contains(xi);
    })));
    for (double x0 : windows) add(rec.counts, discrepancy(x, n, model.measure, x0, cfg.window_radius));
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double s = nn * model.measure.density(x[i]) * (x[i + 1] - x[i]);
      add(rec.spacings, s);
      rec.spacing_sum += s;
      rec.spacing_sq += s * s;
      ++rec.spacing_count;
    }
    if (obs) rec.obs.push_back(obs(x));
    if (cfg.keep_samples) rec.configs.push_back(x);
  }
  return rec;
}

}  // namespace

double acceptance_probability(double beta, double delta_w) {
  if (!(delta_w < std::numeric_limits<double>::infinity())) return 0.0;
  if (delta_w <= 0.0) return 1.0;
  return std::exp(-0.5 * beta * delta_w);
}

ChainState make_chain(std::vector<double> points, const SamplerConfig& cfg, std::uint64_t seed) {
  ChainState st;
  std::sort(points.begin(), points.end());
  st.x = std::move(points);
  if (static_cast<int>(st.x.size()) != cfg.n) throw DomainError("initial configuration has wrong size");
  st.energy = energy(st.x, cfg.v);
  st.rng.seed(seed);
  st.step_scale = cfg.step_scale > 0.0 ? cfg.step_scale : 1.0 / (cfg.n * std::sqrt(cfg.beta));
  return st;
}

bool step(ChainState& st, const SamplerConfig& cfg) {
  const std::size_t n = st.x.size();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const std::size_t i = pick(st.rng);
  const double x_new = st.x[i] + st.step_scale * gauss(st.rng);
  const double delta = energy_delta(st.x, i, x_new, cfg.v);
  const double p = acceptance_probability(cfg.beta, delta);
  ++st.proposed;
  const bool accept = p >= 1.0 || unif(st.rng) < p;
  if (accept) {
    ++st.accepted;
    st.energy += delta;
    // Keep the configuration sorted; relabeling leaves the law unchanged.
    auto pos = st.x.begin() + static_cast<std::ptrdiff_t>(i);
    *pos = x_new;
    if (i > 0 && x_new < st.x[i - 1]) {
      auto target = std::upper_bound(st.x.begin(), pos, x_new);
      std::rotate(target, pos, pos + 1);
    } else if (i + 1 < n && x_new > st.x[i + 1]) {
      auto target = std::lower_bound(pos + 1, st.x.end(), x_new);
      std::rotate(pos, pos + 1, target);
    }
  }
  if (st.proposed % kAuditEvery == 0) {
    const double fresh = energy(st.x, cfg.v);
    const double err = std::abs(fresh - st.energy) / std::max(1.0, std::abs(fresh));
    st.max_audit_error = std::max(st.max_audit_error, err);
    ++st.audits;
    st.energy = fresh;
  }
  return accept;
}

double split_r_hat(const std::vector<std::vector<double>>& traces) {
  std::vector<std::vector<double>> halves;
  for (const auto& t : traces) {
    const std::size_t h = t.size() / 2;
    if (h < 2) continue;
    halves.emplace_back(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(h));
    halves.emplace_back(t.end() - static_cast<std::ptrdiff_t>(h), t.end());
  }
  if (halves.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  std::size_t len = halves.front().size();
  for (const auto& h : halves) len = std::min(len, h.size());
  const double m = static_cast<double>(halves.size()), l = static_cast<double>(len);
  std::vector<double> means;
  double within = 0.0;
  for (const auto& h : halves) {
    const double mu = std::accumulate(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(len), 0.0) / l;
    double ss = 0.0;
    for (std::size_t k = 0; k < len; ++k) ss += (h[k] - mu) * (h[k] - mu);
    within += ss / (l - 1.0);
    means.push_back(mu);
  }
  within /= m;
  const double grand = std::accumulate(means.begin(), means.end(), 0.0) / m;
  double between = 0.0;
  for (double mu : means) between += (mu - grand) * (mu - grand);
  between *= l / (m - 1.0);
  if (within <= 0.0) return between <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  const double var_plus = (l - 1.0) / l * within + between / l;
  return std::sqrt(var_plus / within);
}

MeanWithError batch_means(const std::vector<std::vector<double>>& traces) {
  constexpr std::size_t kBatches = 20;
  std::vector<double> batch;
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& t : traces) {
    sum += std::accumulate(t.begin(), t.end(), 0.0);
    count += t.size();
    const std::size_t len = t.size() / kBatches;
    if (len == 0) continue;
    for (std::size_t b = 0; b < kBatches; ++b) {
      const auto first = t.begin() + static_cast<std::ptrdiff_t>(b * len);
      batch.push_back(std::accumulate(first, first + static_cast<std::ptrdiff_t>(len), 0.0) /
                      static_cast<double>(len));
    }
  }
  MeanWithError r;
  if (count == 0) return r;
  r.mean = sum / static_cast<double>(count);
  if (batch.size() >= 2) {
    const double bm = std::accumulate(batch.begin(), batch.end(), 0.0) / static_cast<double>(batch.size());
    double ss = 0.0;
    for (double v : batch) ss += (v - bm) * (v - bm);
    r.se = std::sqrt(ss / static_cast<double>(batch.size() - 1) / static_cast<double>(batch.size()));
  }
  return r;
}

GasStatistics run(const SamplerConfig& cfg, const Model& model, const Observable& obs) {
  validate(cfg);
  const ZetaTable zeta_of(model.measure, model.potential, model.constants.c);

  // Discrepancy windows: nine centres across the interior 80% of the hull.
  const Interval hull = model.measure.hull();
  std::vector<double> windows;
  for (int k = 0; k < 9; ++k) windows.push_back(hull.lo + hull.length() * (0.1 + 0.8 * k / 8.0));

  // Starting points: one Fekete set shared by all chains, jittered per chain.
  std::vector<double> fekete_pts;
  if (!cfg.iid_init) {
    Model target{cfg.v, model.measure, model.constants};
    fekete_pts = minimize(cfg.n, target, cfg.seed, 1e-9, 2000).config.points();
  }
  std::vector<std::vector<double>> starts(cfg.chains);
  for (int c = 0; c < cfg.chains; ++c) {
    std::mt19937_64 rng(split_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(c)));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> x(cfg.n);
    if (cfg.iid_init) {
      for (double& xi : x) xi = model.measure.quantile(unif(rng));
      std::sort(x.begin(), x.end());
      for (int i = 1; i < cfg.n; ++i)
        if (!(x[i] > x[i - 1])) x[i] = std::nextafter(x[i - 1], INFINITY);
    } else {
      x = fekete_pts;
      for (int i = 0; i < cfg.n; ++i) {
        const double left = i > 0 ? x[i] - fekete_pts[i - 1] : 1.0;
        const double right = i + 1 < cfg.n ? fekete_pts[i + 1] - fekete_pts[i] : 1.0;
        x[i] = fekete_pts[i] + 0.3 * (unif(rng) - 0.5) * std::min({left, right, 1.0});
      }
    }
    starts[c] = std::move(x);
  }

  std::vector<ChainRecord> records(cfg.chains);
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(cfg.threads > 0 ? cfg.threads : hw,
                                              static_cast<unsigned>(cfg.chains));
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(cfg.chains);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int c = next++; c < cfg.chains; c = next++) {
        try {
          records[c] = run_chain(cfg, model, zeta_of, windows, starts[c],
                                 split_seed(cfg.seed, static_cast<std::uint64_t>(c)), obs);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  GasStatistics out;
  out.count_fluctuations = make_hist(-5.0, 5.0, 40);
  out.spacing_hist = make_hist(0.0, 4.0, 80);
  std::vector<std::vector<double>> energies, f_ns, counts, observables;
  double spacing_sum = 0.0, spacing_sq = 0.0;
  std::size_t spacing_count = 0, points = 0, outside = 0;
  std::uint64_t accepted = 0, proposed = 0;
  for (auto& r : records) {
    for (std::size_t k = 0; k < r.counts.mass.size(); ++k) out.count_fluctuations.mass[k] += r.counts.mass[k];
    for (std::size_t k = 0; k < r.spacings.mass.size(); ++k) out.spacing_hist.mass[k] += r.spacings.mass[k];
    out.f_n_trace.insert(out.f_n_trace.end(), r.f_n.begin(), r.f_n.end());
    out.zeta_trace.insert(out.zeta_trace.end(), r.zeta.begin(), r.zeta.end());
    spacing_sum += r.spacing_sum;
    spacing_sq += r.spacing_sq;
    spacing_count += r.spacing_count;
    points += r.points;
    outside += r.outside;
    accepted += r.state.accepted;
    proposed += r.state.proposed;
    out.audits += r.state.audits;
    out.max_audit_error = std::max(out.max_audit_error, r.state.max_audit_error);
    out.final_step_scales.push_back(r.state.step_scale);
    out.samples += r.energy.size();
    energies.push_back(std::move(r.energy));
    f_ns.push_back(std::move(r.f_n));
    counts.push_back(std::move(r.count));
    if (obs) observables.push_back(std::move(r.obs));
    for (auto& c : r.configs) out.configs.push_back(std::move(c));
  }
  normalize(out.count_fluctuations);
  normalize(out.spacing_hist);
  if (spacing_count > 0) {
    out.spacing_mean = spacing_sum / static_cast<double>(spacing_count);
    out.spacing_variance = spacing_sq / static_cast<double>(spacing_count) - out.spacing_mean * out.spacing_mean;
  }
  out.outside_fraction = points > 0 ? static_cast<double>(outside) / static_cast<double>(points) : 0.0;
  out.acceptance_rate = proposed > 0 ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  out.mean_energy = batch_means(energies);
  out.mean_f_n = batch_means(f_ns);
  out.window_count = batch_means(counts);
  if (obs) out.observable = batch_means(observables);

  double rh = split_r_hat(energies);
  const double rc = split_r_hat(counts);
  if (std::isfinite(rc) || std::isnan(rh)) rh = std::isnan(rh) ? rc : std::max(rh, rc);
  out.r_hat = rh;
  out.converged = !(rh > kRHatThreshold);
  return out;
}

}  // namespace loggas
