#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>

#include <CLI11.hpp>

#include "loggas/acceptance.hpp"
#include "loggas/errors.hpp"
#include "loggas/fekete.hpp"
#include "loggas/field.hpp"
#include "loggas/io.hpp"
#include "loggas/model.hpp"
#include "loggas/partition.hpp"
#include "loggas/potential.hpp"
#include "loggas/renorm.hpp"
#include "loggas/sampler.hpp"

namespace loggas::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

struct Params {
  int n = 16;
  double beta = 2.0;
  int N = 8;
  std::string potential = "quadratic";
  std::vector<double> coeffs;
  std::uint64_t seed = 0;
  int steps = 10000;
  int chains = 4;
  double tol = 0.0;  // 0: per-command default
  std::string out;
  int threads = 0;
  std::string method;
  bool lattice = false;
  int burn_in = 5000;
  int thinning = 10;
  bool iid_init = false;
  int nodes = 2000;
  int configs = 5;
  std::vector<double> points;
  std::vector<int> ns{8, 16, 32, 64, 128, 256};
  std::vector<double> betas{1.0, 2.0, 4.0};
  std::vector<int> only;
};

void require(bool ok, const std::string& constraint) {
  if (!ok) throw DomainError("invalid argument: " + constraint);
}

int thread_count(const Params& p) {
  if (p.threads > 0) return p.threads;
  if (const char* env = std::getenv("LOGGAS_THREADS")) {
    const int t = std::atoi(env);
    require(t > 0, "LOGGAS_THREADS must be a positive integer");
    return t;
  }
  return 0;
}

Potential potential_of(const Params& p) { return potential_by_name(p.potential, p.coeffs); }

bool canonical_quadratic(const Params& p) { return p.potential == "quadratic"; }

Model model_of(const Params& p) {
  if (canonical_quadratic(p) && p.method != "grid") return quadratic_model();
  require(p.nodes >= 10, "--nodes must be at least 10");
  return auto_model(potential_of(p), p.nodes, p.tol > 0.0 ? p.tol : 1e-6);
}

std::string num(double x) { return io::format_double(x); }

// Every option of the subcommand, given or defaulted, as text.
std::map<std::string, std::string> echo(const CLI::App& sub) {
  std::map<std::string, std::string> m;
  for (const CLI::Option* o : sub.get_options()) {
    const std::string name = o->get_name(false, true);
    if (name.empty() || name.find("help") != std::string::npos) continue;
    std::string value;
    if (o->count() > 0) {
      for (const auto& r : o->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = o->get_default_str();
      if (value == "{}") value.clear();
    }
    m[name] = value;
  }
  return m;
}

// Writes the manifest beside the artifacts when an output directory is set.
void write_manifest(const Params& p, const CLI::App& sub) {
  if (p.out.empty()) return;
  io::RunManifest m;
  m.command = sub.get_name();
  m.parameters = echo(sub);
  m.seed = p.seed;
  m.timestamp = io::utc_timestamp();
  io::write_json(fs::path(p.out) / "manifest.json", io::to_json(m));
}

int cmd_equilibrium(const Params& p, std::ostream& out) {
  const Model m = model_of(p);
  io::CsvTable csv({"x", "density"});
  if (m.measure.nodes().empty()) {
    const Interval h = m.measure.hull();
    for (int k = 0; k <= 400; ++k) {
      const double x = h.lo + h.length() * k / 400.0;
      csv.add_row({x, m.measure.density(x)});
    }
  } else {
    for (double x : m.measure.nodes()) csv.add_row({x, m.measure.density(x)});
  }
  Json summary = io::to_json(m);
  summary.erase("nodes");
  summary.erase("weights");
  summary.erase("edges");
  out << summary.dump(2) << "\n";
  if (!p.out.empty()) {
    io::write_json(fs::path(p.out) / "measure.json", io::to_json(m));
    io::write_file(fs::path(p.out) / "density.csv", csv.str());
  }
  return 0;
}

int cmd_fekete(const Params& p, std::ostream& out) {
  require(p.n >= 1, "--n must be >= 1");
  const Model m = model_of(p);
  const FeketeResult r = minimize(p.n, m, p.seed, p.tol > 0.0 ? p.tol : 1e-12);
  io::CsvTable csv({"index", "x"});
  for (std::size_t i = 0; i < r.config.size(); ++i) csv.add_row({static_cast<double>(i), r.config.points()[i]});
  Json j = io::to_json(r);
  out << "n=" << p.n << " energy=" << num(r.energy) << " f_n=" << num(r.breakdown.f_n)
      << " grad_norm=" << num(r.grad_norm) << " converged=" << (r.converged ? "true" : "false") << "\n";
  if (!p.out.empty()) {
    io::write_file(fs::path(p.out) / "fekete.csv", csv.str());
    io::write_json(fs::path(p.out) / "fekete.json", j);
  } else {
    out << csv.str();
  }
  return r.converged ? 0 : 1;
}

int cmd_sample(const Params& p, std::ostream& out) {
  SamplerConfig cfg;
  cfg.n = p.n;
  cfg.beta = p.beta;
  cfg.v = potential_of(p);
  cfg.steps = p.steps;
  cfg.chains = p.chains;
  cfg.seed = p.seed;
  cfg.burn_in = p.burn_in;
  cfg.thinning = p.thinning;
  cfg.iid_init = p.iid_init;
  cfg.threads = thread_count(p);
  cfg.keep_samples = !p.out.empty();
  const Model m = model_of(p);
  const GasStatistics s = run(cfg, m);

  Json stats = io::to_json(s);
  Json summary = stats;
  summary.erase("f_n_trace");
  summary.erase("zeta_trace");
  summary.erase("count_fluctuations");
  summary.erase("spacing_hist");
  out << summary.dump(2) << "\n";
  if (!p.out.empty()) {
    std::vector<std::string> header{"sample", "chain"};
    for (int i = 0; i < cfg.n; ++i) header.push_back("x" + std::to_string(i));
    io::CsvTable csv(header);
    const std::size_t per_chain = s.configs.size() / static_cast<std::size_t>(cfg.chains);
    for (std::size_t k = 0; k < s.configs.size(); ++k) {
      std::vector<double> row{static_cast<double>(k), static_cast<double>(k / per_chain)};
      row.insert(row.end(), s.configs[k].begin(), s.configs[k].end());
      csv.add_row(row);
    }
    io::write_file(fs::path(p.out) / "samples.csv", csv.str());
    stats["provenance"] = io::to_json(cfg);
    io::write_json(fs::path(p.out) / "stats.json", stats);
  }
  if (!s.converged) out << "warning: chains not converged (R-hat " << num(s.r_hat) << ")\n";
  return 0;
}

int cmd_renorm(const Params& p, std::ostream& out) {
  require(p.N >= 1, "--N must be >= 1");
  PeriodicConfig cfg = PeriodicConfig::lattice(p.N);
  if (!p.lattice) {
    if (!p.points.empty()) {
      cfg = PeriodicConfig(p.N, p.points);
    } else {
      std::mt19937_64 rng(split_seed(p.seed, 0));
      std::uniform_real_distribution<double> u(0.0, p.N);
      std::vector<double> a(p.N);
      for (double& x : a) x = u(rng);
      cfg = PeriodicConfig(p.N, a);
    }
  }
  const double w = periodic_w(cfg);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", w);
  out << buf << "\n";
  if (!p.out.empty()) {
    Json j = io::to_json(cfg);
    j["W"] = w;
    j["lattice_min"] = lattice_min(1.0);
    io::write_json(fs::path(p.out) / "renorm.json", j);
  }
  return 0;
}

int cmd_verify_field(const Params& p, std::ostream& out) {
  require(p.N >= 1, "--N must be >= 1");
  require(p.configs >= 1, "--configs must be >= 1");
  io::CsvTable csv({"config_id", "N", "periodic_w", "w_quadrature", "eta", "y_cut", "rel_err"});
  std::mt19937_64 rng(split_seed(p.seed, 0));
  std::uniform_int_distribution<int> pick(1, p.N);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int id = 0; id < p.configs; ++id) {
    std::optional<PeriodicConfig> cfg;
    if (id == 0) {
      cfg = PeriodicConfig::lattice(p.N);
    } else {
      while (!cfg) {
        const int n = pick(rng);
        std::vector<double> a(n);
        for (double& x : a) x = n * u(rng);
        try {
          cfg = PeriodicConfig(n, a);
        } catch (const DegenerateConfiguration&) {
        }
      }
    }
    WQuadratureOptions q;
    q.eta = id == 0 || cfg->period() == 1 ? 1e-3 : std::min(1e-6, cfg->min_gap() / 4.0);
    if (id == 0 && cfg->period() == 1) q.eta = 1e-3;
    q.y_cut = std::max(6.0, static_cast<double>(cfg->period()));
    const double exact = periodic_w(*cfg);
    const double approx = w_quadrature(make_field(*cfg), q);
    csv.add_cells({std::to_string(id), std::to_string(cfg->period()), num(exact), num(approx), num(q.eta),
                   num(q.y_cut), num(std::abs(approx - exact) / std::abs(exact))});
  }
  if (!p.out.empty())
    io::write_file(fs::path(p.out) / "verify_field.csv", csv.str());
  else
    out << csv.str();
  return 0;
}

PartitionReport partition_report(const Params& p, int n, double beta, std::string method) {
  const bool quad = canonical_quadratic(p);
  if (method.empty()) method = quad ? "exact-quadratic" : (n <= 3 ? "quadrature" : "thermo");
  const PartitionMethod pm = partition_method_from(method);
  const Potential v = potential_of(p);
  double log_z = 0.0, error_bar = 0.0;
  bool converged = true;
  switch (pm) {
    case PartitionMethod::exact_quadratic:
      require(quad, "--method exact-quadratic needs --potential quadratic");
      log_z = mehta_log_z(n, beta);
      break;
    case PartitionMethod::quadrature:
      require(n <= 3, "--method quadrature needs --n <= 3");
      log_z = quadrature_log_z(n, beta, v);
      break;
    case PartitionMethod::thermo: {
      SamplerConfig cfg;
      cfg.steps = p.steps;
      cfg.chains = p.chains;
      cfg.burn_in = p.burn_in;
      cfg.thinning = p.thinning;
      cfg.seed = p.seed;
      cfg.threads = thread_count(p);
      const ThermoResult t = thermo_log_z(n, beta, v, cfg);
      log_z = t.log_z;
      error_bar = t.error_bar;
      converged = t.converged;
      break;
    }
  }
  const ModelConstants k = quad ? quadratic_model().constants : auto_model(v, p.nodes).constants;
  PartitionReport r = next_order_report(n, beta, k, log_z);
  r.method = pm;
  r.error_bar = error_bar;
  r.converged = converged;
  return r;
}

int cmd_partition(const Params& p, std::ostream& out) {
  require(p.n >= 1, "--n must be >= 1");
  require(p.beta > 0.0, "--beta must be positive");
  const PartitionReport r = partition_report(p, p.n, p.beta, p.method);
  const Json j = io::to_json(r);
  out << j.dump(2) << "\n";
  if (!p.out.empty()) io::write_json(fs::path(p.out) / "partition.json", j);
  return 0;
}

int cmd_partition_sweep(const Params& p, std::ostream& out) {
  io::CsvTable csv({"n", "beta", "method", "log_z", "next_order", "error_bar"});
  for (int n : p.ns)
    for (double b : p.betas) {
      require(n >= 1, "--ns entries must be >= 1");
      require(b > 0.0, "--betas entries must be positive");
      const PartitionReport r = partition_report(p, n, b, p.method);
      csv.add_cells({std::to_string(n), num(b), to_string(r.method), num(r.log_z), num(r.next_order),
                     num(r.error_bar)});
    }
  if (!p.out.empty())
    io::write_file(fs::path(p.out) / "partition_sweep.csv", csv.str());
  else
    out << csv.str();
  return 0;
}

int cmd_verify(const Params& p, std::ostream& out) {
  acceptance::Options opts;
  opts.threads = thread_count(p);
  const std::set<int> only(p.only.begin(), p.only.end());
  int failed = 0, total = 0;
  io::CsvTable csv({"id", "name", "status", "seconds", "budget"});
  for (int id : acceptance::criteria()) {
    if (!only.empty() && !only.count(id)) continue;
    for (const auto& r : acceptance::run(id, opts)) {
      out << acceptance::format(r) << "\n" << std::flush;
      csv.add_cells({std::to_string(r.id), r.name, r.informational ? "info" : (r.pass ? "pass" : "fail"),
                     num(r.seconds), num(r.budget)});
      if (r.informational) continue;
      ++total;
      failed += !r.pass;
    }
  }
  out << (total - failed) << "/" << total << " criteria passed\n";
  if (!p.out.empty()) io::write_file(fs::path(p.out) / "verify.csv", csv.str());
  return failed == 0 ? 0 : 1;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Params p;
  CLI::App app{"loggas: one-dimensional log gases, equilibrium measures and renormalized energy"};
  app.require_subcommand(1, 1);
  app.option_defaults()->always_capture_default();

  auto add_potential = [&](CLI::App* s) {
    s->add_option("--potential", p.potential, "quadratic | quartic | double-well | polynomial");
    s->add_option("--coeffs", p.coeffs, "polynomial coefficients c0,c1,... of V(x) = sum c_k x^k")->delimiter(',');
  };
  auto add_out = [&](CLI::App* s) { s->add_option("--out", p.out, "output directory for artifacts"); };
  auto add_threads = [&](CLI::App* s) {
    s->add_option("--threads", p.threads, "worker threads (fallback: LOGGAS_THREADS; default hardware)");
  };

  auto* eq = app.add_subcommand("equilibrium", "equilibrium measure and its constants");
  add_potential(eq);
  eq->add_option("--nodes", p.nodes, "grid cells for numerical solves");
  eq->add_option("--tol", p.tol, "solver tolerance (default 1e-6)");
  eq->add_option("--method", p.method, "grid: force the numerical solver for the quadratic model");
  add_out(eq);
  eq->footer("Files: measure.json; density.csv with columns x,density.");

  auto* fk = app.add_subcommand("fekete", "weighted Fekete points (minimizers of w_n)");
  fk->add_option("--n", p.n, "number of points");
  fk->add_option("--seed", p.seed, "seed of the multistart initialization");
  fk->add_option("--tol", p.tol, "gradient tolerance per point (default 1e-12)");
  fk->add_option("--nodes", p.nodes, "grid cells for non-quadratic equilibrium solves");
  add_potential(fk);
  add_out(fk);
  fk->footer("Files: fekete.csv with columns index,x; fekete.json.");

  auto* sm = app.add_subcommand("sample", "Metropolis sampling of the Gibbs law");
  sm->add_option("--n", p.n, "number of particles");
  sm->add_option("--beta", p.beta, "inverse temperature");
  sm->add_option("--steps", p.steps, "sweeps per chain after burn-in (one sweep = n proposals)");
  sm->add_option("--chains", p.chains, "independent chains");
  sm->add_option("--seed", p.seed, "master seed");
  sm->add_option("--burn-in", p.burn_in, "burn-in sweeps");
  sm->add_option("--thinning", p.thinning, "sweeps between recorded samples");
  sm->add_flag("--iid-init", p.iid_init, "start from iid equilibrium draws instead of Fekete points");
  sm->add_option("--nodes", p.nodes, "grid cells for non-quadratic equilibrium solves");
  add_potential(sm);
  add_threads(sm);
  add_out(sm);
  sm->footer("Files: samples.csv with columns sample,chain,x0..x{n-1}; stats.json with provenance.");

  auto* rn = app.add_subcommand("renorm", "renormalized energy of a periodic configuration");
  rn->add_flag("--lattice", p.lattice, "use the lattice {0, ..., N-1}");
  rn->add_option("--N", p.N, "period (number of points)");
  rn->add_option("--points", p.points, "points a_1,...,a_N (default: seeded uniform draw)")->delimiter(',');
  rn->add_option("--seed", p.seed, "seed of the random configuration");
  add_out(rn);
  rn->footer("Prints W to 12 decimals. Files: renorm.json.");

  auto* vf = app.add_subcommand("verify-field", "field quadrature of W against the closed form");
  vf->add_option("--N", p.N, "period of the lattice config; random configs use N' in 1..N");
  vf->add_option("--configs", p.configs, "number of configurations (the first is the lattice)");
  vf->add_option("--seed", p.seed, "seed of the random configurations");
  add_out(vf);
  vf->footer("CSV columns: config_id,N,periodic_w,w_quadrature,eta,y_cut,rel_err (verify_field.csv with --out).");

  auto* pt = app.add_subcommand("partition", "log partition function and next-order term");
  pt->add_option("--n", p.n, "number of particles");
  pt->add_option("--beta", p.beta, "inverse temperature");
  pt->add_option("--method", p.method, "exact-quadratic | quadrature | thermo (default by potential and n)");
  pt->add_option("--steps", p.steps, "thermo: sweeps per chain per node");
  pt->add_option("--chains", p.chains, "thermo: chains per node");
  pt->add_option("--burn-in", p.burn_in, "thermo: burn-in sweeps");
  pt->add_option("--seed", p.seed, "thermo: master seed");
  pt->add_option("--nodes", p.nodes, "grid cells for non-quadratic equilibrium solves");
  add_potential(pt);
  add_threads(pt);
  add_out(pt);
  pt->footer("Prints the report as JSON. Files: partition.json.");

  auto* ps = app.add_subcommand("partition-sweep", "next-order term over an (n, beta) grid");
  ps->add_option("--ns", p.ns, "particle numbers")->delimiter(',');
  ps->add_option("--betas", p.betas, "inverse temperatures")->delimiter(',');
  ps->add_option("--method", p.method, "exact-quadratic | quadrature | thermo");
  ps->add_option("--steps", p.steps, "thermo: sweeps per chain per node");
  ps->add_option("--chains", p.chains, "thermo: chains per node");
  ps->add_option("--seed", p.seed, "thermo: master seed");
  ps->add_option("--nodes", p.nodes, "grid cells for non-quadratic equilibrium solves");
  add_potential(ps);
  add_threads(ps);
  add_out(ps);
  ps->footer("CSV columns: n,beta,method,log_z,next_order,error_bar (partition_sweep.csv with --out).");

  auto* vr = app.add_subcommand("verify", "run the acceptance cross-checks and print a pass/fail table");
  vr->add_option("--only", p.only, "criterion ids to run")->delimiter(',');
  add_threads(vr);
  add_out(vr);
  vr->footer("Exit status 1 when any criterion fails. Files: verify.csv with columns id,name,status,seconds,budget.");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return 0;
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    int code = 0;
    if (name == "equilibrium") code = cmd_equilibrium(p, out);
    else if (name == "fekete") code = cmd_fekete(p, out);
    else if (name == "sample") code = cmd_sample(p, out);
    else if (name == "renorm") code = cmd_renorm(p, out);
    else if (name == "verify-field") code = cmd_verify_field(p, out);
    else if (name == "partition") code = cmd_partition(p, out);
    else if (name == "partition-sweep") code = cmd_partition_sweep(p, out);
    else if (name == "verify") code = cmd_verify(p, out);
    write_manifest(p, *sub);
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace loggas::cli
