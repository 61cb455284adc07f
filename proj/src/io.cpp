#include "loggas/io.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>

#include "loggas/errors.hpp"

namespace loggas::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

// JSON has no inf/nan; those become null.
Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json nums(std::span<const double> xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

Json interval(const Interval& i) { return Json::array({num(i.lo), num(i.hi)}); }

Json hist(const Histogram& h) {
  return {{"lo", num(h.lo)}, {"hi", num(h.hi)}, {"bin_width", num(h.bin_width())}, {"mass", nums(h.mass)}};
}

Json stat(const MeanWithError& m) { return {{"mean", num(m.mean)}, {"se", num(m.se)}}; }

}  // namespace

Json to_json(const EquilibriumMeasure& mu) {
  Json support = Json::array();
  for (const auto& i : mu.support()) support.push_back(interval(i));
  Json j{{"schema_version", kSchemaVersion},
         {"closed_form", mu.closed_form() == ClosedForm::semicircle ? "semicircle" : "none"},
         {"support", support}};
  j["nodes"] = nums(mu.nodes());
  j["weights"] = nums(mu.weights());
  j["edges"] = nums(mu.edges());
  return j;
}

Json to_json(const ModelConstants& k) {
  return {{"c", num(k.c)}, {"mean_field_energy", num(k.mean_field_energy)}, {"alpha", num(k.alpha)}};
}

Json to_json(const Model& model) {
  Json j = to_json(model.measure);
  j["potential"] = {{"label", model.potential.label}, {"coeffs", nums(model.potential.coeffs)}};
  j["constants"] = to_json(model.constants);
  return j;
}

Json to_json(const EnergyBreakdown& b) {
  return {{"w_n", num(b.w_n)},           {"leading", num(b.leading)}, {"log_term", num(b.log_term)},
          {"f_n", num(b.f_n)},           {"f_hat", num(b.f_hat)},     {"zeta_sum", num(b.zeta_sum)}};
}

Json to_json(const FeketeResult& r) {
  return {{"schema_version", kSchemaVersion},
          {"n", r.config.size()},
          {"energy", num(r.energy)},
          {"grad_norm", num(r.grad_norm)},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"breakdown", to_json(r.breakdown)},
          {"points", nums(r.config.points())}};
}

Json to_json(const PeriodicConfig& config) {
  return {{"schema_version", kSchemaVersion}, {"N", config.period()}, {"points", nums(config.points())}};
}

Json to_json(const SamplerConfig& cfg) {
  return {{"n", cfg.n},
          {"beta", num(cfg.beta)},
          {"potential", {{"label", cfg.v.label}, {"coeffs", nums(cfg.v.coeffs)}}},
          {"step_scale", num(cfg.step_scale > 0.0 ? cfg.step_scale : 1.0 / (cfg.n * std::sqrt(cfg.beta)))},
          {"burn_in", cfg.burn_in},
          {"steps", cfg.steps},
          {"thinning", cfg.thinning},
          {"chains", cfg.chains},
          {"seed", cfg.seed},
          {"iid_init", cfg.iid_init},
          {"count_window", interval(cfg.count_window)},
          {"window_radius", num(cfg.window_radius)}};
}

Json to_json(const GasStatistics& s) {
  return {{"schema_version", kSchemaVersion},
          {"samples", s.samples},
          {"acceptance_rate", num(s.acceptance_rate)},
          {"r_hat", num(s.r_hat)},
          {"converged", s.converged},
          {"mean_energy", stat(s.mean_energy)},
          {"mean_f_n", stat(s.mean_f_n)},
          {"window_count", stat(s.window_count)},
          {"spacing_mean", num(s.spacing_mean)},
          {"spacing_variance", num(s.spacing_variance)},
          {"outside_fraction", num(s.outside_fraction)},
          {"energy_audits", s.audits},
          {"max_audit_error", num(s.max_audit_error)},
          {"final_step_scales", nums(s.final_step_scales)},
          {"count_fluctuations", hist(s.count_fluctuations)},
          {"spacing_hist", hist(s.spacing_hist)},
          {"f_n_trace", nums(s.f_n_trace)},
          {"zeta_trace", nums(s.zeta_trace)}};
}

Json to_json(const PartitionReport& r) {
  return {{"schema_version", kSchemaVersion},
          {"n", r.n},
          {"beta", num(r.beta)},
          {"log_z", num(r.log_z)},
          {"method", to_string(r.method)},
          {"next_order", num(r.next_order)},
          {"error_bar", num(r.error_bar)},
          {"converged", r.converged}};
}

Json to_json(const ThermoResult& r) {
  return {{"log_z", num(r.log_z)},
          {"error_bar", num(r.error_bar)},
          {"converged", r.converged},
          {"nodes", nums(r.nodes)},
          {"integrand", nums(r.integrand)},
          {"integrand_se", nums(r.integrand_se)}};
}

EquilibriumMeasure measure_from_json(const Json& j) {
  if (j.value("closed_form", "none") == "semicircle") return EquilibriumMeasure::semicircle();
  if (!j.contains("edges") || !j.contains("weights")) throw DomainError("measure JSON needs edges and weights");
  return EquilibriumMeasure::from_cells(j.at("edges").get<std::vector<double>>(),
                                        j.at("weights").get<std::vector<double>>());
}

PeriodicConfig periodic_config_from_json(const Json& j) {
  if (!j.contains("N") || !j.contains("points")) throw DomainError("periodic config JSON needs N and points");
  return PeriodicConfig(j.at("N").get<int>(), j.at("points").get<std::vector<double>>());
}

Json to_json(const RunManifest& m) {
  Json params = Json::object();
  for (const auto& [k, v] : m.parameters) params[k] = v;
  return {{"schema_version", kSchemaVersion},
          {"command", m.command},
          {"parameters", params},
          {"seed", m.seed},
          {"tool_version", m.tool_version},
          {"timestamp", m.timestamp}};
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_cells(std::move(cells));
}

void CsvTable::add_cells(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw DomainError("CSV row width does not match header");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open '" + path.string() + "' for writing");
  f << content;
  if (!f) throw DomainError("failed writing '" + path.string() + "'");
}

void write_json(const std::filesystem::path& path, const Json& j) { write_file(path, j.dump(2) + "\n"); }

}  // namespace loggas::io
