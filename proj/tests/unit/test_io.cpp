#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "loggas/errors.hpp"
#include "loggas/io.hpp"

using namespace loggas;

TEST_CASE("shortest round-trip number formatting") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng) * std::pow(10.0, k % 30 - 15);
    CHECK(std::strtod(io::format_double(x).c_str(), nullptr) == x);
  }
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(2.0) == "2");
  CHECK(io::format_double(-INFINITY) == "-inf");
}

TEST_CASE("CSV tables") {
  io::CsvTable t({"a", "b"});
  t.add_row({1.5, -2.0});
  t.add_cells({"x", "y"});
  CHECK(t.str() == "a,b\n1.5,-2\nx,y\n");
  CHECK_THROWS_AS(t.add_row({1.0}), DomainError);
}

TEST_CASE("measure JSON round trip") {
  const EquilibriumMeasure cells = EquilibriumMeasure::from_cells({0, 1, 2, 3}, {0.2, 0.5, 0.3});
  const EquilibriumMeasure back = io::measure_from_json(io::Json::parse(io::to_json(cells).dump()));
  CHECK(back.density(1.5) == doctest::Approx(cells.density(1.5)));
  CHECK(back.support().size() == cells.support().size());
  const auto semi = io::to_json(EquilibriumMeasure::semicircle());
  CHECK(semi["closed_form"] == "semicircle");
  CHECK(io::measure_from_json(semi).closed_form() == ClosedForm::semicircle);
}

TEST_CASE("periodic configuration JSON round trip") {
  const PeriodicConfig c(3, {0.25, 1.5, 2.75});
  const PeriodicConfig back = io::periodic_config_from_json(io::to_json(c));
  CHECK(back.period() == 3);
  CHECK(back.points() == c.points());
  CHECK_THROWS_AS(io::periodic_config_from_json(io::Json{{"N", 2}}), DomainError);
}

TEST_CASE("report and manifest schemas") {
  PartitionReport r;
  r.n = 2;
  r.beta = 2.0;
  r.log_z = 1.0;
  const auto j = io::to_json(r);
  for (const char* key : {"schema_version", "n", "beta", "log_z", "method", "next_order", "error_bar"})
    CHECK(j.contains(key));
  io::RunManifest m;
  m.command = "fekete";
  m.parameters["--n"] = "4";
  m.timestamp = io::utc_timestamp();
  const auto mj = io::to_json(m);
  CHECK(mj["parameters"]["--n"] == "4");
  CHECK(mj["timestamp"].get<std::string>().size() == 20u);
  CHECK(mj["tool_version"] == io::kToolVersion);
}

TEST_CASE("files are written with parent directories") {
  const auto dir = std::filesystem::temp_directory_path() / "loggas_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  io::write_json(dir / "x.json", io::Json{{"k", 1}});
  std::ifstream f(dir / "x.json");
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(io::Json::parse(ss.str())["k"] == 1);
  std::filesystem::remove_all(dir.parent_path());
}
