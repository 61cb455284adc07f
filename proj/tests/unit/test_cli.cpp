#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "loggas/io.hpp"

using loggas::cli::dispatch;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("renorm prints the lattice value") {
  const Run r = call({"renorm", "--lattice", "--N", "8"});
  CHECK(r.code == 0);
  CHECK(r.out == "-5.773861090033\n");
}

TEST_CASE("usage and domain errors map to exit codes") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  const Run bad = call({"fekete", "--bogus"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("Usage") != std::string::npos);
  CHECK(call({"fekete", "--n", "abc"}).code == 2);
  const Run dom = call({"fekete", "--n", "0"});
  CHECK(dom.code == 1);
  CHECK(dom.err.find("--n must be >= 1") != std::string::npos);
  CHECK(call({"sample", "--beta", "-1"}).code == 1);
  CHECK(call({"renorm", "--N", "2", "--points", "0.5,0.5"}).code == 1);
  CHECK(call({"partition", "--n", "2", "--potential", "quartic", "--method", "exact-quadratic"}).code == 1);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("fekete output is byte-identical across runs") {
  const fs::path base = fs::temp_directory_path() / "loggas_cli_test";
  fs::remove_all(base);
  CHECK(call({"fekete", "--n", "16", "--seed", "7", "--out", (base / "a").string()}).code == 0);
  CHECK(call({"fekete", "--n", "16", "--seed", "7", "--out", (base / "b").string()}).code == 0);
  const std::string a = slurp(base / "a" / "fekete.csv");
  CHECK(a.rfind("index,x\n", 0) == 0);
  CHECK(a == slurp(base / "b" / "fekete.csv"));
  CHECK(slurp(base / "a" / "fekete.json") == slurp(base / "b" / "fekete.json"));
  const auto manifest = loggas::io::Json::parse(slurp(base / "a" / "manifest.json"));
  CHECK(manifest["command"] == "fekete");
  CHECK(manifest["parameters"]["--seed"] == "7");
  fs::remove_all(base);
}

TEST_CASE("sample writes samples, statistics and provenance") {
  const fs::path base = fs::temp_directory_path() / "loggas_cli_sample";
  fs::remove_all(base);
  const Run r = call({"sample", "--n", "6", "--beta", "2", "--steps", "200", "--chains", "2", "--burn-in", "100",
                      "--seed", "4", "--threads", "1", "--out", base.string()});
  CHECK(r.code == 0);
  const std::string csv = slurp(base / "samples.csv");
  CHECK(csv.rfind("sample,chain,x0,x1,x2,x3,x4,x5\n", 0) == 0);
  const auto stats = loggas::io::Json::parse(slurp(base / "stats.json"));
  CHECK(stats["provenance"]["n"] == 6);
  CHECK(stats["provenance"]["seed"] == 4);
  CHECK(stats["samples"] == 40);
  fs::remove_all(base);
}

TEST_CASE("partition and sweep outputs") {
  const Run p = call({"partition", "--n", "2", "--beta", "2"});
  REQUIRE(p.code == 0);
  const auto j = loggas::io::Json::parse(p.out);
  CHECK(j["method"] == "exact-quadratic");
  CHECK(j["log_z"].get<double>() == doctest::Approx(1.1447298858494002));
  const Run s = call({"partition-sweep", "--ns", "8,16", "--betas", "2"});
  CHECK(s.code == 0);
  CHECK(s.out.rfind("n,beta,method,log_z,next_order,error_bar\n", 0) == 0);
  const Run q = call({"partition", "--n", "2", "--beta", "1", "--potential", "quartic"});
  CHECK(q.code == 0);
  CHECK(loggas::io::Json::parse(q.out)["method"] == "quadrature");
}

TEST_CASE("verify-field CSV") {
  const Run r = call({"verify-field", "--N", "2", "--configs", "2", "--seed", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("config_id,N,periodic_w,w_quadrature,eta,y_cut,rel_err\n", 0) == 0);
}

TEST_CASE("equilibrium summary") {
  const Run r = call({"equilibrium"});
  CHECK(r.code == 0);
  const auto j = loggas::io::Json::parse(r.out);
  CHECK(j["closed_form"] == "semicircle");
  CHECK(j["constants"]["alpha"].get<double>() == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("verify runs selected criteria") {
  const Run r = call({"verify", "--only", "1,7"});
  CHECK(r.code == 0);
  CHECK(r.out.find("[PASS]  1") != std::string::npos);
  CHECK(r.out.find("2/2 criteria passed") != std::string::npos);
}
