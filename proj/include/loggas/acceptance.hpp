#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace loggas::acceptance {

struct Result {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double budget = 0.0;         // seconds; exceeding it fails the criterion
  bool informational = false;  // printed, never counted
};

struct Options {
  std::uint64_t seed = 20240611;
  int threads = 0;
};

/// Criterion ids 1..11.
std::vector<int> criteria();

/// Runs one criterion. Criterion 5 also yields an informational companion
/// line, so the result is a list.
std::vector<Result> run(int id, const Options& opts = {});

/// Runs every criterion, calling `report` after each result.
std::vector<Result> run_all(const Options& opts = {},
                            const std::function<void(const Result&)>& report = {});

/// "[PASS] 1 lattice value ... (0.01 s / 1 s)".
std::string format(const Result& r);

}  // namespace loggas::acceptance
