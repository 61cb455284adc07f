#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "loggas/fekete.hpp"
#include "loggas/model.hpp"
#include "loggas/partition.hpp"
#include "loggas/renorm.hpp"
#include "loggas/sampler.hpp"

namespace loggas::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

Json to_json(const EquilibriumMeasure& mu);
Json to_json(const ModelConstants& k);
Json to_json(const Model& model);
Json to_json(const EnergyBreakdown& b);
Json to_json(const FeketeResult& r);
Json to_json(const PeriodicConfig& config);
Json to_json(const SamplerConfig& cfg);
Json to_json(const GasStatistics& s);
Json to_json(const PartitionReport& r);
Json to_json(const ThermoResult& r);

/// Inverse of to_json for the two input-shaped types.
EquilibriumMeasure measure_from_json(const Json& j);
PeriodicConfig periodic_config_from_json(const Json& j);

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  std::string timestamp;  // UTC, ISO 8601
};

Json to_json(const RunManifest& m);
/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

/// Comma-separated table with a header row. Numbers use format_double.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& values);
  /// Mixed row: already formatted cells.
  void add_cells(std::vector<std::string> cells);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace loggas::io
