#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace cascade {

using Json = nlohmann::json;

struct ResultRow {
  int point = 0;
  double xi = 0.0;
  std::string model;
  double t = 0.0;
  std::string observable;
  double coord = 0.0;
  double value = 0.0;
};

struct ResultTable {
  Json config;  // canonical config, output block removed
  std::string config_hash;
  std::string code_version;
  double wall_time_s = 0.0;
  std::vector<ResultRow> rows;

  static const std::vector<std::string>& columns();
  std::string to_csv() const;
  // Rows and metadata; wall time is the only non-deterministic field.
  std::string to_json(bool include_timing = true) const;
};

const char* code_version();

std::vector<std::string> preset_names();
// Embedded preset config text; throws Config for unknown names.
std::string preset_text(const std::string& name);

// Parses text, expands a "preset" key (other keys override the preset's
// top-level keys), applies the seed override and checks the schema.
Json load_config(const std::string& text, std::optional<std::uint64_t> seed = {});

// FNV-1a 64 over the canonical dump without the output block.
std::string config_hash(const Json& config);

ResultTable run_experiment(const Json& config, int threads);

// Dry run: regime, basis dimension and memory per sweep point and model.
// Problems are listed in the report rather than thrown.
Json validate_experiment(const std::string& text, std::optional<std::uint64_t> seed = {});

// Writes <dir>/<stem>.csv and <dir>/<stem>.json; returns the two paths.
std::vector<std::string> write_outputs(const ResultTable& table, const std::string& dir,
                                       const std::string& stem);

}  // namespace cascade
