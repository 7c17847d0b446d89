#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "memsnn/engine.hpp"

namespace memsnn {

// Parsed run configuration. Unknown keys anywhere in the file are an
// error; omitted optional fields keep these defaults.
struct RunConfig {
  int schema_version = 1;
  std::string task;  // "pattern" | "classification"
  std::string data;  // dataset path, relative paths resolve from the cwd
  double train_fraction = 0.7;  // classification
  uint64_t split_seed = 42;     // classification
  double pattern_lead = 5e-4;   // pattern: white-pixel spike delay, s
  GrfConfig grf;
  NetworkConfig net;
  std::vector<double> noise_levels = {1.0 / 15, 2.0 / 15, 3.0 / 15};
  size_t noise_trials = 50;
  std::vector<double> fault_levels;
  size_t fault_repeats = 5;
};

// Throws std::invalid_argument on schema violations (unknown key, bad
// type, missing required field), std::runtime_error on I/O failure.
RunConfig parse_run_config(const std::string& text, const std::string& origin);
RunConfig load_run_config(const std::string& path);

// Canonical serialization of the effective config (all fields, sorted
// keys) and its FNV-1a hash, recorded next to every result.
std::string dump_run_config(const RunConfig& rc);
uint64_t config_hash(const RunConfig& rc);

}  // namespace memsnn
