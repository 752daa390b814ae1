#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "teflow/entropy.hpp"
#include "teflow/teflow.hpp"
#include "teflow/telemetry.hpp"

namespace teflow {

struct RunConfig {
  ColumnMapping columns;
  WindowSpec window;
  LagSpec lags;
  KnnConfig knn;
  double sample_period = 10.0;  // seconds; the plant logs 0.1 samples/s
  std::size_t fill_limit = 3;
  double current_epsilon = 1e-9;

  // Throws ConfigError naming the violated constraint.
  void validate() const;

  AlignOptions align_options() const { return {sample_period, fill_limit}; }
  TeFlowOptions teflow_options() const;
};

// Parses the JSON config schema documented in config/run_config.schema.json.
// Absent keys keep their defaults; unknown keys are rejected. Throws
// ConfigError. Does not call validate().
RunConfig parse_run_config(std::string_view json_text);

// Canonical JSON (sorted keys, two-space indent).
std::string to_json(const RunConfig& config);

// Canonical re-serialization of arbitrary JSON text; used to echo the input
// config into reports.
std::string canonical_json(std::string_view json_text);

// 64-bit FNV-1a, printed as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace teflow
