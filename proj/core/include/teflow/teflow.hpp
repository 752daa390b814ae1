#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teflow/entropy.hpp"
#include "teflow/transfer_entropy.hpp"

namespace teflow {

// Non-overlapping consecutive windows; a trailing partial window is dropped.
struct WindowSpec {
  std::size_t window_len = 180;
};

// Lags 1..max_lag inclusive are evaluated in every window.
struct LagSpec {
  std::size_t max_lag = 36;
};

// Throws ConfigError unless window_len >= max_lag + k + 2 and all fields
// are positive.
void validate_window_and_lags(const WindowSpec& window, const LagSpec& lags,
                              const KnnConfig& knn);

struct WindowBounds {
  std::size_t begin = 0;  // inclusive sample index
  std::size_t end = 0;    // exclusive
  friend bool operator==(const WindowBounds&, const WindowBounds&) = default;
};

// floor(T / window_len) windows. Throws DataError when T < window_len.
std::vector<WindowBounds> window_partition(std::size_t sample_count, const WindowSpec& spec);

// Per-sample efficiency e_t = flow_t * pressure_t / sum_s current_s,t.
// Samples whose denominator is <= current_epsilon are invalid; their value
// is stored as 0.
struct EfficiencySeries {
  std::vector<double> values;
  std::vector<std::uint8_t> valid;

  std::size_t size() const noexcept { return values.size(); }
};

EfficiencySeries compute_indicator(std::span<const double> flow, std::span<const double> pressure,
                                   const std::vector<std::vector<double>>& currents,
                                   double current_epsilon = 1e-9);

struct LagMaximum {
  double value = 0.0;
  std::size_t lag = 0;
};

// Largest estimate; equal values resolve to the smallest lag. Negative
// estimates are returned unchanged. Throws std::invalid_argument on empty
// input.
LagMaximum max_over_lags(std::span<const TeEstimate> estimates);

enum class NullReason : std::uint8_t {
  kNone,
  kWindowGap,          // alignment left unfilled samples in the window
  kInvalidIndicator,   // indicator denominator <= epsilon somewhere in the window
  kConstantSource,     // subsystem current has zero variance in the window
  kConstantTarget,     // indicator has zero variance in the window
  kNoEstimableLag,     // every lag failed (degenerate embedding span)
};

std::string_view to_string(NullReason reason) noexcept;

struct SubsystemSeries {
  std::string name;
  std::vector<double> current;
};

// Time-aligned plant signals on a fixed sample grid.
struct PlantSeries {
  std::vector<double> flow;
  std::vector<double> pressure;
  std::vector<SubsystemSeries> subsystems;
  // Replaces total current as the indicator denominator when present.
  std::optional<std::vector<double>> power;
  // Per-sample validity from alignment; empty means every sample is valid.
  std::vector<std::uint8_t> sample_valid;

  std::size_t size() const noexcept { return flow.size(); }
};

struct TeFlowOptions {
  WindowSpec window;
  LagSpec lags;
  KnnConfig knn;
  double current_epsilon = 1e-9;
  // 0 uses std::thread::hardware_concurrency().
  std::size_t threads = 0;
  // Keep every per-lag estimate in the result cells.
  bool keep_lag_values = false;
};

struct TeFlowCell {
  std::optional<double> strength;  // max-over-lags TE, nats
  std::optional<std::size_t> argmax_lag;
  NullReason reason = NullReason::kNone;
  // Indexed by lag - 1; filled only with keep_lag_values.
  std::vector<std::optional<double>> lag_values;
};

struct TeFlowWindow {
  WindowBounds bounds;
  std::optional<double> indicator_mean;  // mean of the valid e_t in the window
  std::vector<TeFlowCell> cells;         // one per subsystem
};

struct TeFlowResult {
  std::vector<std::string> subsystems;
  std::size_t max_lag = 0;
  std::vector<TeFlowWindow> windows;
};

// Full pipeline: indicator construction, windowing, per-lag TE from every
// subsystem current to the indicator, and max over lags. Estimation
// failures become null cells; only malformed input throws.
TeFlowResult te_flow(const PlantSeries& data, const TeFlowOptions& options = {});

// Same, with the indicator supplied by the caller.
TeFlowResult te_flow(const EfficiencySeries& indicator,
                     const std::vector<SubsystemSeries>& subsystems,
                     std::span<const std::uint8_t> sample_valid, const TeFlowOptions& options = {});

}  // namespace teflow
