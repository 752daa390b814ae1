#include "teflow/teflow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "teflow/error.hpp"

namespace teflow {
namespace {

bool constant_over(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

TeFlowCell null_cell(NullReason reason, std::size_t max_lag, bool keep_lags) {
  TeFlowCell cell;
  cell.reason = reason;
  if (keep_lags) {
    cell.lag_values.assign(max_lag, std::nullopt);
  }
  return cell;
}

TeFlowCell estimate_cell(std::span<const double> source, std::span<const double> target,
                         const TeFlowOptions& options) {
  const std::size_t max_lag = options.lags.max_lag;
  TeFlowCell cell;
  if (options.keep_lag_values) {
    cell.lag_values.assign(max_lag, std::nullopt);
  }
  if (constant_over(source)) {
    return null_cell(NullReason::kConstantSource, max_lag, options.keep_lag_values);
  }
  if (constant_over(target)) {
    return null_cell(NullReason::kConstantTarget, max_lag, options.keep_lag_values);
  }

  std::vector<TeEstimate> estimates;
  estimates.reserve(max_lag);
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    try {
      TeEstimate est = transfer_entropy(source, target, lag, options.knn);
      if (options.keep_lag_values) {
        cell.lag_values[lag - 1] = est.value;
      }
      estimates.push_back(est);
    } catch (const DataError&) {
      // a step change at the window edge can leave one lag's span constant
    }
  }
  if (estimates.empty()) {
    cell.reason = NullReason::kNoEstimableLag;
    return cell;
  }
  const LagMaximum best = max_over_lags(estimates);
  cell.strength = best.value;
  cell.argmax_lag = best.lag;
  return cell;
}

}  // namespace

void validate_window_and_lags(const WindowSpec& window, const LagSpec& lags,
                              const KnnConfig& knn) {
  knn.validate();
  if (window.window_len == 0) {
    throw ConfigError("window_len must be positive");
  }
  if (lags.max_lag == 0) {
    throw ConfigError("max_lag must be positive");
  }
  if (window.window_len < lags.max_lag + knn.k + 2) {
    throw ConfigError("window_len (" + std::to_string(window.window_len) +
                      ") must be at least max_lag + k + 2 (" +
                      std::to_string(lags.max_lag + knn.k + 2) + ")");
  }
}

std::vector<WindowBounds> window_partition(std::size_t sample_count, const WindowSpec& spec) {
  if (spec.window_len == 0) {
    throw ConfigError("window_len must be positive");
  }
  if (sample_count < spec.window_len) {
    throw DataError("nothing to analyze: " + std::to_string(sample_count) +
                    " samples is shorter than one window of " +
                    std::to_string(spec.window_len));
  }
  std::vector<WindowBounds> out;
  out.reserve(sample_count / spec.window_len);
  for (std::size_t begin = 0; begin + spec.window_len <= sample_count;
       begin += spec.window_len) {
    out.push_back({begin, begin + spec.window_len});
  }
  return out;
}

EfficiencySeries compute_indicator(std::span<const double> flow, std::span<const double> pressure,
                                   const std::vector<std::vector<double>>& currents,
                                   double current_epsilon) {
  if (currents.empty()) {
    throw DataError("indicator: no subsystem currents");
  }
  const std::size_t n = flow.size();
  if (pressure.size() != n) {
    throw DataError("indicator: pressure has " + std::to_string(pressure.size()) +
                    " samples, flow has " + std::to_string(n));
  }
  for (std::size_t s = 0; s < currents.size(); ++s) {
    if (currents[s].size() != n) {
      throw DataError("indicator: current " + std::to_string(s) + " has " +
                      std::to_string(currents[s].size()) + " samples, flow has " +
                      std::to_string(n));
    }
  }

  EfficiencySeries e;
  e.values.assign(n, 0.0);
  e.valid.assign(n, 0);
  for (std::size_t t = 0; t < n; ++t) {
    double total = 0.0;
    for (const auto& c : currents) {
      total += c[t];
    }
    if (!(total > current_epsilon)) {
      continue;
    }
    const double value = flow[t] * pressure[t] / total;
    if (std::isfinite(value)) {
      e.values[t] = value;
      e.valid[t] = 1;
    }
  }
  return e;
}

LagMaximum max_over_lags(std::span<const TeEstimate> estimates) {
  if (estimates.empty()) {
    throw std::invalid_argument("max over lags: no estimates");
  }
  LagMaximum best{estimates.front().value, estimates.front().lag};
  for (const TeEstimate& est : estimates.subspan(1)) {
    if (est.value > best.value || (est.value == best.value && est.lag < best.lag)) {
      best = {est.value, est.lag};
    }
  }
  return best;
}

std::string_view to_string(NullReason reason) noexcept {
  switch (reason) {
    case NullReason::kNone:
      return "";
    case NullReason::kWindowGap:
      return "window_gap";
    case NullReason::kInvalidIndicator:
      return "invalid_indicator";
    case NullReason::kConstantSource:
      return "constant_source";
    case NullReason::kConstantTarget:
      return "constant_target";
    case NullReason::kNoEstimableLag:
      return "no_estimable_lag";
  }
  return "unknown";
}

TeFlowResult te_flow(const PlantSeries& data, const TeFlowOptions& options) {
  if (data.subsystems.empty()) {
    throw DataError("te flow: no subsystems");
  }
  std::vector<std::vector<double>> denominators;
  if (data.power) {
    denominators.push_back(*data.power);
  } else {
    for (const auto& s : data.subsystems) {
      denominators.push_back(s.current);
    }
  }
  const EfficiencySeries e =
      compute_indicator(data.flow, data.pressure, denominators, options.current_epsilon);
  return te_flow(e, data.subsystems, data.sample_valid, options);
}

TeFlowResult te_flow(const EfficiencySeries& indicator,
                     const std::vector<SubsystemSeries>& subsystems,
                     std::span<const std::uint8_t> sample_valid, const TeFlowOptions& options) {
  validate_window_and_lags(options.window, options.lags, options.knn);
  if (subsystems.empty()) {
    throw DataError("te flow: no subsystems");
  }
  const std::size_t n = indicator.size();
  if (indicator.valid.size() != n) {
    throw DataError("te flow: indicator validity mask has the wrong length");
  }
  if (!sample_valid.empty() && sample_valid.size() != n) {
    throw DataError("te flow: sample validity mask has " + std::to_string(sample_valid.size()) +
                    " entries, indicator has " + std::to_string(n));
  }
  for (const auto& s : subsystems) {
    if (s.current.size() != n) {
      throw DataError("te flow: subsystem '" + s.name + "' has " +
                      std::to_string(s.current.size()) + " samples, indicator has " +
                      std::to_string(n));
    }
    for (std::size_t t = 0; t < n; ++t) {
      if (!std::isfinite(s.current[t])) {
        throw DataError("te flow: subsystem '" + s.name + "' has a non-finite value at sample " +
                        std::to_string(t));
      }
    }
  }

  TeFlowResult result;
  result.max_lag = options.lags.max_lag;
  for (const auto& s : subsystems) {
    result.subsystems.push_back(s.name);
  }

  const auto bounds = window_partition(n, options.window);
  const std::size_t n_sub = subsystems.size();
  result.windows.resize(bounds.size());
  std::vector<NullReason> window_reason(bounds.size(), NullReason::kNone);

  for (std::size_t w = 0; w < bounds.size(); ++w) {
    auto& win = result.windows[w];
    win.bounds = bounds[w];
    win.cells.resize(n_sub);
    double sum = 0.0;
    std::size_t valid = 0;
    for (std::size_t t = win.bounds.begin; t < win.bounds.end; ++t) {
      if (!sample_valid.empty() && !sample_valid[t]) {
        window_reason[w] = NullReason::kWindowGap;
      }
      if (indicator.valid[t]) {
        sum += indicator.values[t];
        ++valid;
      } else if (window_reason[w] == NullReason::kNone) {
        window_reason[w] = NullReason::kInvalidIndicator;
      }
    }
    if (valid > 0) {
      win.indicator_mean = sum / static_cast<double>(valid);
    }
  }

  const std::size_t cell_count = bounds.size() * n_sub;
  auto run_cell = [&](std::size_t index) {
    const std::size_t w = index / n_sub;
    const std::size_t s = index % n_sub;
    const WindowBounds b = bounds[w];
    if (window_reason[w] != NullReason::kNone) {
      result.windows[w].cells[s] =
          null_cell(window_reason[w], options.lags.max_lag, options.keep_lag_values);
      return;
    }
    const std::span<const double> target(indicator.values.data() + b.begin, b.end - b.begin);
    const std::span<const double> source(subsystems[s].current.data() + b.begin,
                                         b.end - b.begin);
    result.windows[w].cells[s] = estimate_cell(source, target, options);
  };

  std::size_t threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(cell_count, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < cell_count; ++i) {
      run_cell(i);
    }
    return result;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) {
      pool.emplace_back([&, i] {
        try {
          for (std::size_t c = next++; c < cell_count; c = next++) {
            run_cell(c);
          }
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
  }
  for (const auto& err : errors) {
    if (err) {
      std::rethrow_exception(err);
    }
  }
  return result;
}

}  // namespace teflow
