#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>

#include "teflow/run_config.hpp"
#include "teflow/teflow.hpp"

namespace teflow {

// One row per window x subsystem:
//   window_start,window_end,subsystem,strength,argmax_lag,window_indicator
// Bounds are sample indices; reals use 17 significant digits; null cells
// leave the field empty.
void write_teflow_csv(std::ostream& out, const TeFlowResult& result);

// Inverse of write_teflow_csv. Reasons and per-lag values are not stored in
// the CSV and come back empty. Throws DataError on malformed input.
TeFlowResult read_teflow_csv(std::istream& in);

// Long-format table for plotting:
//   window,time_start,time_end,series,value
// series is "indicator" or the subsystem name; null values are skipped.
// `timestamps` maps sample indices to epoch seconds.
void write_plot_csv(std::ostream& out, const TeFlowResult& result,
                    std::span<const double> timestamps);

struct ReportContext {
  std::string input_path;
  std::string config_text;  // config file exactly as read
  RunConfig effective;      // after command-line overrides
  std::size_t input_rows = 0;
  std::size_t grid_rows = 0;
  std::size_t filled_samples = 0;
  std::size_t invalid_samples = 0;
  bool dump_lags = false;
};

// JSON report: config echo with its FNV-1a hash, effective config, data
// summary and per-window details (per-lag TE when ctx.dump_lags).
void write_report_json(std::ostream& out, const TeFlowResult& result,
                       std::span<const double> timestamps, const ReportContext& ctx);

}  // namespace teflow
