#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "teflow/sample_matrix.hpp"
#include "teflow/teflow.hpp"

namespace teflow {

// Which CSV columns carry the signals the analysis needs.
struct ColumnMapping {
  std::string timestamp = "timestamp";
  std::string flow = "flow";
  std::string pressure = "pressure";
  // Optional input-power column replacing total current in the indicator.
  std::optional<std::string> power;
  // (subsystem name, current column), in report order.
  std::vector<std::pair<std::string, std::string>> subsystems;

  // Throws ConfigError on empty names, duplicates, or no subsystems.
  void validate() const;
  // Data columns in load order: flow, pressure, [power], currents.
  std::vector<std::string> data_columns() const;
};

// Telemetry as read from disk: strictly increasing timestamps (seconds since
// the Unix epoch) and numeric columns where NaN marks a blank cell.
struct TelemetryFrame {
  std::vector<double> timestamps;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::vector<std::size_t> missing_counts;  // per column

  std::size_t rows() const noexcept { return timestamps.size(); }
  // Throws DataError if the column is absent.
  std::size_t index_of(std::string_view name) const;
  const std::vector<double>& column(std::string_view name) const {
    return columns[index_of(name)];
  }
};

inline bool is_missing(double v) noexcept { return v != v; }

// ISO-8601 (YYYY-MM-DD[T ]hh:mm:ss[.fff][Z|+hh:mm|-hh:mm]) or epoch seconds.
// Returns nullopt when the text is neither.
std::optional<double> parse_timestamp(std::string_view text);

// Reads the timestamp column plus `columns` from CSV text. Blank cells
// become missing markers; any other unparseable cell, an absent column, or
// a non-increasing timestamp throws DataError naming the column or the
// 1-based line.
TelemetryFrame read_csv(std::istream& in, std::string_view timestamp_column,
                        const std::vector<std::string>& columns);
TelemetryFrame load_csv(const std::filesystem::path& path, std::string_view timestamp_column,
                        const std::vector<std::string>& columns);
TelemetryFrame load_csv(const std::filesystem::path& path, const ColumnMapping& mapping);

// Writes a frame in the schema read_csv accepts (epoch-second timestamps,
// 17 significant digits, blank for missing).
void write_csv(std::ostream& out, const TelemetryFrame& frame, std::string_view timestamp_column);

struct AlignOptions {
  double sample_period = 10.0;  // seconds
  std::size_t fill_limit = 3;   // longest run of forward-filled samples
};

// Telemetry resampled onto the grid t0 + j * sample_period.
struct AlignedFrame {
  std::vector<double> timestamps;
  std::vector<std::string> names;
  SampleMatrix values;  // grid x column, always finite
  std::vector<std::uint8_t> filled;  // some column was forward-filled here
  std::vector<std::uint8_t> valid;   // every column observed or filled here
  std::size_t filled_samples = 0;
  std::size_t invalid_samples = 0;

  std::size_t rows() const noexcept { return timestamps.size(); }
  std::vector<double> column(std::string_view name) const;
};

// Each observation is assigned to the nearest grid slot (last one wins).
// A column run of empty slots no longer than fill_limit repeats the last
// observed value; longer runs, and slots before a column's first
// observation, are invalid. Throws DataError on an empty frame.
AlignedFrame align_and_fill(const TelemetryFrame& frame, const AlignOptions& options);

// Picks the mapped signals out of an aligned frame.
PlantSeries to_plant_series(const AlignedFrame& frame, const ColumnMapping& mapping);

}  // namespace teflow
