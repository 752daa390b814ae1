#include "teflow/telemetry.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>

#include "teflow/error.hpp"

namespace teflow {
namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits one CSV record. Double quotes group fields and "" escapes a quote.
std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

template <typename Int>
bool parse_fixed(std::string_view s, std::size_t pos, std::size_t len, Int& out) {
  if (pos + len > s.size()) return false;
  const char* first = s.data() + pos;
  const auto [ptr, ec] = std::from_chars(first, first + len, out);
  return ec == std::errc{} && ptr == first + len;
}

// Days since 1970-01-01 of a proleptic Gregorian date.
long long days_from_civil(long long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

}  // namespace

void ColumnMapping::validate() const {
  if (subsystems.empty()) {
    throw ConfigError("column mapping: at least one subsystem current column is required");
  }
  std::set<std::string> seen;
  auto claim = [&](const std::string& col, const std::string& role) {
    if (col.empty()) {
      throw ConfigError("column mapping: empty column name for " + role);
    }
    if (!seen.insert(col).second) {
      throw ConfigError("column mapping: column '" + col + "' is used twice");
    }
  };
  claim(timestamp, "timestamp");
  claim(flow, "flow");
  claim(pressure, "pressure");
  if (power) claim(*power, "power");
  std::set<std::string> names;
  for (const auto& [name, col] : subsystems) {
    if (name.empty() || !names.insert(name).second) {
      throw ConfigError("column mapping: subsystem names must be non-empty and distinct");
    }
    claim(col, "subsystem '" + name + "'");
  }
}

std::vector<std::string> ColumnMapping::data_columns() const {
  std::vector<std::string> out{flow, pressure};
  if (power) out.push_back(*power);
  for (const auto& s : subsystems) out.push_back(s.second);
  return out;
}

std::size_t TelemetryFrame::index_of(std::string_view name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    throw DataError("missing column '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - names.begin());
}

std::optional<double> parse_timestamp(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.size() < 10 || text[4] != '-') {
    return parse_double(text);
  }

  long long year = 0;
  unsigned month = 0, day = 0, hour = 0, minute = 0;
  double second = 0.0;
  if (!parse_fixed(text, 0, 4, year) || text[4] != '-' || !parse_fixed(text, 5, 2, month) ||
      text[7] != '-' || !parse_fixed(text, 8, 2, day)) {
    return std::nullopt;
  }
  if (month < 1 || month > 12 || day < 1 || day > 31) return std::nullopt;
  std::size_t pos = 10;
  if (pos < text.size()) {
    if (text[pos] != 'T' && text[pos] != ' ') return std::nullopt;
    if (!parse_fixed(text, pos + 1, 2, hour) || text.size() <= pos + 3 || text[pos + 3] != ':' ||
        !parse_fixed(text, pos + 4, 2, minute)) {
      return std::nullopt;
    }
    pos += 6;
    if (pos < text.size() && text[pos] == ':') {
      std::size_t end = pos + 1;
      while (end < text.size() && (std::isdigit(static_cast<unsigned char>(text[end])) ||
                                   text[end] == '.')) {
        ++end;
      }
      const auto sec = parse_double(text.substr(pos + 1, end - pos - 1));
      if (!sec) return std::nullopt;
      second = *sec;
      pos = end;
    }
    if (hour > 23 || minute > 59 || second < 0.0 || second >= 61.0) return std::nullopt;
  }

  double offset = 0.0;
  if (pos < text.size()) {
    const std::string_view zone = text.substr(pos);
    if (zone == "Z") {
      offset = 0.0;
    } else if ((zone[0] == '+' || zone[0] == '-') && zone.size() == 6 && zone[3] == ':') {
      unsigned oh = 0, om = 0;
      if (!parse_fixed(zone, 1, 2, oh) || !parse_fixed(zone, 4, 2, om)) return std::nullopt;
      offset = (zone[0] == '+' ? 1.0 : -1.0) * (oh * 3600.0 + om * 60.0);
    } else {
      return std::nullopt;
    }
  }

  const long long days = days_from_civil(year, month, day);
  return static_cast<double>(days) * 86400.0 + hour * 3600.0 + minute * 60.0 + second - offset;
}

TelemetryFrame read_csv(std::istream& in, std::string_view timestamp_column,
                        const std::vector<std::string>& columns) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("csv: missing header row");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  std::vector<std::string> header = split_record(line);
  for (auto& h : header) h = std::string(trim(h));

  auto find_col = [&](std::string_view name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw DataError("csv: missing column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ts_col = find_col(timestamp_column);
  std::vector<std::size_t> col_idx;
  for (const auto& c : columns) col_idx.push_back(find_col(c));

  TelemetryFrame frame;
  frame.names = columns;
  frame.columns.resize(columns.size());
  frame.missing_counts.assign(columns.size(), 0);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_record(line);
    auto field = [&](std::size_t i) -> std::string_view {
      return i < fields.size() ? std::string_view(fields[i]) : std::string_view{};
    };

    const auto ts = parse_timestamp(field(ts_col));
    if (!ts) {
      throw DataError("csv: line " + std::to_string(line_no) + ": unparseable timestamp '" +
                      std::string(field(ts_col)) + "'");
    }
    if (!frame.timestamps.empty()) {
      if (*ts == frame.timestamps.back()) {
        throw DataError("csv: line " + std::to_string(line_no) + ": duplicate timestamp");
      }
      if (*ts < frame.timestamps.back()) {
        throw DataError("csv: line " + std::to_string(line_no) + ": timestamps not increasing");
      }
    }
    frame.timestamps.push_back(*ts);

    for (std::size_t j = 0; j < col_idx.size(); ++j) {
      const std::string_view cell = trim(field(col_idx[j]));
      if (cell.empty()) {
        frame.columns[j].push_back(kMissing);
        ++frame.missing_counts[j];
        continue;
      }
      const auto v = parse_double(cell);
      if (!v) {
        throw DataError("csv: line " + std::to_string(line_no) + ": column '" + columns[j] +
                        "': unparseable value '" + std::string(cell) + "'");
      }
      frame.columns[j].push_back(*v);
    }
  }
  return frame;
}

TelemetryFrame load_csv(const std::filesystem::path& path, std::string_view timestamp_column,
                        const std::vector<std::string>& columns) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("csv: cannot open '" + path.string() + "'");
  }
  return read_csv(in, timestamp_column, columns);
}

TelemetryFrame load_csv(const std::filesystem::path& path, const ColumnMapping& mapping) {
  mapping.validate();
  return load_csv(path, mapping.timestamp, mapping.data_columns());
}

void write_csv(std::ostream& out, const TelemetryFrame& frame, std::string_view timestamp_column) {
  out << timestamp_column;
  for (const auto& n : frame.names) out << ',' << n;
  out << '\n';
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    out << format_double(frame.timestamps[r]);
    for (const auto& col : frame.columns) {
      out << ',';
      if (!is_missing(col[r])) out << format_double(col[r]);
    }
    out << '\n';
  }
}

std::vector<double> AlignedFrame::column(std::string_view name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    throw DataError("missing column '" + std::string(name) + "'");
  }
  return values.column(static_cast<std::size_t>(it - names.begin()));
}

AlignedFrame align_and_fill(const TelemetryFrame& frame, const AlignOptions& options) {
  if (frame.rows() == 0) {
    throw DataError("align: empty frame");
  }
  if (!(options.sample_period > 0.0)) {
    throw ConfigError("align: sample_period must be positive");
  }
  const double t0 = frame.timestamps.front();
  const double span = frame.timestamps.back() - t0;
  const auto slots = static_cast<std::size_t>(std::llround(span / options.sample_period)) + 1;
  const std::size_t n_cols = frame.columns.size();

  AlignedFrame out;
  out.names = frame.names;
  out.timestamps.resize(slots);
  for (std::size_t j = 0; j < slots; ++j) {
    out.timestamps[j] = t0 + static_cast<double>(j) * options.sample_period;
  }
  out.values = SampleMatrix(slots, n_cols);
  out.filled.assign(slots, 0);
  out.valid.assign(slots, 1);

  // observed[j * n_cols + c] marks a fresh observation in slot j
  std::vector<std::uint8_t> observed(slots * n_cols, 0);
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    const auto j = static_cast<std::size_t>(
        std::llround((frame.timestamps[r] - t0) / options.sample_period));
    for (std::size_t c = 0; c < n_cols; ++c) {
      const double v = frame.columns[c][r];
      if (!is_missing(v)) {
        out.values(j, c) = v;
        observed[j * n_cols + c] = 1;
      }
    }
  }

  for (std::size_t c = 0; c < n_cols; ++c) {
    std::optional<double> last;
    std::size_t j = 0;
    while (j < slots) {
      if (observed[j * n_cols + c]) {
        last = out.values(j, c);
        ++j;
        continue;
      }
      std::size_t run_end = j;
      while (run_end < slots && !observed[run_end * n_cols + c]) ++run_end;
      const bool fillable = last.has_value() && run_end - j <= options.fill_limit;
      // carry a finite placeholder into invalid slots as well
      double carry = 0.0;
      if (last) {
        carry = *last;
      } else if (run_end < slots) {
        carry = out.values(run_end, c);
      }
      for (std::size_t m = j; m < run_end; ++m) {
        out.values(m, c) = carry;
        if (fillable) {
          out.filled[m] = 1;
        } else {
          out.valid[m] = 0;
        }
      }
      j = run_end;
    }
  }

  for (std::size_t j = 0; j < slots; ++j) {
    out.filled_samples += out.filled[j];
    out.invalid_samples += out.valid[j] ? 0 : 1;
  }
  return out;
}

PlantSeries to_plant_series(const AlignedFrame& frame, const ColumnMapping& mapping) {
  PlantSeries p;
  p.flow = frame.column(mapping.flow);
  p.pressure = frame.column(mapping.pressure);
  if (mapping.power) p.power = frame.column(*mapping.power);
  for (const auto& [name, col] : mapping.subsystems) {
    p.subsystems.push_back({name, frame.column(col)});
  }
  p.sample_valid = frame.valid;
  return p;
}

}  // namespace teflow
