#include "teflow/report.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <vector>

#include "teflow/error.hpp"

namespace teflow {
namespace {

using nlohmann::json;

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& s, std::size_t line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DataError("te-flow csv: line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

json optional_real(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

void write_teflow_csv(std::ostream& out, const TeFlowResult& result) {
  out << "window_start,window_end,subsystem,strength,argmax_lag,window_indicator\n";
  for (const auto& win : result.windows) {
    const std::string indicator = win.indicator_mean ? format_real(*win.indicator_mean) : "";
    for (std::size_t s = 0; s < win.cells.size(); ++s) {
      const auto& cell = win.cells[s];
      out << win.bounds.begin << ',' << win.bounds.end << ',' << result.subsystems[s] << ','
          << (cell.strength ? format_real(*cell.strength) : "") << ','
          << (cell.argmax_lag ? std::to_string(*cell.argmax_lag) : "") << ',' << indicator
          << '\n';
    }
  }
}

TeFlowResult read_teflow_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "window_start,window_end,subsystem,strength,argmax_lag,window_indicator") {
    throw DataError("te-flow csv: unexpected header");
  }
  TeFlowResult result;
  std::map<std::string, std::size_t> sub_index;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_commas(line);
    if (f.size() != 6) {
      throw DataError("te-flow csv: line " + std::to_string(line_no) + ": expected 6 fields");
    }
    const WindowBounds b{parse_number<std::size_t>(f[0], line_no),
                         parse_number<std::size_t>(f[1], line_no)};
    if (result.windows.empty() || !(result.windows.back().bounds == b)) {
      TeFlowWindow win;
      win.bounds = b;
      if (!f[5].empty()) win.indicator_mean = parse_number<double>(f[5], line_no);
      result.windows.push_back(std::move(win));
    }
    auto [it, inserted] = sub_index.try_emplace(f[2], result.subsystems.size());
    if (inserted) result.subsystems.push_back(f[2]);
    auto& cells = result.windows.back().cells;
    if (cells.size() != it->second) {
      throw DataError("te-flow csv: line " + std::to_string(line_no) +
                      ": subsystems out of order");
    }
    TeFlowCell cell;
    if (!f[3].empty()) cell.strength = parse_number<double>(f[3], line_no);
    if (!f[4].empty()) {
      cell.argmax_lag = parse_number<std::size_t>(f[4], line_no);
      result.max_lag = std::max(result.max_lag, *cell.argmax_lag);
    }
    cells.push_back(std::move(cell));
  }
  return result;
}

void write_plot_csv(std::ostream& out, const TeFlowResult& result,
                    std::span<const double> timestamps) {
  out << "window,time_start,time_end,series,value\n";
  for (std::size_t w = 0; w < result.windows.size(); ++w) {
    const auto& win = result.windows[w];
    const std::string prefix = std::to_string(w) + ',' +
                               format_real(timestamps[win.bounds.begin]) + ',' +
                               format_real(timestamps[win.bounds.end - 1]) + ',';
    if (win.indicator_mean) {
      out << prefix << "indicator," << format_real(*win.indicator_mean) << '\n';
    }
    for (std::size_t s = 0; s < win.cells.size(); ++s) {
      if (win.cells[s].strength) {
        out << prefix << result.subsystems[s] << ',' << format_real(*win.cells[s].strength)
            << '\n';
      }
    }
  }
}

void write_report_json(std::ostream& out, const TeFlowResult& result,
                       std::span<const double> timestamps, const ReportContext& ctx) {
  const std::string echo = canonical_json(ctx.config_text);
  json report;
  report["config"] = json::parse(echo);
  report["config_fnv1a64"] = fnv1a64_hex(echo);
  report["effective_config"] = json::parse(to_json(ctx.effective));
  report["input"] = {{"path", ctx.input_path},
                     {"rows", ctx.input_rows},
                     {"grid_rows", ctx.grid_rows},
                     {"filled_samples", ctx.filled_samples},
                     {"invalid_samples", ctx.invalid_samples}};
  report["subsystems"] = result.subsystems;
  report["units"] = "nats";

  json windows = json::array();
  for (std::size_t w = 0; w < result.windows.size(); ++w) {
    const auto& win = result.windows[w];
    json cells = json::array();
    for (std::size_t s = 0; s < win.cells.size(); ++s) {
      const auto& cell = win.cells[s];
      json c = {{"subsystem", result.subsystems[s]},
                {"strength", optional_real(cell.strength)},
                {"argmax_lag", cell.argmax_lag ? json(*cell.argmax_lag) : json(nullptr)},
                {"null_reason", cell.reason == NullReason::kNone
                                    ? json(nullptr)
                                    : json(std::string(to_string(cell.reason)))}};
      if (ctx.dump_lags) {
        json lags = json::array();
        for (const auto& v : cell.lag_values) lags.push_back(optional_real(v));
        c["lag_te"] = std::move(lags);
      }
      cells.push_back(std::move(c));
    }
    windows.push_back({{"index", w},
                       {"start", win.bounds.begin},
                       {"end", win.bounds.end},
                       {"time_start", timestamps[win.bounds.begin]},
                       {"time_end", timestamps[win.bounds.end - 1]},
                       {"indicator_mean", optional_real(win.indicator_mean)},
                       {"cells", std::move(cells)}});
  }
  report["windows"] = std::move(windows);
  out << report.dump(2) << '\n';
}

}  // namespace teflow
