#include "teflow/run_config.hpp"

#include <cinttypes>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <set>

#include "teflow/error.hpp"

namespace teflow {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.contains(key)) {
      throw ConfigError("config: unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read_positive(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw ConfigError("config: " + where + "." + key + " must be a number");
  }
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
      throw ConfigError("config: " + where + "." + key + " must be a positive integer");
    }
    out = v.get<T>();
  } else {
    if (!(v.get<double>() > 0.0)) {
      throw ConfigError("config: " + where + "." + key + " must be positive");
    }
    out = v.get<T>();
  }
}

std::string read_name(const json& obj, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) {
    throw ConfigError(std::string("config: columns.") + key + " must be a string");
  }
  return obj.at(key).get<std::string>();
}

}  // namespace

void RunConfig::validate() const {
  columns.validate();
  validate_window_and_lags(window, lags, knn);
  if (!(sample_period > 0.0)) throw ConfigError("sample_period must be positive");
  if (!(current_epsilon > 0.0)) throw ConfigError("current_epsilon must be positive");
}

TeFlowOptions RunConfig::teflow_options() const {
  TeFlowOptions o;
  o.window = window;
  o.lags = lags;
  o.knn = knn;
  o.current_epsilon = current_epsilon;
  return o;
}

RunConfig parse_run_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(root,
                 {"columns", "window", "lags", "knn", "sample_period", "fill_limit",
                  "current_epsilon"},
                 "config");

  RunConfig cfg;
  if (!root.contains("columns") || !root["columns"].is_object()) {
    throw ConfigError("config: 'columns' object is required");
  }
  const json& cols = root["columns"];
  reject_unknown(cols, {"timestamp", "flow", "pressure", "power", "subsystems"}, "columns");
  cfg.columns.timestamp = read_name(cols, "timestamp", cfg.columns.timestamp);
  cfg.columns.flow = read_name(cols, "flow", cfg.columns.flow);
  cfg.columns.pressure = read_name(cols, "pressure", cfg.columns.pressure);
  if (cols.contains("power") && !cols["power"].is_null()) {
    cfg.columns.power = read_name(cols, "power", "");
  }
  if (!cols.contains("subsystems") || !cols["subsystems"].is_array()) {
    throw ConfigError("config: columns.subsystems must be an array of {name, current}");
  }
  for (const json& s : cols["subsystems"]) {
    if (!s.is_object() || !s.contains("name") || !s.contains("current") ||
        !s["name"].is_string() || !s["current"].is_string()) {
      throw ConfigError("config: each subsystem needs string 'name' and 'current'");
    }
    reject_unknown(s, {"name", "current"}, "columns.subsystems[]");
    cfg.columns.subsystems.emplace_back(s["name"].get<std::string>(),
                                        s["current"].get<std::string>());
  }

  if (root.contains("window")) {
    reject_unknown(root["window"], {"window_len"}, "window");
    read_positive(root["window"], "window_len", cfg.window.window_len, "window");
  }
  if (root.contains("lags")) {
    reject_unknown(root["lags"], {"max_lag"}, "lags");
    read_positive(root["lags"], "max_lag", cfg.lags.max_lag, "lags");
  }
  if (root.contains("knn")) {
    reject_unknown(root["knn"], {"k", "distance_floor"}, "knn");
    read_positive(root["knn"], "k", cfg.knn.k, "knn");
    read_positive(root["knn"], "distance_floor", cfg.knn.distance_floor, "knn");
  }
  read_positive(root, "sample_period", cfg.sample_period, "config");
  if (root.contains("fill_limit")) {
    const json& v = root["fill_limit"];
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError("config: fill_limit must be a non-negative integer");
    }
    cfg.fill_limit = v.get<std::size_t>();
  }
  read_positive(root, "current_epsilon", cfg.current_epsilon, "config");
  return cfg;
}

std::string to_json(const RunConfig& config) {
  json subs = json::array();
  for (const auto& [name, col] : config.columns.subsystems) {
    subs.push_back({{"name", name}, {"current", col}});
  }
  json root = {
      {"columns",
       {{"timestamp", config.columns.timestamp},
        {"flow", config.columns.flow},
        {"pressure", config.columns.pressure},
        {"power", config.columns.power ? json(*config.columns.power) : json(nullptr)},
        {"subsystems", subs}}},
      {"window", {{"window_len", config.window.window_len}}},
      {"lags", {{"max_lag", config.lags.max_lag}}},
      {"knn", {{"k", config.knn.k}, {"distance_floor", config.knn.distance_floor}}},
      {"sample_period", config.sample_period},
      {"fill_limit", config.fill_limit},
      {"current_epsilon", config.current_epsilon},
  };
  return root.dump(2);
}

std::string canonical_json(std::string_view json_text) {
  try {
    return json::parse(json_text).dump(2);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

}  // namespace teflow
