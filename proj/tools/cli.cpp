#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "teflow/entropy.hpp"
#include "teflow/error.hpp"
#include "teflow/report.hpp"
#include "teflow/run_config.hpp"
#include "teflow/synth.hpp"
#include "teflow/teflow.hpp"
#include "teflow/telemetry.hpp"
#include "teflow/transfer_entropy.hpp"

namespace teflow::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create '" + dir.string() + "': " + ec.message());
}

struct Overrides {
  std::optional<std::size_t> k;
  std::optional<std::size_t> window_len;
  std::optional<std::size_t> max_lag;
};

void apply(const Overrides& o, RunConfig& cfg) {
  if (o.k) cfg.knn.k = *o.k;
  if (o.window_len) cfg.window.window_len = *o.window_len;
  if (o.max_lag) cfg.lags.max_lag = *o.max_lag;
}

struct AnalyzeArgs {
  std::string input;
  std::string config;
  std::string out;
  bool dump_lags = false;
  std::size_t threads = 0;
  Overrides overrides;
};

void run_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const std::string config_text = read_file(a.config);
  RunConfig cfg = parse_run_config(config_text);
  apply(a.overrides, cfg);
  cfg.validate();

  const TelemetryFrame frame = load_csv(a.input, cfg.columns);
  const AlignedFrame aligned = align_and_fill(frame, cfg.align_options());
  TeFlowOptions options = cfg.teflow_options();
  options.threads = a.threads;
  options.keep_lag_values = a.dump_lags;
  const TeFlowResult result = te_flow(to_plant_series(aligned, cfg.columns), options);

  const fs::path dir(a.out);
  ensure_directory(dir);
  {
    auto f = open_output(dir / "teflow.csv");
    write_teflow_csv(f, result);
  }
  {
    auto f = open_output(dir / "plot.csv");
    write_plot_csv(f, result, aligned.timestamps);
  }
  {
    ReportContext ctx;
    ctx.input_path = a.input;
    ctx.config_text = config_text;
    ctx.effective = cfg;
    ctx.input_rows = frame.rows();
    ctx.grid_rows = aligned.rows();
    ctx.filled_samples = aligned.filled_samples;
    ctx.invalid_samples = aligned.invalid_samples;
    ctx.dump_lags = a.dump_lags;
    auto f = open_output(dir / "report.json");
    write_report_json(f, result, aligned.timestamps, ctx);
  }

  std::size_t nulls = 0;
  for (const auto& w : result.windows) {
    nulls += static_cast<std::size_t>(
        std::count_if(w.cells.begin(), w.cells.end(), [](const auto& c) { return !c.strength; }));
  }
  out << "windows=" << result.windows.size() << " subsystems=" << result.subsystems.size()
      << " null_cells=" << nulls << " out=" << dir.string() << '\n';
}

// Columns for the one-shot estimators. "efficiency" is derived from the
// config mapping when the CSV has no column of that name.
struct SeriesSource {
  std::string input;
  std::string config;
  std::string timestamp = "timestamp";
};

std::vector<std::vector<double>> load_series(const SeriesSource& src,
                                             const std::vector<std::string>& names) {
  std::optional<RunConfig> cfg;
  std::string timestamp = src.timestamp;
  if (!src.config.empty()) {
    cfg = parse_run_config(read_file(src.config));
    cfg->columns.validate();
    timestamp = cfg->columns.timestamp;
  }

  std::vector<std::string> header;
  {
    std::ifstream in(src.input);
    if (!in) throw DataError("csv: cannot open '" + src.input + "'");
    std::string line;
    std::getline(in, line);
    std::stringstream ss(line);
    std::string h;
    while (std::getline(ss, h, ',')) {
      while (!h.empty() && (h.back() == '\r' || h.back() == ' ')) h.pop_back();
      header.push_back(h);
    }
  }
  auto in_csv = [&](const std::string& n) {
    return std::find(header.begin(), header.end(), n) != header.end();
  };

  std::vector<std::string> wanted;
  bool need_efficiency = false;
  for (const auto& n : names) {
    if (n == "efficiency" && !in_csv(n)) {
      need_efficiency = true;
    } else if (std::find(wanted.begin(), wanted.end(), n) == wanted.end()) {
      wanted.push_back(n);
    }
  }
  if (need_efficiency) {
    if (!cfg) throw ConfigError("'efficiency' is not a CSV column; pass --config to derive it");
    for (const auto& c : cfg->columns.data_columns()) {
      if (std::find(wanted.begin(), wanted.end(), c) == wanted.end()) wanted.push_back(c);
    }
  }

  const TelemetryFrame frame = load_csv(src.input, timestamp, wanted);
  const AlignedFrame aligned = align_and_fill(
      frame, cfg ? cfg->align_options() : AlignOptions{});
  if (aligned.invalid_samples > 0) {
    throw DataError(std::to_string(aligned.invalid_samples) +
                    " samples are missing beyond the fill limit");
  }

  std::optional<EfficiencySeries> efficiency;
  if (need_efficiency) {
    const PlantSeries plant = to_plant_series(aligned, cfg->columns);
    std::vector<std::vector<double>> denominators;
    if (plant.power) {
      denominators.push_back(*plant.power);
    } else {
      for (const auto& s : plant.subsystems) denominators.push_back(s.current);
    }
    efficiency = compute_indicator(plant.flow, plant.pressure, denominators, cfg->current_epsilon);
    const auto bad = std::find(efficiency->valid.begin(), efficiency->valid.end(), 0);
    if (bad != efficiency->valid.end()) {
      throw DataError("efficiency undefined at sample " +
                      std::to_string(bad - efficiency->valid.begin()) +
                      " (total current <= current_epsilon)");
    }
  }

  std::vector<std::vector<double>> out;
  for (const auto& n : names) {
    if (n == "efficiency" && need_efficiency) {
      out.push_back(efficiency->values);
    } else {
      out.push_back(aligned.column(n));
    }
  }
  return out;
}

void write_synth(const std::string& kind, std::uint64_t seed, const fs::path& dir,
                 std::size_t samples, std::size_t subsystems, std::size_t segments,
                 std::size_t windows_per_segment, const std::vector<std::size_t>& lags,
                 const std::vector<std::size_t>& constant, double rho, std::ostream& out) {
  ensure_directory(dir);
  json truth;
  truth["kind"] = kind;
  truth["seed"] = seed;
  truth["rng"] = "mt19937_64, uniform=(bits>>11)*2^-53, normal=Box-Muller (cos then sin)";

  if (kind == "cas") {
    synth::CasScenarioSpec spec;
    spec.subsystems = subsystems;
    spec.seed = seed;
    spec.constant_subsystems = constant;
    std::size_t driver = 0;
    for (std::size_t i = 0; i < segments; ++i) {
      while (std::find(constant.begin(), constant.end(), driver % subsystems) != constant.end()) {
        ++driver;
        if (driver > 2 * subsystems) throw ConfigError("synth: every subsystem is constant");
      }
      spec.segments.push_back({driver % subsystems, lags[i % lags.size()], windows_per_segment});
      ++driver;
    }
    const auto sc = synth::gen_cas_scenario(spec);
    {
      auto f = open_output(dir / "data.csv");
      write_csv(f, sc.frame, "timestamp");
    }
    json segs = json::array();
    for (const auto& s : spec.segments) {
      segs.push_back({{"driver", sc.subsystem_names[s.driver]}, {"lag", s.lag}, {"windows", s.windows}});
    }
    json drivers = json::array();
    for (std::size_t w = 0; w < sc.window_driver.size(); ++w) {
      drivers.push_back({{"window", w},
                         {"driver", sc.subsystem_names[sc.window_driver[w]]},
                         {"lag", sc.window_lag[w]}});
    }
    truth["window_len"] = spec.window_len;
    truth["segments"] = segs;
    truth["windows"] = drivers;
    json constant_names = json::array();
    for (const auto c : constant) constant_names.push_back(sc.subsystem_names.at(c));
    truth["constant_subsystems"] = constant_names;

    RunConfig cfg;
    cfg.columns = sc.mapping();
    cfg.window.window_len = spec.window_len;
    cfg.sample_period = spec.sample_period;
    auto f = open_output(dir / "config.json");
    f << to_json(cfg) << '\n';
  } else if (kind == "var") {
    synth::CoupledVarSpec spec;
    spec.samples = samples;
    spec.true_lag = lags.front();
    spec.seed = seed;
    const auto s = synth::gen_coupled_var(spec);
    TelemetryFrame frame;
    for (std::size_t t = 0; t < s.x.size(); ++t) frame.timestamps.push_back(10.0 * static_cast<double>(t));
    frame.names = {"x", "y"};
    frame.columns = {s.x, s.y};
    frame.missing_counts = {0, 0};
    auto f = open_output(dir / "data.csv");
    write_csv(f, frame, "timestamp");
    truth["self_coef"] = spec.self_coef;
    truth["coupling"] = spec.coupling;
    truth["noise_std"] = spec.noise_std;
    truth["true_lag"] = spec.true_lag;
    truth["oracle_linear_te"] = synth::oracle_linear_te(spec);
  } else if (kind == "gaussian") {
    synth::GaussianCopulaSpec spec{synth::correlation_2d(rho), samples, seed};
    const SampleMatrix m = synth::gen_gaussian_copula(spec);
    TelemetryFrame frame;
    for (std::size_t t = 0; t < m.rows(); ++t) frame.timestamps.push_back(10.0 * static_cast<double>(t));
    frame.names = {"x1", "x2"};
    frame.columns = {m.column(0), m.column(1)};
    frame.missing_counts = {0, 0};
    auto f = open_output(dir / "data.csv");
    write_csv(f, frame, "timestamp");
    truth["rho"] = rho;
    truth["oracle_mi"] = synth::oracle_gaussian_mi(spec.correlation);
  } else {
    throw ConfigError("synth: unknown kind '" + kind + "'");
  }

  auto f = open_output(dir / "truth.json");
  f << truth.dump(2) << '\n';
  out << "wrote " << (dir / "data.csv").string() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Copula-entropy transfer entropy and TE-flow root cause analysis", "teflow"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Windowed TE flow from every subsystem to the efficiency indicator");
  an->add_option("--input", analyze.input, "Telemetry CSV")->required();
  an->add_option("--config", analyze.config, "Run config JSON")->required();
  an->add_option("--out", analyze.out, "Output directory")->required();
  an->add_flag("--dump-lags", analyze.dump_lags, "Include per-lag TE in report.json");
  an->add_option("--threads", analyze.threads, "Worker threads (0 = all cores)");
  auto add_overrides = [](CLI::App* cmd, Overrides& o) {
    cmd->add_option("--k", o.k, "Neighbor count")->check(CLI::PositiveNumber);
    cmd->add_option("--window-len", o.window_len, "Window length in samples")->check(CLI::PositiveNumber);
    cmd->add_option("--max-lag", o.max_lag, "Largest lag in samples")->check(CLI::PositiveNumber);
  };
  add_overrides(an, analyze.overrides);

  SeriesSource ce_src;
  std::vector<std::string> ce_columns;
  std::size_t ce_k = 3;
  auto* ce = app.add_subcommand("ce", "Copula entropy (nats) of the named columns");
  ce->add_option("--input", ce_src.input, "CSV file")->required();
  ce->add_option("--columns", ce_columns, "Columns (comma separated)")->required()->delimiter(',');
  ce->add_option("--config", ce_src.config, "Run config, for the timestamp column and 'efficiency'");
  ce->add_option("--timestamp", ce_src.timestamp, "Timestamp column");
  ce->add_option("--k", ce_k, "Neighbor count")->check(CLI::PositiveNumber);

  SeriesSource te_src;
  std::string te_source, te_target;
  std::size_t te_lag = 1;
  std::size_t te_k = 3;
  auto* te = app.add_subcommand("te", "Transfer entropy (nats) from --source to --target");
  te->add_option("--input", te_src.input, "CSV file")->required();
  te->add_option("--source", te_source, "Source column")->required();
  te->add_option("--target", te_target, "Target column, or 'efficiency'")->required();
  te->add_option("--lag", te_lag, "Lag in samples")->check(CLI::PositiveNumber);
  te->add_option("--config", te_src.config, "Run config, for the timestamp column and 'efficiency'");
  te->add_option("--timestamp", te_src.timestamp, "Timestamp column");
  te->add_option("--k", te_k, "Neighbor count")->check(CLI::PositiveNumber);

  std::string synth_kind = "cas";
  std::uint64_t seed = 1;
  std::string synth_out;
  std::size_t samples = 5000, subsystems = 2, segments = 2, windows_per_segment = 5;
  std::vector<std::size_t> lags{3, 6};
  std::vector<std::size_t> constant;
  double rho = 0.9;
  auto* sy = app.add_subcommand("synth", "Write a synthetic dataset with ground truth");
  sy->add_option("--kind", synth_kind, "cas | var | gaussian")
      ->check(CLI::IsMember({"cas", "var", "gaussian"}));
  sy->add_option("--seed", seed, "Generator seed");
  sy->add_option("--out", synth_out, "Output directory")->required();
  sy->add_option("--samples", samples, "Sample count (var, gaussian)")->check(CLI::PositiveNumber);
  sy->add_option("--subsystems", subsystems, "Subsystem count (cas)")->check(CLI::PositiveNumber);
  sy->add_option("--segments", segments, "Segments with distinct drivers (cas)")->check(CLI::PositiveNumber);
  sy->add_option("--windows-per-segment", windows_per_segment, "Windows per segment (cas)")
      ->check(CLI::PositiveNumber);
  sy->add_option("--lags", lags, "Coupling lag per segment (cas) or the VAR lag")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sy->add_option("--constant", constant, "Zero-based subsystems held constant (cas)")->delimiter(',');
  sy->add_option("--rho", rho, "Correlation (gaussian)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "teflow: error[config]: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    if (an->parsed()) {
      run_analyze(analyze, out);
    } else if (ce->parsed()) {
      const auto cols = load_series(ce_src, ce_columns);
      const SampleMatrix m = SampleMatrix::from_columns(cols);
      KnnConfig knn;
      knn.k = ce_k;
      out << format_real(copula_entropy(m, knn)) << '\n';
    } else if (te->parsed()) {
      const auto cols = load_series(te_src, {te_source, te_target});
      KnnConfig knn;
      knn.k = te_k;
      const TeEstimate est = transfer_entropy(cols[0], cols[1], te_lag, knn);
      out << format_real(est.value) << '\n';
    } else if (sy->parsed()) {
      write_synth(synth_kind, seed, synth_out, samples, subsystems, segments, windows_per_segment,
                  lags, constant, rho, out);
    }
  } catch (const ConfigError& e) {
    err << "teflow: error[config]: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const DataError& e) {
    err << "teflow: error[data]: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::invalid_argument& e) {
    err << "teflow: error[config]: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitOk;
}

}  // namespace teflow::cli
