#include "teflow/telemetry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "teflow/error.hpp"
#include "teflow/run_config.hpp"

namespace teflow {
namespace {

ColumnMapping plant_mapping() {
  ColumnMapping m;
  m.subsystems = {{"c1", "comp1_current"}, {"c2", "comp2_current"}};
  return m;
}

TelemetryFrame read(const std::string& text, const ColumnMapping& m = plant_mapping()) {
  std::istringstream in(text);
  return read_csv(in, m.timestamp, m.data_columns());
}

const char* kFourRows =
    "timestamp,flow,pressure,comp1_current,comp2_current,inlet_temp\n"
    "2022-05-25T00:00:00Z,10,7.0,50,60,20\n"
    "2022-05-25T00:00:10Z,11,7.1,51,61,20\n"
    "2022-05-25T00:00:20Z,12,7.2,52,62,21\n"
    "2022-05-25T00:00:30Z,13,7.3,53,63,21\n";

TEST(LoadCsv, WellFormed) {
  const TelemetryFrame f = read(kFourRows);
  EXPECT_EQ(f.rows(), 4U);
  EXPECT_EQ(f.timestamps[0], 1653436800.0);
  EXPECT_EQ(f.timestamps[3] - f.timestamps[0], 30.0);
  EXPECT_EQ(f.column("comp2_current"), (std::vector<double>{60, 61, 62, 63}));
  EXPECT_EQ(f.missing_counts, (std::vector<std::size_t>{0, 0, 0, 0}));
}

TEST(LoadCsv, MissingFlowColumn) {
  try {
    read("timestamp,pressure,comp1_current,comp2_current\n0,1,2,3\n");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("'flow'"), std::string::npos) << e.what();
  }
}

TEST(LoadCsv, BlankCellIsMissing) {
  const TelemetryFrame f = read(
      "timestamp,flow,pressure,comp1_current,comp2_current\n"
      "0,1,2,3,4\n"
      "10,1,2,,4\n"
      "20,1,2,3,4\n");
  EXPECT_EQ(f.rows(), 3U);
  EXPECT_TRUE(is_missing(f.column("comp1_current")[1]));
  EXPECT_EQ(f.missing_counts, (std::vector<std::size_t>{0, 0, 1, 0}));
}

TEST(LoadCsv, UnparseableCellNamesLine) {
  try {
    read("timestamp,flow,pressure,comp1_current,comp2_current\n0,1,2,3,4\n10,1,abc,3,4\n");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("pressure"), std::string::npos) << e.what();
  }
}

TEST(LoadCsv, TimestampOrdering) {
  EXPECT_THROW(read("timestamp,flow,pressure,comp1_current,comp2_current\n10,1,2,3,4\n10,1,2,3,4\n"),
               DataError);
  EXPECT_THROW(read("timestamp,flow,pressure,comp1_current,comp2_current\n10,1,2,3,4\n0,1,2,3,4\n"),
               DataError);
  EXPECT_THROW(read("timestamp,flow,pressure,comp1_current,comp2_current\nnoon,1,2,3,4\n"), DataError);
}

TEST(ParseTimestamp, Formats) {
  EXPECT_EQ(parse_timestamp("1653436800"), 1653436800.0);
  EXPECT_EQ(parse_timestamp("1653436800.5"), 1653436800.5);
  EXPECT_EQ(parse_timestamp("2022-05-25T00:00:00Z"), 1653436800.0);
  EXPECT_EQ(parse_timestamp("2022-05-25 00:00:00"), 1653436800.0);
  EXPECT_EQ(parse_timestamp("2022-05-25T08:00:00+08:00"), 1653436800.0);
  EXPECT_EQ(parse_timestamp("2022-05-25T00:00:01.25"), 1653436801.25);
  EXPECT_EQ(parse_timestamp("2022-05-25"), 1653436800.0);
  EXPECT_EQ(parse_timestamp("1970-01-01T00:00:00Z"), 0.0);
  EXPECT_EQ(parse_timestamp("2000-03-01T00:00:00Z"), 951868800.0);
  EXPECT_FALSE(parse_timestamp("2022-13-01T00:00:00Z"));
  EXPECT_FALSE(parse_timestamp("yesterday"));
  EXPECT_FALSE(parse_timestamp(""));
}

TEST(AlignAndFill, AlreadyAlignedIsUnchanged) {
  const TelemetryFrame f = read(kFourRows);
  const AlignedFrame a = align_and_fill(f, {});
  EXPECT_EQ(a.timestamps, f.timestamps);
  for (std::size_t c = 0; c < f.columns.size(); ++c) EXPECT_EQ(a.values.column(c), f.columns[c]);
  EXPECT_EQ(a.filled_samples, 0U);
  EXPECT_EQ(a.invalid_samples, 0U);
}

std::string frame_with_gap(std::size_t rows, std::size_t gap_begin, std::size_t gap_len) {
  std::ostringstream s;
  s << "timestamp,flow,pressure,comp1_current,comp2_current\n";
  for (std::size_t t = 0; t < rows; ++t) {
    if (t >= gap_begin && t < gap_begin + gap_len) continue;
    s << t * 10 << ',' << t << ",7," << 50 + t << ",60\n";
  }
  return s.str();
}

TEST(AlignAndFill, ShortGapIsForwardFilled) {
  const AlignedFrame a = align_and_fill(read(frame_with_gap(20, 5, 2)), {10.0, 3});
  ASSERT_EQ(a.rows(), 20U);
  EXPECT_EQ(a.filled_samples, 2U);
  EXPECT_EQ(a.invalid_samples, 0U);
  EXPECT_TRUE(a.filled[5] && a.filled[6]);
  EXPECT_FALSE(a.filled[4] || a.filled[7]);
  EXPECT_EQ(a.column("flow")[5], 4.0);
  EXPECT_EQ(a.column("flow")[6], 4.0);
  EXPECT_EQ(a.column("flow")[7], 7.0);
}

TEST(AlignAndFill, LongGapInvalidatesOverlappingWindows) {
  const AlignedFrame a = align_and_fill(read(frame_with_gap(400, 150, 10)), {10.0, 3});
  ASSERT_EQ(a.rows(), 400U);
  EXPECT_EQ(a.invalid_samples, 10U);
  for (std::size_t t = 150; t < 160; ++t) EXPECT_FALSE(a.valid[t]);
  for (double v : a.values.values()) ASSERT_TRUE(std::isfinite(v));

  ColumnMapping m = plant_mapping();
  PlantSeries p = to_plant_series(a, m);
  TeFlowOptions o;
  o.window.window_len = 100;
  o.lags.max_lag = 5;
  o.threads = 1;
  const TeFlowResult r = te_flow(p, o);
  ASSERT_EQ(r.windows.size(), 4U);
  EXPECT_EQ(r.windows[1].cells[0].reason, NullReason::kWindowGap);
  EXPECT_EQ(r.windows[0].cells[0].reason, NullReason::kNone);
  EXPECT_EQ(r.windows[2].cells[0].reason, NullReason::kNone);
}

TEST(AlignAndFill, MissingCellCountsAsGap) {
  const AlignedFrame a = align_and_fill(read(
      "timestamp,flow,pressure,comp1_current,comp2_current\n"
      "0,1,2,3,4\n10,1,2,,4\n20,1,2,5,4\n"), {});
  EXPECT_EQ(a.column("comp1_current"), (std::vector<double>{3, 3, 5}));
  EXPECT_TRUE(a.filled[1]);
}

TEST(AlignAndFill, LeadingGapIsInvalid) {
  const AlignedFrame a = align_and_fill(read(
      "timestamp,flow,pressure,comp1_current,comp2_current\n"
      "0,1,2,,4\n10,1,2,6,4\n"), {});
  EXPECT_FALSE(a.valid[0]);
  EXPECT_EQ(a.column("comp1_current")[0], 6.0);
}

TEST(AlignAndFill, EmptyFrame) {
  EXPECT_THROW((void)align_and_fill(TelemetryFrame{}, {}), DataError);
}

TEST(ColumnMapping, Validation) {
  ColumnMapping m = plant_mapping();
  EXPECT_NO_THROW(m.validate());
  m.subsystems.push_back({"c3", "flow"});
  EXPECT_THROW(m.validate(), ConfigError);
  m = plant_mapping();
  m.subsystems.clear();
  EXPECT_THROW(m.validate(), ConfigError);
}

TEST(RunConfig, ParsesAndValidates) {
  const RunConfig cfg = parse_run_config(R"({
    "columns": {"timestamp": "ts", "flow": "f", "pressure": "p",
                "subsystems": [{"name": "comp1", "current": "i1"}]},
    "window": {"window_len": 120}, "lags": {"max_lag": 12},
    "knn": {"k": 4}, "sample_period": 5, "fill_limit": 0})");
  EXPECT_EQ(cfg.columns.timestamp, "ts");
  EXPECT_EQ(cfg.window.window_len, 120U);
  EXPECT_EQ(cfg.lags.max_lag, 12U);
  EXPECT_EQ(cfg.knn.k, 4U);
  EXPECT_EQ(cfg.knn.distance_floor, 1e-12);
  EXPECT_EQ(cfg.sample_period, 5.0);
  EXPECT_EQ(cfg.fill_limit, 0U);
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(parse_run_config(to_json(cfg)).window.window_len, 120U);
}

TEST(RunConfig, Defaults) {
  const RunConfig cfg = parse_run_config(
      R"({"columns": {"subsystems": [{"name": "a", "current": "a_current"}]}})");
  EXPECT_EQ(cfg.window.window_len, 180U);
  EXPECT_EQ(cfg.lags.max_lag, 36U);
  EXPECT_EQ(cfg.knn.k, 3U);
  EXPECT_EQ(cfg.sample_period, 10.0);
  EXPECT_EQ(cfg.fill_limit, 3U);
  EXPECT_EQ(cfg.current_epsilon, 1e-9);
}

TEST(RunConfig, Errors) {
  EXPECT_THROW(parse_run_config("{"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"columns": {}})"), ConfigError);
  EXPECT_THROW(parse_run_config(
                   R"({"columns": {"subsystems": [{"name": "a", "current": "b"}]}, "bogus": 1})"),
               ConfigError);
  EXPECT_THROW(parse_run_config(R"({"columns": {"subsystems": []}, "window": {"window_len": -5}})"),
               ConfigError);
  const RunConfig bad = parse_run_config(
      R"({"columns": {"subsystems": [{"name": "a", "current": "b"}]}, "lags": {"max_lag": 200}})");
  try {
    bad.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("max_lag + k + 2"), std::string::npos);
  }
}

}  // namespace
}  // namespace teflow
