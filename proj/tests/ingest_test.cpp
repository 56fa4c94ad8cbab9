#include <gtest/gtest.h>

#include <fstream>
#include <functional>
#include <sstream>

#include "fixtures.hpp"
#include "iotids/error.hpp"
#include "iotids/ingest.hpp"
#include "iotids/rng.hpp"

using namespace iotids;

namespace {

const char* kFridgeHeader = "date,time,fridge_temperature,temp_condition,label,type\n";

std::vector<SensorReading> parse(const std::string& text, SensorKind kind = SensorKind::Fridge) {
  std::istringstream in(text);
  return parse_sensor_csv(in, kind);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Usage;
}

}  // namespace

TEST(DateTime, FridgeExampleTimestamp) {
  const std::int64_t expected = fixtures::oracle_epoch(2019, 4, 25, 10, 1, 30);
  EXPECT_EQ(expected, 1556211690);
  EXPECT_EQ(parse_date_time("25-Apr-19", "10:01:30"), expected);
  EXPECT_EQ(parse_date_time("25-Apr-2019", "10:01:30"), expected);
  EXPECT_EQ(parse_date_time("2019-04-25", "10:01:30"), expected);
  EXPECT_EQ(parse_date_time(" 25-apr-19", " 10:01:30 "), expected);
}

TEST(DateTime, FormatIsInverse) {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const std::int64_t ts = 1500000000 + rng.between(0, 200000000);
    const auto [d, t] = format_date_time(ts);
    EXPECT_EQ(parse_date_time(d, t), ts) << d << ' ' << t;
  }
}

TEST(DateTime, Rejects) {
  EXPECT_EQ(code_of([] { parse_date_time("31-Foo-19", "10:00:00"); }), ErrorCode::UnparsableTimestamp);
  EXPECT_EQ(code_of([] { parse_date_time("25-Apr-19", "25:00:00"); }), ErrorCode::UnparsableTimestamp);
  EXPECT_EQ(code_of([] { parse_date_time("25-Apr-19", "1000"); }), ErrorCode::UnparsableTimestamp);
}

TEST(ParseSensorCsv, FridgeExampleRow) {
  const auto rows = parse(std::string(kFridgeHeader) + "25-Apr-19,10:01:30,10.9,high,1,injection\n");
  ASSERT_EQ(rows.size(), 1u);
  const SensorReading& r = rows[0];
  EXPECT_EQ(r.sensor, SensorKind::Fridge);
  EXPECT_EQ(r.timestamp, fixtures::oracle_epoch(2019, 4, 25, 10, 1, 30));
  ASSERT_EQ(r.values.size(), 2u);
  EXPECT_EQ(r.values[0].token, "10.9");
  EXPECT_DOUBLE_EQ(r.values[0].value, 10.9);
  EXPECT_EQ(r.values[1].token, "high");
  EXPECT_DOUBLE_EQ(r.values[1].value, 1.0);
  EXPECT_EQ(r.clazz, EventClass::Injection);
  EXPECT_EQ(r.arrival_index, 0u);
  EXPECT_FALSE(r.timestamp_mismatch);
}

TEST(ParseSensorCsv, HeaderOnlyGivesNoReadings) {
  EXPECT_TRUE(parse(kFridgeHeader).empty());
}

TEST(ParseSensorCsv, MissingFeatureColumn) {
  EXPECT_EQ(code_of([] { parse("date,time,fridge_temperature,label,type\n"); }),
            ErrorCode::MissingColumn);
  EXPECT_EQ(code_of([] { parse(""); }), ErrorCode::MissingColumn);
  EXPECT_EQ(code_of([] { parse("fridge_temperature,temp_condition\n"); }), ErrorCode::MissingColumn);
}

TEST(ParseSensorCsv, ErrorPaths) {
  const std::string h = kFridgeHeader;
  EXPECT_EQ(code_of([&] { parse(h + "25-Apr-19,10:01:30,warm,high,1,injection\n"); }),
            ErrorCode::UnparsableValue);
  EXPECT_EQ(code_of([&] { parse(h + "25-Apr-19,10:01:30,3,tepid,1,injection\n"); }),
            ErrorCode::UnparsableValue);
  EXPECT_EQ(code_of([&] { parse(h + "xx,10:01:30,3,high,1,injection\n"); }),
            ErrorCode::UnparsableTimestamp);
  EXPECT_EQ(code_of([&] { parse(h + "25-Apr-19,10:01:30,3,high,1,mitm\n"); }),
            ErrorCode::UnknownClass);
  EXPECT_EQ(code_of([&] { parse(h + "25-Apr-19,10:01:30,3,high,0,ddos\n"); }),
            ErrorCode::InconsistentAnnotation);
}

TEST(ParseSensorCsv, ErrorMessageCarriesLine) {
  try {
    parse(std::string(kFridgeHeader) + "25-Apr-19,10:01:30,3,high,1,xss\n25-Apr-19,10:01:31,bad,high,1,xss\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
}

TEST(ParseSensorCsv, TsWinsOverDateTimeAndIsFlagged) {
  const auto rows = parse(
      "ts,date,time,fridge_temperature,temp_condition,label,type\n"
      "1556211690,25-Apr-19,10:01:30,3,low,0,normal\n"
      "1556211000,25-Apr-19,10:01:30,3,low,0,normal\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_FALSE(rows[0].timestamp_mismatch);
  EXPECT_TRUE(rows[1].timestamp_mismatch);
  EXPECT_EQ(rows[1].timestamp, 1556211000);
  const IngestReport report = sensor_stats(SensorKind::Fridge, rows);
  EXPECT_EQ(report.sensors[0].timestamp_mismatches, 1u);
}

TEST(ParseSensorCsv, ClassColumnsOptional) {
  auto rows = parse("ts,fridge_temperature,temp_condition,type\n5,3,low,xss\n");
  EXPECT_EQ(rows.at(0).clazz, EventClass::Xss);
  rows = parse("ts,fridge_temperature,temp_condition\n5,3,low\n");
  EXPECT_EQ(rows.at(0).clazz, EventClass::Normal);
  EXPECT_EQ(code_of([] { parse("ts,fridge_temperature,temp_condition,label\n5,3,low,1\n"); }),
            ErrorCode::UnknownClass);
}

TEST(ParseSensorCsv, ArrivalIndexIsSequential) {
  std::string text = kFridgeHeader;
  for (int i = 0; i < 50; ++i) text += "25-Apr-19,10:01:3" + std::to_string(i % 3) + ",3,low,0,normal\n";
  const auto rows = parse(text);
  ASSERT_EQ(rows.size(), 50u);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].arrival_index, i);
}

TEST(ParseSensorCsv, OutOfDomainTokensAreCounted) {
  const auto rows = parse(std::string(kFridgeHeader) +
                          "25-Apr-19,10:01:30,10.9,True,1,injection\n"
                          "25-Apr-19,10:01:30,40.0,low,1,injection\n"
                          "25-Apr-19,10:01:30,4.0,low,1,injection\n");
  EXPECT_DOUBLE_EQ(rows[0].values[1].value, 1.0);
  EXPECT_FALSE(in_domain(1, rows[0].values[1]));
  EXPECT_FALSE(in_domain(0, rows[1].values[0]));
  EXPECT_TRUE(in_domain(0, rows[2].values[0]));
  EXPECT_EQ(sensor_stats(SensorKind::Fridge, rows).out_of_domain(), 2u);
}

TEST(ParseSensorCsv, SphoneSignalMixesBooleansAndIntegers) {
  const auto rows = parse(
      "ts,door_state,sphone_signal,label,type\n"
      "1,closed,true,0,normal\n2,open,1,0,normal\n3,closed,false,0,normal\n4,open,0,0,normal\n",
      SensorKind::GarageDoor);
  EXPECT_DOUBLE_EQ(rows[0].values[1].value, rows[1].values[1].value);
  EXPECT_DOUBLE_EQ(rows[2].values[1].value, rows[3].values[1].value);
  for (const auto& r : rows) {
    EXPECT_TRUE(in_domain(2, r.values[0]));
    EXPECT_TRUE(in_domain(3, r.values[1]));
  }
}

TEST(ParseSensorCsv, QuotedFieldsCrlfAndBom) {
  const auto rows = parse(
      "\xEF\xBB\xBF" "date,time,fridge_temperature,temp_condition,label,type\r\n"
      "\"25-Apr-19\",\"10:01:30\",\"7.5\",low,0,normal\r\n\r\n");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_DOUBLE_EQ(rows[0].values[0].value, 7.5);
}

TEST(Stats, PeakAndDistinctOnHandCountedInput) {
  const auto rows = parse(
      "ts,fridge_temperature,temp_condition\n5,3,low\n5,4,low\n6,5,high\n");
  const IngestReport report = sensor_stats(SensorKind::Fridge, rows);
  EXPECT_EQ(report.sensors[0].peak_per_second(), 2u);
  EXPECT_EQ(report.sensors[0].distinct_timestamps(), 2u);
  EXPECT_EQ(report.total_rows(), 3u);
  EXPECT_EQ(report.distinct_timestamps(), 2u);
  EXPECT_EQ(report.class_counts[static_cast<std::size_t>(EventClass::Normal)], 3u);
}

TEST(Stats, MergeIsAssociativeAndOrderIndependent) {
  const SensorStreams streams = fixtures::aggregation_example_streams();
  std::vector<IngestReport> parts;
  for (std::size_t s = 0; s < kSensorCount; ++s) parts.push_back(sensor_stats(kAllSensors[s], streams[s]));

  IngestReport forward;
  for (const auto& p : parts) forward.merge(p);
  IngestReport backward;
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) backward.merge(*it);
  IngestReport left = parts[0];
  left.merge(parts[1]).merge(parts[2]);
  IngestReport right_inner = parts[1];
  right_inner.merge(parts[2]);
  IngestReport right = parts[0];
  right.merge(right_inner);

  EXPECT_EQ(to_json(forward), to_json(backward));
  EXPECT_EQ(to_json(left), to_json(right));
  EXPECT_EQ(to_json(forward), to_json(dataset_stats(streams)));
  EXPECT_EQ(forward.total_rows(), 20u);
  EXPECT_EQ(forward.distinct_timestamps(), 2u);
}

TEST(Stats, TimestampCountsCsv) {
  const auto rows = parse("ts,fridge_temperature,temp_condition\n5,3,low\n5,4,low\n6,5,high\n");
  std::ostringstream out;
  write_timestamp_counts_csv(out, sensor_stats(SensorKind::Fridge, rows));
  EXPECT_EQ(out.str(), "sensor,timestamp,count\nFridge,5,2\nFridge,6,1\n");
}

TEST(RoundTrip, ParseWriteParseIsLossless) {
  Rng rng(11);
  for (SensorKind kind : kAllSensors) {
    const FeatureRange range = sensor_features(kind);
    std::ostringstream text;
    text << "ts,date,time";
    for (std::size_t i = 0; i < range.count; ++i) text << ',' << feature_info(range.first + i).name;
    text << ",label,type\n";
    for (int row = 0; row < 40; ++row) {
      const std::int64_t ts = 1556175600 + rng.between(0, 30);
      const auto [d, t] = format_date_time(ts);
      text << ts << ',' << d << ',' << t;
      for (std::size_t i = 0; i < range.count; ++i) {
        const auto& info = feature_info(range.first + i);
        if (info.kind == DomainKind::Categorical) {
          text << ',' << info.tokens[rng.below(info.tokens.size())];
        } else if (info.integral) {
          text << ',' << rng.between(0, 65535);
        } else {
          text << ',' << (rng.between(-999, 999) / 10.0);
        }
      }
      const EventClass c = kAllClasses[rng.below(kClassCount)];
      text << ',' << label_bit(c) << ',' << class_name(c) << '\n';
    }
    const auto first = parse(text.str(), kind);
    std::ostringstream written;
    write_sensor_csv(written, kind, first);
    const auto second = parse(written.str(), kind);
    ASSERT_EQ(first.size(), second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
      EXPECT_EQ(first[i].timestamp, second[i].timestamp);
      EXPECT_EQ(first[i].clazz, second[i].clazz);
      EXPECT_EQ(first[i].arrival_index, second[i].arrival_index);
      ASSERT_EQ(first[i].values.size(), second[i].values.size());
      for (std::size_t v = 0; v < first[i].values.size(); ++v) {
        EXPECT_EQ(first[i].values[v].token, second[i].values[v].token);
        EXPECT_EQ(first[i].values[v].value, second[i].values[v].value);
      }
    }
    std::ostringstream rewritten;
    write_sensor_csv(rewritten, kind, second);
    EXPECT_EQ(written.str(), rewritten.str());
  }
}

TEST(Discover, MatchesGeneratedAndDatasetNames) {
  fixtures::TempDir dir;
  const std::vector<std::string> names = {
      "Train_Test_IoT_Fridge.csv", "Train_Test_IoT_Garage_Door.csv", "Train_Test_IoT_GPS_Tracker.csv",
      "Train_Test_IoT_Modbus.csv", "Train_Test_IoT_Motion_Light.csv", "Train_Test_IoT_Thermostat.csv",
      "Train_Test_IoT_Weather.csv"};
  for (const auto& n : names) std::ofstream(dir / n) << "x\n";
  const auto files = discover_sensor_files(dir.path());
  for (std::size_t s = 0; s < kSensorCount; ++s) EXPECT_EQ(files[s].filename(), names[s]);

  std::ofstream(dir / "fridge.csv") << "x\n";
  EXPECT_EQ(code_of([&] { discover_sensor_files(dir.path()); }), ErrorCode::Io);
}

TEST(Discover, MissingSensorIsAnError) {
  fixtures::TempDir dir;
  std::ofstream(dir / "fridge.csv") << "x\n";
  EXPECT_EQ(code_of([&] { discover_sensor_files(dir.path()); }), ErrorCode::Io);
  EXPECT_EQ(code_of([] { parse_sensor_csv(std::filesystem::path("/nonexistent/x.csv"), SensorKind::Fridge); }),
            ErrorCode::Io);
}
