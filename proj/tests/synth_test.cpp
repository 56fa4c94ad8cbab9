#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "fixtures.hpp"
#include "iotids/error.hpp"
#include "iotids/ingest.hpp"
#include "iotids/pipeline.hpp"
#include "iotids/synth.hpp"

using namespace iotids;

namespace {

Scenario normal_only(std::int64_t seconds) {
  Scenario s;
  s.seed = 1;
  s.duration = seconds;
  s.schedule = {{EventClass::Normal, 0, seconds}};
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorCode code_of(const Scenario& s) {
  try {
    s.validate();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(-1);
}

}  // namespace

TEST(Synth, NormalOnlyOneHertz) {
  const GeneratedData data = generate(normal_only(100));
  EXPECT_EQ(data.truth.total_rows(), 700u);
  for (std::size_t s = 0; s < kSensorCount; ++s) {
    EXPECT_EQ(data.streams[s].size(), 100u);
    EXPECT_EQ(data.truth.distinct_timestamps[s], 100u);
  }
  EXPECT_EQ(data.truth.class_rows[static_cast<std::size_t>(EventClass::Normal)], 700u);
}

TEST(Synth, FixedBurstTriplesEveryFridgeTimestamp) {
  Scenario s = normal_only(50);
  s.sensors[0].burst = {1.0, 3, 3};
  const GeneratedData data = generate(s);
  std::map<std::int64_t, int> counts;
  for (const auto& r : data.streams[0]) ++counts[r.timestamp];
  EXPECT_EQ(counts.size(), 50u);
  for (const auto& [ts, n] : counts) EXPECT_EQ(n, 3) << ts;
  EXPECT_EQ(data.streams[1].size(), 50u);
}

TEST(Synth, ValuesStayInDomain) {
  const GeneratedData data = generate(separable_scenario(4, 60));
  for (const auto& stream : data.streams) {
    for (const auto& r : stream) {
      const FeatureRange range = sensor_features(r.sensor);
      for (std::size_t i = 0; i < range.count; ++i) {
        EXPECT_TRUE(in_domain(range.first + i, r.values[i])) << r.values[i].token;
      }
    }
  }
}

TEST(Synth, DeterministicFiles) {
  const Scenario s = separable_scenario(9, 120);
  fixtures::TempDir a("synth-a");
  fixtures::TempDir b("synth-b");
  write_generated(generate(s), a.path());
  write_generated(generate(s), b.path());
  for (SensorKind kind : kAllSensors) {
    const std::string name = std::string(sensor_slug(kind)) + ".csv";
    EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
  }
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));

  Scenario other = s;
  other.seed = 10;
  fixtures::TempDir c("synth-c");
  write_generated(generate(other), c.path());
  EXPECT_NE(slurp(a / "fridge.csv"), slurp(c / "fridge.csv"));
}

TEST(Synth, IngestRoundTripMatchesPlan) {
  Scenario s = separable_scenario(3, 200);
  s.sensors[2].jitter = 2;
  s.effects[EventClass::Ddos].drop_probability[4] = 0.3;
  s.effects[EventClass::Xss].value_shift[0] = 2.0;
  const GeneratedData data = generate(s);
  fixtures::TempDir dir;
  write_generated(data, dir.path());
  const IngestReport report = dataset_stats(load_sensor_dir(dir.path()));
  for (std::size_t k = 0; k < kSensorCount; ++k) {
    EXPECT_EQ(report.sensors[k].rows, data.truth.rows[k]);
    EXPECT_EQ(report.sensors[k].distinct_timestamps(), data.truth.distinct_timestamps[k]);
    EXPECT_EQ(report.sensors[k].timestamp_mismatches, 0u);
  }
  EXPECT_EQ(report.class_counts, data.truth.class_rows);
  EXPECT_EQ(report.total_rows(), data.truth.total_rows());
}

TEST(Synth, ScheduleValidation) {
  Scenario s = normal_only(100);
  s.schedule = {{EventClass::Normal, 0, 50}, {EventClass::Xss, 40, 100}};
  EXPECT_EQ(code_of(s), ErrorCode::InvalidSchedule);
  s.schedule = {{EventClass::Normal, 0, 50}, {EventClass::Xss, 60, 100}};
  EXPECT_EQ(code_of(s), ErrorCode::InvalidSchedule);
  s.schedule = {{EventClass::Normal, 0, 50}};
  EXPECT_EQ(code_of(s), ErrorCode::InvalidSchedule);
  s.schedule = {};
  EXPECT_EQ(code_of(s), ErrorCode::InvalidSchedule);
  s.schedule = {{EventClass::Normal, 0, 0}, {EventClass::Normal, 0, 100}};
  EXPECT_EQ(code_of(s), ErrorCode::InvalidSchedule);
  s = normal_only(100);
  s.sensors[3].period = 0;
  EXPECT_EQ(code_of(s), ErrorCode::Usage);
  s = normal_only(100);
  s.sensors[3].burst = {0.5, 3, 2};
  EXPECT_EQ(code_of(s), ErrorCode::Usage);
  EXPECT_THROW(generate(s), Error);
}

TEST(Synth, ScenarioJsonRoundTrip) {
  Scenario s = separable_scenario(21, 30);
  s.sensors[1].jitter = 1;
  s.effects[EventClass::Backdoor].value_shift[5] = -1.5;
  const Scenario back = scenario_from_json(to_json(s));
  EXPECT_EQ(to_json(back), to_json(s));
  fixtures::TempDir a("json-a");
  fixtures::TempDir b("json-b");
  write_generated(generate(s), a.path());
  write_generated(generate(back), b.path());
  EXPECT_EQ(slurp(a / "gps_tracker.csv"), slurp(b / "gps_tracker.csv"));
}

// Brute-force inspection: inside every class block, the set of sensors with
// no readings at all is exactly the pair that block silences, and the pair
// differs between classes, so the missing pattern of any window lying fully
// inside a block identifies its class.
TEST(Synth, SeparablePresetSilencesDistinctPairs) {
  const std::int64_t block = 300;
  const Scenario s = separable_scenario(5, block);
  const GeneratedData data = generate(s);
  std::map<std::vector<bool>, EventClass> pattern_owner;
  for (std::size_t b = 0; b < kClassCount; ++b) {
    const std::int64_t lo = s.start_timestamp + static_cast<std::int64_t>(b) * block;
    const std::int64_t hi = lo + block;
    std::vector<bool> silent(kSensorCount, true);
    for (std::size_t k = 0; k < kSensorCount; ++k) {
      for (const auto& r : data.streams[k]) {
        if (r.timestamp >= lo && r.timestamp < hi) silent[k] = false;
      }
    }
    const EventClass c = s.schedule[b].clazz;
    const int silenced = static_cast<int>(std::count(silent.begin(), silent.end(), true));
    EXPECT_EQ(silenced, c == EventClass::Normal ? 0 : 2) << class_name(c);
    EXPECT_TRUE(pattern_owner.emplace(silent, c).second) << "pattern reused by " << class_name(c);
  }

  // Every 224-row window of the aggregated rows inside one block carries the
  // block's own silence pattern in its missing-cell columns.
  std::vector<CombinedRow> rows = aggregate_keep_first(group_by_timestamp(data.streams).rows);
  std::size_t inside = 0;
  std::size_t identified = 0;
  for (std::size_t start = 0; start + 224 <= rows.size(); start += 7) {
    const EventClass c = rows[start].clazz;
    if (rows[start + 223].clazz != c) continue;
    ++inside;
    std::vector<bool> silent(kSensorCount, true);
    for (std::size_t r = start; r < start + 224; ++r) {
      for (std::size_t k = 0; k < kSensorCount; ++k) {
        if (!rows[r].is_missing(sensor_features(kAllSensors[k]).first)) silent[k] = false;
      }
    }
    auto it = pattern_owner.find(silent);
    if (it != pattern_owner.end() && it->second == c) ++identified;
  }
  EXPECT_GT(inside, 0u);
  EXPECT_EQ(identified, inside);
}
