#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "iotids/error.hpp"
#include "iotids/pipeline.hpp"
#include "iotids/rng.hpp"

using namespace iotids;

namespace {

SensorReading reading(SensorKind kind, std::int64_t ts, EventClass c = EventClass::Normal,
                      double base = 1.0) {
  SensorReading r;
  r.sensor = kind;
  r.timestamp = ts;
  r.clazz = c;
  for (std::size_t i = 0; i < sensor_features(kind).count; ++i) {
    r.values.push_back({std::to_string(base + i), base + static_cast<double>(i)});
  }
  return r;
}

void push(SensorStreams& streams, SensorReading r) {
  auto& v = streams[static_cast<std::size_t>(r.sensor)];
  r.arrival_index = v.size();
  v.push_back(std::move(r));
}

// Random small streams, each sensor sorted by timestamp like a source file.
SensorStreams random_streams(Rng& rng, std::size_t max_per_sensor = 30, std::int64_t span = 8) {
  SensorStreams streams;
  for (SensorKind kind : kAllSensors) {
    const auto n = rng.below(max_per_sensor + 1);
    std::vector<std::int64_t> stamps;
    for (std::uint64_t i = 0; i < n; ++i) stamps.push_back(100 + rng.between(0, span));
    std::sort(stamps.begin(), stamps.end());
    for (auto ts : stamps) {
      push(streams, reading(kind, ts, kAllClasses[rng.below(kClassCount)],
                            static_cast<double>(rng.below(1000))));
    }
  }
  return streams;
}

std::vector<Chunk> single_class_chunks(const std::vector<EventClass>& classes, std::size_t size = 10) {
  std::vector<Chunk> chunks;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    Chunk c;
    c.index = i;
    c.begin = i * size;
    c.end = (i + 1) * size;
    c.classes[static_cast<std::size_t>(classes[i])] = size;
    chunks.push_back(c);
  }
  return chunks;
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

TEST(Concatenate, DistinctTimestampsKeepSensorCells) {
  SensorStreams streams;
  push(streams, reading(SensorKind::Fridge, 10));
  push(streams, reading(SensorKind::Weather, 11));
  const auto out = concatenate(streams);
  ASSERT_EQ(out.rows.size(), 2u);
  EXPECT_EQ(out.rows[0].missing_count(), 15u);
  EXPECT_EQ(out.rows[1].missing_count(), 14u);
  EXPECT_EQ(out.rows[0].cell(0), std::optional<double>(1.0));
  EXPECT_EQ(out.rows[1].cell(16), std::optional<double>(3.0));
}

TEST(Concatenate, SameTimestampOrdinals) {
  SensorStreams streams;
  for (int i = 0; i < 3; ++i) push(streams, reading(SensorKind::Fridge, 10, EventClass::Normal, i));
  const auto out = concatenate(streams);
  ASSERT_EQ(out.rows.size(), 3u);
  for (std::uint32_t i = 0; i < 3; ++i) {
    EXPECT_EQ(out.rows[i].ordinal, i);
    EXPECT_EQ(out.rows[i].cell(0), std::optional<double>(i));
  }
}

TEST(Concatenate, TieOrderIsSensorThenArrival) {
  SensorStreams streams;
  push(streams, reading(SensorKind::Weather, 10, EventClass::Normal, 50));
  push(streams, reading(SensorKind::Fridge, 10, EventClass::Normal, 1));
  push(streams, reading(SensorKind::Fridge, 10, EventClass::Normal, 2));
  push(streams, reading(SensorKind::Fridge, 9, EventClass::Normal, 3));
  // Fridge arrived out of timestamp order; ordering is still by timestamp.
  const auto out = concatenate(streams);
  ASSERT_EQ(out.rows.size(), 4u);
  EXPECT_EQ(out.rows[0].timestamp, 9);
  EXPECT_EQ(out.rows[1].cell(0), std::optional<double>(1));
  EXPECT_EQ(out.rows[2].cell(0), std::optional<double>(2));
  EXPECT_EQ(out.rows[3].cell(14), std::optional<double>(50));
  EXPECT_EQ(out.rows[3].ordinal, 2u);
}

TEST(Concatenate, EmptyInput) {
  EXPECT_TRUE(concatenate(SensorStreams{}).rows.empty());
  EXPECT_TRUE(group_by_timestamp(SensorStreams{}).rows.empty());
  EXPECT_TRUE(aggregate_keep_first({}).empty());
}

TEST(GroupBy, WorkedExampleRows) {
  const auto out = group_by_timestamp(fixtures::aggregation_example_streams());
  ASSERT_EQ(out.rows.size(), 6u);
  EXPECT_EQ(out.class_conflicts, 0u);

  const CombinedRow& first = out.rows[0];
  EXPECT_EQ(first.timestamp, 1556211690);
  EXPECT_EQ(first.ordinal, 0u);
  const auto expected = fixtures::aggregation_expected_first();
  for (std::size_t f = 0; f < kFeatureCount; ++f) EXPECT_EQ(first.cell(f), expected[f]) << f;

  const CombinedRow& last = out.rows[5];
  EXPECT_EQ(last.timestamp, 1556211691);
  EXPECT_EQ(last.ordinal, 2u);
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const bool thermostat_or_weather = f >= 12;
    EXPECT_EQ(last.is_missing(f), !thermostat_or_weather) << f;
  }
  EXPECT_EQ(last.cell(12), std::optional<double>(25.8));
  EXPECT_EQ(last.cell(16), std::optional<double>(29.6));
}

TEST(GroupBy, SingleSensorSingleReading) {
  for (SensorKind kind : kAllSensors) {
    SensorStreams streams;
    push(streams, reading(kind, 5));
    const auto out = group_by_timestamp(streams);
    ASSERT_EQ(out.rows.size(), 1u);
    EXPECT_EQ(out.rows[0].missing_count(), kFeatureCount - sensor_features(kind).count);
  }
}

TEST(GroupBy, ClassConflictKeepsFirstSensor) {
  SensorStreams streams;
  push(streams, reading(SensorKind::Modbus, 5, EventClass::Xss));
  push(streams, reading(SensorKind::Weather, 5, EventClass::Ddos));
  push(streams, reading(SensorKind::Weather, 6, EventClass::Ddos));
  const auto out = group_by_timestamp(streams);
  ASSERT_EQ(out.rows.size(), 2u);
  EXPECT_EQ(out.rows[0].clazz, EventClass::Xss);
  EXPECT_EQ(out.class_conflicts, 1u);
}

TEST(Combination, RowConservationAgainstRecount) {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const SensorStreams streams = random_streams(rng);
    std::size_t readings = 0;
    std::map<std::int64_t, std::array<std::size_t, kSensorCount>> mult;
    for (std::size_t s = 0; s < kSensorCount; ++s) {
      readings += streams[s].size();
      for (const auto& r : streams[s]) ++mult[r.timestamp][s];
    }
    std::size_t expected_grouped = 0;
    for (const auto& [ts, m] : mult) expected_grouped += *std::max_element(m.begin(), m.end());

    const auto cat = concatenate(streams);
    const auto grp = group_by_timestamp(streams);
    EXPECT_EQ(cat.rows.size(), readings);
    EXPECT_EQ(grp.rows.size(), expected_grouped);

    // Present cells are preserved: every reading's values appear somewhere.
    std::size_t present_cat = 0;
    std::size_t present_grp = 0;
    std::size_t present_src = 0;
    for (const auto& r : cat.rows) present_cat += kFeatureCount - r.missing_count();
    for (const auto& r : grp.rows) present_grp += kFeatureCount - r.missing_count();
    for (const auto& s : streams) {
      for (const auto& r : s) present_src += r.values.size();
    }
    EXPECT_EQ(present_cat, present_src);
    EXPECT_EQ(present_grp, present_src);

    for (const auto* rows : {&cat.rows, &grp.rows}) {
      for (std::size_t i = 1; i < rows->size(); ++i) {
        const auto& a = (*rows)[i - 1];
        const auto& b = (*rows)[i];
        ASSERT_TRUE(a.timestamp < b.timestamp || (a.timestamp == b.timestamp && b.ordinal == a.ordinal + 1));
      }
    }
  }
}

TEST(Combination, ParseNames) {
  EXPECT_EQ(parse_combination("concatenate"), CombinationMode::Concatenate);
  EXPECT_EQ(parse_combination("group-by-timestamp"), CombinationMode::GroupByTimestamp);
  EXPECT_EQ(parse_combination("group-by"), CombinationMode::GroupByTimestamp);
  EXPECT_EQ(code_of([] { parse_combination("merge"); }), ErrorCode::Usage);
}

TEST(Aggregate, WorkedExampleKeepsOrdinalZero) {
  const auto grouped = group_by_timestamp(fixtures::aggregation_example_streams());
  const auto out = aggregate_keep_first(grouped.rows);
  ASSERT_EQ(out.size(), 2u);
  for (const auto& r : out) {
    EXPECT_EQ(r.ordinal, 0u);
    EXPECT_EQ(r.counter, 3u);
    EXPECT_EQ(r.clazz, EventClass::Injection);
  }
  const auto second = fixtures::aggregation_expected_second();
  for (std::size_t f = 0; f < kFeatureCount; ++f) EXPECT_EQ(out[1].cell(f), second[f]) << f;
}

TEST(Aggregate, UniqueTimestampUnchanged) {
  SensorStreams streams;
  push(streams, reading(SensorKind::Fridge, 1));
  push(streams, reading(SensorKind::Fridge, 2));
  const auto rows = group_by_timestamp(streams).rows;
  const auto out = aggregate_keep_first(rows);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], rows[0]);
  EXPECT_EQ(out[1], rows[1]);
  EXPECT_EQ(out[0].counter, 1u);
}

TEST(Aggregate, IdempotentAndConservesCounters) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const SensorStreams streams = random_streams(rng);
    for (auto mode : {CombinationMode::Concatenate, CombinationMode::GroupByTimestamp}) {
      const auto rows = combine(streams, mode).rows;
      const auto once = aggregate_keep_first(rows);
      const auto twice = aggregate_keep_first(once);
      EXPECT_EQ(once, twice);

      std::uint64_t total = 0;
      for (const auto& r : once) total += r.counter;
      EXPECT_EQ(total, rows.size());

      std::set<std::int64_t> stamps;
      for (const auto& r : rows) stamps.insert(r.timestamp);
      EXPECT_EQ(once.size(), stamps.size());
      for (const auto& r : once) EXPECT_EQ(r.ordinal, 0u);
    }
  }
}

TEST(Aggregate, HistogramCountsRowClasses) {
  const auto grouped = group_by_timestamp(fixtures::aggregation_example_streams());
  const ClassHistogram h = class_histogram(aggregate_keep_first(grouped.rows));
  ClassHistogram expected{};
  expected[static_cast<std::size_t>(EventClass::Injection)] = 2;
  EXPECT_EQ(h, expected);
}

TEST(Segment, Arithmetic) {
  std::vector<CombinedRow> rows(1050);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].clazz = i < 600 ? EventClass::Normal : EventClass::Xss;
  const auto chunks = segment(rows, 500);
  ASSERT_EQ(chunks.size(), 3u);
  EXPECT_EQ(chunks[0].size(), 500u);
  EXPECT_EQ(chunks[1].size(), 500u);
  EXPECT_EQ(chunks[2].size(), 50u);
  EXPECT_EQ(chunks[1].begin, 500u);
  EXPECT_EQ(chunks[2].end, 1050u);
  EXPECT_EQ(chunks[1].classes[static_cast<std::size_t>(EventClass::Normal)], 100u);
  EXPECT_EQ(chunks[1].classes[static_cast<std::size_t>(EventClass::Xss)], 400u);
  EXPECT_TRUE(segment({}, 500).empty());
  EXPECT_EQ(code_of([&] { segment(rows, 0); }), ErrorCode::Usage);
}

TEST(Partition, SevenThreeRoundingTowardTrain) {
  const auto chunks = single_class_chunks(std::vector<EventClass>(10, EventClass::Normal));
  const auto p = partition(chunks, 0.7, 1);
  EXPECT_EQ(p.count(Partition::Train), 7u);
  EXPECT_EQ(p.count(Partition::Test), 3u);
  const auto q = partition(single_class_chunks(std::vector<EventClass>(11, EventClass::Normal)), 0.7, 1);
  EXPECT_EQ(q.count(Partition::Train), 8u);
}

TEST(Partition, ClassInOneChunkIsInfeasible) {
  std::vector<EventClass> classes(10, EventClass::Normal);
  classes[3] = EventClass::Xss;
  const auto chunks = single_class_chunks(classes);
  EXPECT_EQ(code_of([&] { partition(chunks, 0.7, 0); }), ErrorCode::PartitionInfeasible);
}

TEST(Partition, DeterministicDisjointAndCoversEveryClass) {
  std::vector<EventClass> classes;
  for (int rep = 0; rep < 5; ++rep) {
    for (EventClass c : kAllClasses) classes.push_back(c);
  }
  const auto chunks = single_class_chunks(classes);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = partition(chunks, 0.7, seed);
    const auto b = partition(chunks, 0.7, seed);
    EXPECT_EQ(a.chunks, b.chunks);
    EXPECT_EQ(a.effective_seed, b.effective_seed);
    EXPECT_GE(a.effective_seed, seed);
    EXPECT_EQ(a.seed, seed);
    ASSERT_EQ(a.chunks.size(), chunks.size());
    EXPECT_EQ(a.count(Partition::Train) + a.count(Partition::Test), chunks.size());
    std::array<std::array<bool, 2>, kClassCount> seen{};
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      seen[static_cast<std::size_t>(classes[i])][static_cast<std::size_t>(a.chunks[i])] = true;
    }
    for (const auto& s : seen) EXPECT_TRUE(s[0] && s[1]);
  }
}

TEST(Partition, BadFraction) {
  const auto chunks = single_class_chunks({EventClass::Normal, EventClass::Normal});
  EXPECT_EQ(code_of([&] { partition(chunks, 0.0, 1); }), ErrorCode::Usage);
  EXPECT_EQ(code_of([&] { partition(chunks, 1.0, 1); }), ErrorCode::Usage);
}

TEST(Partition, Names) {
  EXPECT_EQ(partition_name(Partition::Train), "train");
  EXPECT_EQ(parse_partition("test"), Partition::Test);
  EXPECT_THROW(parse_partition("validation"), Error);
}

TEST(RowsCsv, RoundTripKeepsMissingCells) {
  const auto rows = group_by_timestamp(fixtures::aggregation_example_streams()).rows;
  std::ostringstream out;
  write_rows_csv(out, rows);
  std::istringstream in(out.str());
  const auto back = read_rows_csv(in);
  EXPECT_EQ(back, rows);
}
