#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "iotids/model.hpp"

namespace iotids {

// Same-timestamp multiplicity: with `probability`, an emission repeats
// between min_size and max_size times within the same second.
struct BurstSpec {
  double probability = 0.0;
  std::uint32_t min_size = 1;
  std::uint32_t max_size = 1;
};

struct EmissionSpec {
  std::int64_t period = 1;  // seconds between emissions
  std::int64_t jitter = 0;  // emission time offset drawn from [-jitter, jitter]
  BurstSpec burst;
};

// [start, end) in seconds from the scenario start.
struct ScheduleBlock {
  EventClass clazz = EventClass::Normal;
  std::int64_t start = 0;
  std::int64_t end = 0;
};

// How a class perturbs the telemetry while its block is active.
struct ClassEffect {
  std::vector<SensorKind> silenced;                  // sensors that stop emitting
  std::array<double, kSensorCount> drop_probability{};  // per-emission loss
  std::map<std::size_t, double> value_shift;         // feature -> additive shift
};

struct Scenario {
  std::uint64_t seed = 0;
  std::int64_t start_timestamp = 1556175600;  // 2019-04-25 00:00:00 -07:00
  std::int64_t duration = 0;
  std::array<EmissionSpec, kSensorCount> sensors{};
  std::vector<ScheduleBlock> schedule;
  std::map<EventClass, ClassEffect> effects;

  // Throws InvalidSchedule (or Usage for malformed emission settings).
  void validate() const;
  EventClass class_at(std::int64_t offset) const;
};

// Eight equal blocks (normal first, then each attack class). Every attack
// silences a distinct pair of sensors, so the missing-value pattern alone
// identifies the class.
Scenario separable_scenario(std::uint64_t seed, std::int64_t block_seconds = 3000);

struct GroundTruth {
  std::array<std::uint64_t, kSensorCount> rows{};
  std::array<std::uint64_t, kSensorCount> distinct_timestamps{};
  ClassHistogram class_rows{};
  std::uint64_t total_rows() const;
};

struct GeneratedData {
  SensorStreams streams;
  GroundTruth truth;
};

GeneratedData generate(const Scenario& scenario);

// Writes <slug>.csv for every sensor plus summary.json.
void write_generated(const GeneratedData& data, const std::filesystem::path& dir);

nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GroundTruth& t);

}  // namespace iotids
