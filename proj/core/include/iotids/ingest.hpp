#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "iotids/model.hpp"

namespace iotids {

// Source timestamps carry no zone; date/time columns are Pacific Daylight
// Time (UTC-07:00).
inline constexpr std::int64_t kSourceUtcOffsetSeconds = -7 * 3600;

// Parses "25-Apr-19" / "25-Apr-2019" / "2019-04-25" plus "HH:MM:SS" into
// seconds since the epoch. Throws UnparsableTimestamp.
std::int64_t parse_date_time(std::string_view date, std::string_view time);
// Inverse of parse_date_time in the "25-Apr-19" / "10:01:30" layout.
std::pair<std::string, std::string> format_date_time(std::int64_t timestamp);

std::vector<SensorReading> parse_sensor_csv(std::istream& in, SensorKind kind,
                                            std::string_view source = "<stream>");
std::vector<SensorReading> parse_sensor_csv(const std::filesystem::path& path,
                                            SensorKind kind);

// Writes readings with the header ts,date,time,<features>,label,type. Values
// are emitted from their original tokens, so parse -> write is lossless.
void write_sensor_csv(std::ostream& out, SensorKind kind,
                      const std::vector<SensorReading>& readings);

// Locates the seven per-sensor files in a directory by name, accepting both
// generated names (fridge.csv) and TON_IoT names (Train_Test_IoT_Fridge.csv,
// IoT_Garage_Door.csv). Throws Io when a sensor has no file or several.
std::array<std::filesystem::path, kSensorCount> discover_sensor_files(
    const std::filesystem::path& dir);

SensorStreams load_sensor_dir(const std::filesystem::path& dir);

bool in_domain(std::size_t feature, const RawValue& value);

struct SensorStats {
  std::uint64_t rows = 0;
  std::uint64_t out_of_domain = 0;
  std::uint64_t timestamp_mismatches = 0;
  // Readings per timestamp.
  std::map<std::int64_t, std::uint64_t> per_timestamp;

  std::uint64_t distinct_timestamps() const { return per_timestamp.size(); }
  std::uint64_t peak_per_second() const;
};

struct IngestReport {
  std::array<SensorStats, kSensorCount> sensors{};
  ClassHistogram class_counts{};

  std::uint64_t total_rows() const;
  std::uint64_t distinct_timestamps() const;
  std::uint64_t out_of_domain() const;

  // Associative, order-independent accumulation.
  IngestReport& merge(const IngestReport& other);
};

IngestReport sensor_stats(SensorKind kind,
                          const std::vector<SensorReading>& readings);
IngestReport dataset_stats(const SensorStreams& streams);

nlohmann::json to_json(const IngestReport& report);
// Columns: sensor,timestamp,count.
void write_timestamp_counts_csv(std::ostream& out, const IngestReport& report);

}  // namespace iotids
