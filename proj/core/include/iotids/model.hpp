#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace iotids {

inline constexpr std::size_t kSensorCount = 7;
inline constexpr std::size_t kFeatureCount = 17;
inline constexpr std::size_t kClassCount = 8;

// Sensor order is also the column-block order of every combined row.
enum class SensorKind : std::uint8_t {
  Fridge,
  GarageDoor,
  GpsTracker,
  Modbus,
  MotionLight,
  Thermostat,
  Weather,
};

inline constexpr std::array<SensorKind, kSensorCount> kAllSensors = {
    SensorKind::Fridge,      SensorKind::GarageDoor, SensorKind::GpsTracker,
    SensorKind::Modbus,      SensorKind::MotionLight, SensorKind::Thermostat,
    SensorKind::Weather};

// Display name, e.g. "Garage_Door".
std::string_view sensor_name(SensorKind kind) noexcept;
// Lowercase file stem used by generated datasets, e.g. "garage_door".
std::string_view sensor_slug(SensorKind kind) noexcept;
std::optional<SensorKind> sensor_from_name(std::string_view name) noexcept;

enum class DomainKind : std::uint8_t { Numeric, Categorical };

struct FeatureInfo {
  std::string_view name;
  SensorKind sensor;
  DomainKind kind;
  // Numeric range (inclusive). Categorical features keep [0, 1] here since
  // every categorical domain is binary after coding.
  double lo;
  double hi;
  bool integral;
  // Accepted tokens for categorical domains (empty for numeric features).
  std::span<const std::string_view> tokens;
};

std::span<const FeatureInfo, kFeatureCount> feature_table() noexcept;
const FeatureInfo& feature_info(std::size_t feature) noexcept;
std::optional<std::size_t> feature_index(std::string_view name) noexcept;

// Contiguous [first, first + count) range of the sensor's features in the
// 17-column layout.
struct FeatureRange {
  std::size_t first;
  std::size_t count;
};
FeatureRange sensor_features(SensorKind kind) noexcept;

// Maps a categorical token to its numeric code. Case-insensitive, surrounding
// whitespace ignored: low/closed/false/off/0 -> 0, high/open/true/on/1 -> 1.
std::optional<double> categorical_code(std::string_view token) noexcept;

// Alphabetical order; matches the confusion-matrix layout (b,d,i,n,p,r,s,x).
enum class EventClass : std::uint8_t {
  Backdoor,
  Ddos,
  Injection,
  Normal,
  Password,
  Ransomware,
  Scanning,
  Xss,
};

inline constexpr std::array<EventClass, kClassCount> kAllClasses = {
    EventClass::Backdoor, EventClass::Ddos,       EventClass::Injection,
    EventClass::Normal,   EventClass::Password,   EventClass::Ransomware,
    EventClass::Scanning, EventClass::Xss};

std::string_view class_name(EventClass c) noexcept;
std::optional<EventClass> class_from_name(std::string_view name) noexcept;
// Throws UnknownClass for unrecognised names.
EventClass parse_class(std::string_view name);

inline constexpr int label_bit(EventClass c) noexcept {
  return c == EventClass::Normal ? 0 : 1;
}
inline constexpr bool is_attack(EventClass c) noexcept {
  return c != EventClass::Normal;
}

// Resolves the annotation pair of a telemetry record. Throws
// InconsistentAnnotation when the bit contradicts the type, UnknownClass for
// unrecognised types or bits other than 0/1.
EventClass class_of(int label_bit, std::string_view type_string);

using ClassHistogram = std::array<std::uint64_t, kClassCount>;

// One value as it appeared in the source file. `value` is the parsed number
// (or categorical code); `token` keeps the original text for lossless replay.
struct RawValue {
  std::string token;
  double value = 0.0;
};

struct SensorReading {
  SensorKind sensor = SensorKind::Fridge;
  std::int64_t timestamp = 0;
  std::uint64_t arrival_index = 0;
  // Exactly sensor_features(sensor).count entries, in layout order.
  std::vector<RawValue> values;
  EventClass clazz = EventClass::Normal;
  // Set when both ts and date/time were present and disagreed.
  bool timestamp_mismatch = false;
};

using SensorStreams = std::array<std::vector<SensorReading>, kSensorCount>;

using FeatureMask = std::bitset<kFeatureCount>;

// A 17-column row of the combined dataset. Missing cells are tracked by the
// mask; a cell's value is only observable through cell() so the two cannot
// disagree.
class CombinedRow {
 public:
  CombinedRow() { values_.fill(0.0); missing_.set(); }
  CombinedRow(std::int64_t timestamp, std::uint32_t ordinal, EventClass clazz)
      : timestamp(timestamp), ordinal(ordinal), clazz(clazz) {
    values_.fill(0.0);
    missing_.set();
  }

  std::int64_t timestamp = 0;
  std::uint32_t ordinal = 0;
  EventClass clazz = EventClass::Normal;
  std::uint64_t counter = 1;

  std::optional<double> cell(std::size_t feature) const {
    if (missing_.test(feature)) return std::nullopt;
    return values_[feature];
  }
  bool is_missing(std::size_t feature) const { return missing_.test(feature); }
  // Value of a present cell; 0 for missing ones.
  double value_or_zero(std::size_t feature) const { return values_[feature]; }

  void set(std::size_t feature, double value) {
    values_[feature] = value;
    missing_.reset(feature);
  }
  void clear(std::size_t feature) {
    values_[feature] = 0.0;
    missing_.set(feature);
  }

  const FeatureMask& mask() const noexcept { return missing_; }
  std::size_t missing_count() const noexcept { return missing_.count(); }

  friend bool operator==(const CombinedRow&, const CombinedRow&) = default;

 private:
  std::array<double, kFeatureCount> values_{};
  FeatureMask missing_;
};

// Dense per-row feature vectors, rows x 17.
using FeatureVector = std::array<double, kFeatureCount>;
using FeatureMatrix = std::vector<FeatureVector>;

}  // namespace iotids
