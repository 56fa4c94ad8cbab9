#include "iotids/model.hpp"

#include <algorithm>
#include <cctype>

#include "iotids/error.hpp"
#include "iotids/text.hpp"

namespace iotids {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Usage: return "Usage";
    case ErrorCode::Io: return "Io";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::UnparsableTimestamp: return "UnparsableTimestamp";
    case ErrorCode::UnparsableValue: return "UnparsableValue";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::InconsistentAnnotation: return "InconsistentAnnotation";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::PartitionInfeasible: return "PartitionInfeasible";
    case ErrorCode::MissingStats: return "MissingStats";
    case ErrorCode::EmptyTraining: return "EmptyTraining";
    case ErrorCode::FormatMismatch: return "FormatMismatch";
    case ErrorCode::UndefinedRate: return "UndefinedRate";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::SingleClass: return "SingleClass";
  }
  return "Unknown";
}

namespace {

constexpr std::string_view kHighLow[] = {"high", "low"};
constexpr std::string_view kOpenClosed[] = {"open", "closed"};
constexpr std::string_view kSignal[] = {"true", "false", "0", "1"};
constexpr std::string_view kBinary[] = {"0", "1"};
constexpr std::string_view kOnOff[] = {"on", "off"};

constexpr std::span<const std::string_view> kNoTokens{};

using enum SensorKind;
using enum DomainKind;

const std::array<FeatureInfo, kFeatureCount> kFeatures = {{
    {"fridge_temperature", Fridge, Numeric, 1.0, 14.0, false, kNoTokens},
    {"temp_condition", Fridge, Categorical, 0, 1, true, kHighLow},
    {"door_state", GarageDoor, Categorical, 0, 1, true, kOpenClosed},
    {"sphone_signal", GarageDoor, Categorical, 0, 1, true, kSignal},
    {"latitude", GpsTracker, Numeric, 0.0, 550.0, false, kNoTokens},
    {"longitude", GpsTracker, Numeric, 10.0, 556.0, false, kNoTokens},
    {"FC1_Read_Input_Register", Modbus, Numeric, 0, 65535, true, kNoTokens},
    {"FC2_Read_Discrete_Value", Modbus, Numeric, 0, 65535, true, kNoTokens},
    {"FC3_Read_Holding_Register", Modbus, Numeric, 0, 65535, true, kNoTokens},
    {"FC4_Read_Coil", Modbus, Numeric, 0, 65535, true, kNoTokens},
    {"motion_status", MotionLight, Categorical, 0, 1, true, kBinary},
    {"light_status", MotionLight, Categorical, 0, 1, true, kOnOff},
    {"current_temperature", Thermostat, Numeric, 25.0, 35.0, false, kNoTokens},
    {"thermostat_status", Thermostat, Categorical, 0, 1, true, kBinary},
    {"temperature", Weather, Numeric, 20.0, 50.0, false, kNoTokens},
    {"pressure", Weather, Numeric, -12.0, 12.5, false, kNoTokens},
    {"humidity", Weather, Numeric, 0.2, 100.0, false, kNoTokens},
}};

constexpr std::array<FeatureRange, kSensorCount> kRanges = {{
    {0, 2}, {2, 2}, {4, 2}, {6, 4}, {10, 2}, {12, 2}, {14, 3}}};

constexpr std::array<std::string_view, kSensorCount> kSensorNames = {
    "Fridge", "Garage_Door", "GPS_Tracker", "Modbus",
    "Motion_Light", "Thermostat", "Weather"};

constexpr std::array<std::string_view, kSensorCount> kSensorSlugs = {
    "fridge", "garage_door", "gps_tracker", "modbus",
    "motion_light", "thermostat", "weather"};

constexpr std::array<std::string_view, kClassCount> kClassNames = {
    "backdoor", "ddos", "injection", "normal",
    "password", "ransomware", "scanning", "xss"};

}  // namespace

std::string_view sensor_name(SensorKind kind) noexcept {
  return kSensorNames[static_cast<std::size_t>(kind)];
}

std::string_view sensor_slug(SensorKind kind) noexcept {
  return kSensorSlugs[static_cast<std::size_t>(kind)];
}

std::optional<SensorKind> sensor_from_name(std::string_view name) noexcept {
  const std::string key = to_lower(trim(name));
  for (std::size_t i = 0; i < kSensorCount; ++i) {
    if (key == kSensorSlugs[i] || key == to_lower(kSensorNames[i])) {
      return kAllSensors[i];
    }
  }
  return std::nullopt;
}

std::span<const FeatureInfo, kFeatureCount> feature_table() noexcept {
  return kFeatures;
}

const FeatureInfo& feature_info(std::size_t feature) noexcept {
  return kFeatures[feature];
}

std::optional<std::size_t> feature_index(std::string_view name) noexcept {
  const std::string key = to_lower(trim(name));
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (key == to_lower(kFeatures[i].name)) return i;
  }
  return std::nullopt;
}

FeatureRange sensor_features(SensorKind kind) noexcept {
  return kRanges[static_cast<std::size_t>(kind)];
}

std::optional<double> categorical_code(std::string_view token) noexcept {
  const std::string key = to_lower(trim(token));
  if (key == "low" || key == "closed" || key == "false" || key == "off" ||
      key == "0") {
    return 0.0;
  }
  if (key == "high" || key == "open" || key == "true" || key == "on" ||
      key == "1") {
    return 1.0;
  }
  return std::nullopt;
}

std::string_view class_name(EventClass c) noexcept {
  return kClassNames[static_cast<std::size_t>(c)];
}

std::optional<EventClass> class_from_name(std::string_view name) noexcept {
  const std::string key = to_lower(trim(name));
  for (std::size_t i = 0; i < kClassCount; ++i) {
    if (key == kClassNames[i]) return kAllClasses[i];
  }
  return std::nullopt;
}

EventClass parse_class(std::string_view name) {
  if (auto c = class_from_name(name)) return *c;
  throw Error(ErrorCode::UnknownClass,
              "unknown event class '" + std::string(name) + "'");
}

EventClass class_of(int label_bit, std::string_view type_string) {
  const EventClass c = parse_class(type_string);
  if (label_bit != 0 && label_bit != 1) {
    throw Error(ErrorCode::UnknownClass,
                "label must be 0 or 1, got " + std::to_string(label_bit));
  }
  if ((label_bit == 0) != (c == EventClass::Normal)) {
    throw Error(ErrorCode::InconsistentAnnotation,
                "label " + std::to_string(label_bit) +
                    " contradicts type '" + std::string(type_string) + "'");
  }
  return c;
}

}  // namespace iotids
