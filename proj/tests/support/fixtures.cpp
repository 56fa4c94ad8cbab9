#include "fixtures.hpp"

#include <atomic>
#include <sstream>

#include <unistd.h>

#include "iotids/ingest.hpp"

namespace fixtures {

namespace fs = std::filesystem;
using iotids::SensorKind;

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::vector<std::pair<SensorKind, std::string>> aggregation_example_csv() {
  const std::string a = "25-Apr-19,10:01:30,";
  const std::string b = "25-Apr-19,10:01:31,";
  const std::string inj = ",1,injection\n";
  return {
      {SensorKind::Fridge,
       "date,time,fridge_temperature,temp_condition,label,type\n" +
           a + "10.9,True" + inj + a + "12.6,True" + inj + a + "5.8,False" + inj},
      {SensorKind::GarageDoor,
       "date,time,door_state,sphone_signal,label,type\n" +
           a + "0,0" + inj + a + "0,0" + inj + a + "0,0" + inj},
      {SensorKind::GpsTracker,
       "date,time,latitude,longitude,label,type\n" + b + "82.9,92.7" + inj + b + "1.3,11.1" + inj},
      {SensorKind::Modbus,
       "date,time,FC1_Read_Input_Register,FC2_Read_Discrete_Value,"
       "FC3_Read_Holding_Register,FC4_Read_Coil,label,type\n" +
           a + "12503,61055,62763,5173" + inj + a + "1335,40858,30413,59303" + inj},
      {SensorKind::MotionLight,
       "date,time,motion_status,light_status,label,type\n" + b + "0,0" + inj + b + "0,0" + inj},
      {SensorKind::Thermostat,
       "date,time,current_temperature,thermostat_status,label,type\n" +
           a + "28.8,1" + inj + b + "25,0" + inj + b + "26.9,1" + inj + b + "25.8,1" + inj},
      {SensorKind::Weather,
       "date,time,temperature,pressure,humidity,label,type\n" +
           a + "28.0,-6.6,56.5" + inj + b + "45.2,9.5,12.8" + inj + b + "33.0,0.4,98.6" + inj +
           b + "42.7,-0.5,29.6" + inj},
  };
}

iotids::SensorStreams aggregation_example_streams() {
  iotids::SensorStreams streams;
  for (const auto& [kind, text] : aggregation_example_csv()) {
    std::istringstream in(text);
    streams[static_cast<std::size_t>(kind)] = iotids::parse_sensor_csv(in, kind);
  }
  return streams;
}

ExpectedRow aggregation_expected_first() {
  const std::nullopt_t _ = std::nullopt;
  return {10.9, 1, 0, 0, _, _, 12503, 61055, 62763, 5173, _, _, 28.8, 1, 28.0, -6.6, 56.5};
}

ExpectedRow aggregation_expected_second() {
  const std::nullopt_t _ = std::nullopt;
  return {_, _, _, _, 82.9, 92.7, _, _, _, _, 0, 0, 25, 0, 45.2, 9.5, 12.8};
}

iotids::ConfusionMatrix resnet_confusion() {
  iotids::ConfusionMatrix cm;
  cm.counts = {{
      {213, 3, 0, 106, 1, 1, 0, 1},
      {18, 273, 4, 0, 0, 20, 0, 0},
      {0, 0, 521, 9, 2, 1, 2, 0},
      {8, 0, 1, 3179, 0, 0, 0, 1},
      {0, 8, 7, 19, 364, 1, 5, 4},
      {0, 0, 22, 0, 7, 141, 0, 5},
      {3, 0, 2, 2, 15, 0, 20, 0},
      {0, 0, 0, 4, 1, 0, 0, 45},
  }};
  return cm;
}

std::vector<std::size_t> window_starts(std::size_t rows, std::size_t step) {
  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s + 224 <= rows; s += step) starts.push_back(s);
  return starts;
}

double pair_count_auc(const std::vector<iotids::ScoredRecord>& records) {
  double concordant = 0;
  double pairs = 0;
  for (const auto& p : records) {
    if (!p.attack) continue;
    for (const auto& n : records) {
      if (n.attack) continue;
      pairs += 1;
      if (p.score > n.score) concordant += 1;
      else if (p.score == n.score) concordant += 0.5;
    }
  }
  return concordant / pairs;
}

double oracle_accuracy(const Counts& c) {
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.tp + c.tn + c.fp + c.fn);
}
double oracle_precision(const Counts& c) {
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}
double oracle_recall(const Counts& c) {
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}
double oracle_fpr(const Counts& c) {
  return static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn);
}

std::int64_t oracle_epoch(int year, int month, int day, int hh, int mm, int ss) {
  static const int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const auto leap = [](int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; };
  std::int64_t days = 0;
  for (int y = 1970; y < year; ++y) days += leap(y) ? 366 : 365;
  for (int m = 1; m < month; ++m) days += kDays[m - 1] + (m == 2 && leap(year));
  days += day - 1;
  return days * 86400 + hh * 3600 + mm * 60 + ss + 7 * 3600;
}

}  // namespace fixtures
