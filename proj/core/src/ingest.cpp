#include "iotids/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <set>

#include "iotids/csv.hpp"
#include "iotids/error.hpp"
#include "iotids/text.hpp"

namespace iotids {

namespace {

constexpr std::array<std::string_view, 12> kMonths = {
    "jan", "feb", "mar", "apr", "may", "jun",
    "jul", "aug", "sep", "oct", "nov", "dec"};

[[noreturn]] void bad_timestamp(std::string_view date, std::string_view time) {
  throw Error(ErrorCode::UnparsableTimestamp,
              "cannot parse date/time '" + std::string(date) + " " +
                  std::string(time) + "'");
}

std::optional<std::chrono::year_month_day> parse_date(std::string_view date) {
  using namespace std::chrono;
  date = trim(date);
  const auto first = date.find_first_of("-/");
  const auto last = date.find_last_of("-/");
  if (first == std::string_view::npos || first == last) return std::nullopt;
  const std::string_view a = date.substr(0, first);
  const std::string_view b = date.substr(first + 1, last - first - 1);
  const std::string_view c = date.substr(last + 1);

  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  if (a.size() == 4) {  // 2019-04-25
    auto yy = parse_int(a);
    auto mm = parse_int(b);
    auto dd = parse_int(c);
    if (!yy || !mm || !dd) return std::nullopt;
    y = static_cast<int>(*yy);
    m = static_cast<unsigned>(*mm);
    d = static_cast<unsigned>(*dd);
  } else {  // 25-Apr-19
    auto dd = parse_int(a);
    auto yy = parse_int(c);
    if (!dd || !yy) return std::nullopt;
    const std::string mon = to_lower(trim(b));
    const auto it = std::find(kMonths.begin(), kMonths.end(), mon);
    if (it != kMonths.end()) {
      m = static_cast<unsigned>(it - kMonths.begin()) + 1;
    } else if (auto mm = parse_int(b)) {
      m = static_cast<unsigned>(*mm);
    } else {
      return std::nullopt;
    }
    d = static_cast<unsigned>(*dd);
    y = static_cast<int>(*yy);
    if (c.size() <= 2) y += y < 70 ? 2000 : 1900;
  }
  const year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) return std::nullopt;
  return ymd;
}

struct ColumnMap {
  std::optional<std::size_t> ts;
  std::optional<std::size_t> date;
  std::optional<std::size_t> time;
  std::optional<std::size_t> label;
  std::optional<std::size_t> type;
  std::vector<std::size_t> features;  // one per sensor feature, layout order
};

ColumnMap map_columns(const csv::Record& header, SensorKind kind,
                      std::string_view source) {
  ColumnMap map;
  const FeatureRange range = sensor_features(kind);
  std::vector<std::optional<std::size_t>> features(range.count);
  for (std::size_t col = 0; col < header.size(); ++col) {
    const std::string name = to_lower(trim(header[col]));
    if (name == "ts") map.ts = col;
    else if (name == "date") map.date = col;
    else if (name == "time") map.time = col;
    else if (name == "label") map.label = col;
    else if (name == "type") map.type = col;
    else if (auto f = feature_index(name)) {
      if (*f >= range.first && *f < range.first + range.count) {
        features[*f - range.first] = col;
      }
    }
  }
  for (std::size_t i = 0; i < range.count; ++i) {
    if (!features[i]) {
      throw Error(ErrorCode::MissingColumn,
                  std::string(source) + ": missing column '" +
                      std::string(feature_info(range.first + i).name) + "'");
    }
    map.features.push_back(*features[i]);
  }
  if (!map.ts && !(map.date && map.time)) {
    throw Error(ErrorCode::MissingColumn,
                std::string(source) + ": needs a ts column or date and time");
  }
  return map;
}

std::string at_line(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

const std::string& field(const csv::Record& rec, std::size_t col) {
  static const std::string kEmpty;
  return col < rec.size() ? rec[col] : kEmpty;
}

}  // namespace

std::int64_t parse_date_time(std::string_view date, std::string_view time) {
  using namespace std::chrono;
  const auto ymd = parse_date(date);
  if (!ymd) bad_timestamp(date, time);

  const std::string_view t = trim(time);
  const auto c1 = t.find(':');
  const auto c2 = t.rfind(':');
  if (c1 == std::string_view::npos || c1 == c2) bad_timestamp(date, time);
  const auto hh = parse_int(t.substr(0, c1));
  const auto mm = parse_int(t.substr(c1 + 1, c2 - c1 - 1));
  const auto ss = parse_int(t.substr(c2 + 1));
  if (!hh || !mm || !ss || *hh < 0 || *hh > 23 || *mm < 0 || *mm > 59 ||
      *ss < 0 || *ss > 60) {
    bad_timestamp(date, time);
  }
  const std::int64_t local =
      sys_days{*ymd}.time_since_epoch().count() * 86400LL + *hh * 3600 +
      *mm * 60 + *ss;
  return local - kSourceUtcOffsetSeconds;
}

std::pair<std::string, std::string> format_date_time(std::int64_t timestamp) {
  using namespace std::chrono;
  const std::int64_t local = timestamp + kSourceUtcOffsetSeconds;
  std::int64_t days = local / 86400;
  std::int64_t secs = local % 86400;
  if (secs < 0) {
    secs += 86400;
    --days;
  }
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  const int yy = static_cast<int>(ymd.year()) % 100;
  char date[32];
  std::snprintf(date, sizeof date, "%02u-%c%s-%02d",
                static_cast<unsigned>(ymd.day()),
                static_cast<char>(std::toupper(
                    kMonths[static_cast<unsigned>(ymd.month()) - 1][0])),
                kMonths[static_cast<unsigned>(ymd.month()) - 1].substr(1).data(),
                yy);
  char time[16];
  std::snprintf(time, sizeof time, "%02d:%02d:%02d",
                static_cast<int>(secs / 3600), static_cast<int>(secs / 60 % 60),
                static_cast<int>(secs % 60));
  return {date, time};
}

std::vector<SensorReading> parse_sensor_csv(std::istream& in, SensorKind kind,
                                            std::string_view source) {
  csv::Reader reader(in);
  csv::Record rec;
  if (!reader.next(rec)) {
    throw Error(ErrorCode::MissingColumn,
                std::string(source) + ": missing header row");
  }
  const ColumnMap cols = map_columns(rec, kind, source);
  const FeatureRange range = sensor_features(kind);

  std::vector<SensorReading> out;
  while (reader.next(rec)) {
    SensorReading r;
    r.sensor = kind;
    r.arrival_index = out.size();

    std::optional<std::int64_t> from_date;
    if (cols.date && cols.time) {
      try {
        from_date = parse_date_time(field(rec, *cols.date), field(rec, *cols.time));
      } catch (const Error& e) {
        if (!cols.ts) {
          throw Error(e.code(), at_line(source, reader.line()) + e.what());
        }
      }
    }
    if (cols.ts && !trim(field(rec, *cols.ts)).empty()) {
      auto ts = parse_int(field(rec, *cols.ts));
      if (!ts) {
        // Some exports write ts as a float ("1556211690.0").
        auto d = parse_double(field(rec, *cols.ts));
        if (d && std::floor(*d) == *d) ts = static_cast<std::int64_t>(*d);
      }
      if (!ts) {
        throw Error(ErrorCode::UnparsableTimestamp,
                    at_line(source, reader.line()) + "bad ts '" +
                        field(rec, *cols.ts) + "'");
      }
      r.timestamp = *ts;
      r.timestamp_mismatch = from_date && *from_date != *ts;
    } else if (from_date) {
      r.timestamp = *from_date;
    } else {
      throw Error(ErrorCode::UnparsableTimestamp,
                  at_line(source, reader.line()) + "no usable timestamp");
    }

    r.values.reserve(range.count);
    for (std::size_t i = 0; i < range.count; ++i) {
      const std::size_t f = range.first + i;
      const std::string token(trim(field(rec, cols.features[i])));
      std::optional<double> v = feature_info(f).kind == DomainKind::Numeric
                                    ? parse_double(token)
                                    : categorical_code(token);
      if (!v) v = feature_info(f).kind == DomainKind::Numeric
                      ? categorical_code(token)
                      : parse_double(token);
      if (!v) {
        throw Error(ErrorCode::UnparsableValue,
                    at_line(source, reader.line()) + "bad value '" + token +
                        "' for " + std::string(feature_info(f).name));
      }
      r.values.push_back(RawValue{token, *v});
    }

    try {
      if (cols.type) {
        if (cols.label) {
          const auto bit = parse_int(field(rec, *cols.label));
          if (!bit) {
            throw Error(ErrorCode::UnknownClass,
                        "bad label '" + field(rec, *cols.label) + "'");
          }
          r.clazz = class_of(static_cast<int>(*bit), field(rec, *cols.type));
        } else {
          r.clazz = parse_class(field(rec, *cols.type));
        }
      } else if (cols.label) {
        const auto bit = parse_int(field(rec, *cols.label));
        if (!bit || *bit != 0) {
          throw Error(ErrorCode::UnknownClass,
                      "attack label without a type column");
        }
        r.clazz = EventClass::Normal;
      }
    } catch (const Error& e) {
      throw Error(e.code(), at_line(source, reader.line()) + e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SensorReading> parse_sensor_csv(const std::filesystem::path& path,
                                            SensorKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return parse_sensor_csv(in, kind, path.string());
}

void write_sensor_csv(std::ostream& out, SensorKind kind,
                      const std::vector<SensorReading>& readings) {
  const FeatureRange range = sensor_features(kind);
  std::vector<std::string> row = {"ts", "date", "time"};
  for (std::size_t i = 0; i < range.count; ++i) {
    row.emplace_back(feature_info(range.first + i).name);
  }
  row.emplace_back("label");
  row.emplace_back("type");
  csv::write_record(out, row);

  for (const SensorReading& r : readings) {
    row.clear();
    auto [date, time] = format_date_time(r.timestamp);
    row.push_back(std::to_string(r.timestamp));
    row.push_back(std::move(date));
    row.push_back(std::move(time));
    for (const RawValue& v : r.values) row.push_back(v.token);
    row.push_back(std::to_string(label_bit(r.clazz)));
    row.emplace_back(class_name(r.clazz));
    csv::write_record(out, row);
  }
}

std::array<std::filesystem::path, kSensorCount> discover_sensor_files(
    const std::filesystem::path& dir) {
  static constexpr std::array<std::string_view, kSensorCount> kKeys = {
      "fridge", "garage", "gps", "modbus", "motion", "thermostat", "weather"};
  std::array<std::vector<std::filesystem::path>, kSensorCount> found;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    if (to_lower(entry.path().extension().string()) != ".csv") continue;
    const std::string stem = to_lower(entry.path().stem().string());
    for (std::size_t s = 0; s < kSensorCount; ++s) {
      if (stem.find(kKeys[s]) != std::string::npos) {
        found[s].push_back(entry.path());
      }
    }
  }
  if (ec) {
    throw Error(ErrorCode::Io, "cannot list '" + dir.string() + "': " + ec.message());
  }
  std::array<std::filesystem::path, kSensorCount> paths;
  for (std::size_t s = 0; s < kSensorCount; ++s) {
    if (found[s].size() != 1) {
      throw Error(ErrorCode::Io,
                  std::to_string(found[s].size()) + " candidate files for " +
                      std::string(sensor_name(kAllSensors[s])) + " in '" +
                      dir.string() + "'");
    }
    paths[s] = found[s].front();
  }
  return paths;
}

SensorStreams load_sensor_dir(const std::filesystem::path& dir) {
  const auto paths = discover_sensor_files(dir);
  SensorStreams streams;
  for (std::size_t s = 0; s < kSensorCount; ++s) {
    streams[s] = parse_sensor_csv(paths[s], kAllSensors[s]);
  }
  return streams;
}

bool in_domain(std::size_t feature, const RawValue& value) {
  const FeatureInfo& info = feature_info(feature);
  if (info.kind == DomainKind::Categorical) {
    const std::string key = to_lower(trim(value.token));
    return std::find(info.tokens.begin(), info.tokens.end(), key) !=
           info.tokens.end();
  }
  if (value.value < info.lo || value.value > info.hi) return false;
  return !info.integral || std::floor(value.value) == value.value;
}

std::uint64_t SensorStats::peak_per_second() const {
  std::uint64_t peak = 0;
  for (const auto& [ts, n] : per_timestamp) peak = std::max(peak, n);
  return peak;
}

std::uint64_t IngestReport::total_rows() const {
  std::uint64_t n = 0;
  for (const auto& s : sensors) n += s.rows;
  return n;
}

std::uint64_t IngestReport::distinct_timestamps() const {
  std::set<std::int64_t> all;
  for (const auto& s : sensors) {
    for (const auto& [ts, n] : s.per_timestamp) all.insert(ts);
  }
  return all.size();
}

std::uint64_t IngestReport::out_of_domain() const {
  std::uint64_t n = 0;
  for (const auto& s : sensors) n += s.out_of_domain;
  return n;
}

IngestReport& IngestReport::merge(const IngestReport& other) {
  for (std::size_t s = 0; s < kSensorCount; ++s) {
    SensorStats& mine = sensors[s];
    const SensorStats& theirs = other.sensors[s];
    mine.rows += theirs.rows;
    mine.out_of_domain += theirs.out_of_domain;
    mine.timestamp_mismatches += theirs.timestamp_mismatches;
    for (const auto& [ts, n] : theirs.per_timestamp) mine.per_timestamp[ts] += n;
  }
  for (std::size_t c = 0; c < kClassCount; ++c) {
    class_counts[c] += other.class_counts[c];
  }
  return *this;
}

IngestReport sensor_stats(SensorKind kind,
                          const std::vector<SensorReading>& readings) {
  IngestReport report;
  SensorStats& s = report.sensors[static_cast<std::size_t>(kind)];
  const FeatureRange range = sensor_features(kind);
  for (const SensorReading& r : readings) {
    ++s.rows;
    ++s.per_timestamp[r.timestamp];
    if (r.timestamp_mismatch) ++s.timestamp_mismatches;
    for (std::size_t i = 0; i < r.values.size() && i < range.count; ++i) {
      if (!in_domain(range.first + i, r.values[i])) ++s.out_of_domain;
    }
    ++report.class_counts[static_cast<std::size_t>(r.clazz)];
  }
  return report;
}

IngestReport dataset_stats(const SensorStreams& streams) {
  IngestReport report;
  for (std::size_t s = 0; s < kSensorCount; ++s) {
    report.merge(sensor_stats(kAllSensors[s], streams[s]));
  }
  return report;
}

nlohmann::json to_json(const IngestReport& report) {
  nlohmann::json sensors = nlohmann::json::object();
  for (std::size_t s = 0; s < kSensorCount; ++s) {
    const SensorStats& st = report.sensors[s];
    sensors[std::string(sensor_name(kAllSensors[s]))] = {
        {"rows", st.rows},
        {"distinct_timestamps", st.distinct_timestamps()},
        {"peak_readings_per_second", st.peak_per_second()},
        {"out_of_domain_values", st.out_of_domain},
        {"timestamp_mismatches", st.timestamp_mismatches},
    };
  }
  nlohmann::json classes = nlohmann::json::object();
  for (std::size_t c = 0; c < kClassCount; ++c) {
    classes[std::string(class_name(kAllClasses[c]))] = report.class_counts[c];
  }
  return {
      {"total_rows", report.total_rows()},
      {"distinct_timestamps", report.distinct_timestamps()},
      {"out_of_domain_values", report.out_of_domain()},
      {"sensors", std::move(sensors)},
      {"class_counts", std::move(classes)},
  };
}

void write_timestamp_counts_csv(std::ostream& out, const IngestReport& report) {
  csv::write_record(out, {"sensor", "timestamp", "count"});
  for (std::size_t s = 0; s < kSensorCount; ++s) {
    const std::string name(sensor_name(kAllSensors[s]));
    for (const auto& [ts, n] : report.sensors[s].per_timestamp) {
      csv::write_record(out, {name, std::to_string(ts), std::to_string(n)});
    }
  }
}

}  // namespace iotids
