#include "iotids/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "iotids/error.hpp"
#include "iotids/ingest.hpp"
#include "iotids/rng.hpp"
#include "iotids/text.hpp"

namespace iotids {

namespace {

[[noreturn]] void invalid(const std::string& why) {
  throw Error(ErrorCode::InvalidSchedule, why);
}

RawValue draw_value(std::size_t feature, Rng& rng, double shift) {
  const FeatureInfo& info = feature_info(feature);
  if (info.kind == DomainKind::Categorical) {
    const std::string token(info.tokens[rng.below(info.tokens.size())]);
    return {token, *categorical_code(token)};
  }
  if (info.integral) {
    std::int64_t v = rng.between(static_cast<std::int64_t>(info.lo),
                                 static_cast<std::int64_t>(info.hi));
    v = std::clamp<std::int64_t>(v + static_cast<std::int64_t>(std::llround(shift)),
                                 static_cast<std::int64_t>(info.lo),
                                 static_cast<std::int64_t>(info.hi));
    return {std::to_string(v), static_cast<double>(v)};
  }
  // One decimal place, kept inside the domain after rounding.
  const auto lo = static_cast<std::int64_t>(std::ceil(info.lo * 10.0 - 1e-9));
  const auto hi = static_cast<std::int64_t>(std::floor(info.hi * 10.0 + 1e-9));
  std::int64_t tenths = rng.between(lo, hi) + std::llround(shift * 10.0);
  tenths = std::clamp(tenths, lo, hi);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", static_cast<double>(tenths) / 10.0);
  return {buf, *parse_double(buf)};
}

}  // namespace

void Scenario::validate() const {
  if (duration <= 0) invalid("duration must be positive");
  for (std::size_t s = 0; s < kSensorCount; ++s) {
    const EmissionSpec& e = sensors[s];
    const std::string who(sensor_name(kAllSensors[s]));
    if (e.period < 1) throw Error(ErrorCode::Usage, who + ": period must be >= 1");
    if (e.jitter < 0) throw Error(ErrorCode::Usage, who + ": jitter must be >= 0");
    if (!(e.burst.probability >= 0.0 && e.burst.probability <= 1.0) ||
        e.burst.min_size < 1 || e.burst.max_size < e.burst.min_size) {
      throw Error(ErrorCode::Usage, who + ": malformed burst spec");
    }
  }
  if (schedule.empty()) invalid("schedule is empty");
  std::vector<ScheduleBlock> blocks = schedule;
  std::sort(blocks.begin(), blocks.end(),
            [](const ScheduleBlock& a, const ScheduleBlock& b) { return a.start < b.start; });
  std::int64_t cursor = 0;
  for (const auto& b : blocks) {
    if (b.end <= b.start) invalid("empty schedule block");
    if (b.start < cursor) invalid("schedule blocks overlap");
    if (b.start > cursor) invalid("schedule leaves a gap at " + std::to_string(cursor));
    cursor = b.end;
  }
  if (cursor != duration) invalid("schedule does not cover the duration");
  for (const auto& [clazz, effect] : effects) {
    for (double p : effect.drop_probability) {
      if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::Usage, "drop probability outside [0, 1]");
    }
    for (const auto& [feature, shift] : effect.value_shift) {
      if (feature >= kFeatureCount) throw Error(ErrorCode::Usage, "value shift on unknown feature");
    }
  }
}

EventClass Scenario::class_at(std::int64_t offset) const {
  for (const auto& b : schedule) {
    if (offset >= b.start && offset < b.end) return b.clazz;
  }
  invalid("offset " + std::to_string(offset) + " outside the schedule");
}

Scenario separable_scenario(std::uint64_t seed, std::int64_t block_seconds) {
  Scenario s;
  s.seed = seed;
  s.duration = block_seconds * static_cast<std::int64_t>(kClassCount);
  for (auto& e : s.sensors) e.period = 1;
  s.sensors[static_cast<std::size_t>(SensorKind::Thermostat)].period = 2;
  s.sensors[static_cast<std::size_t>(SensorKind::Fridge)].burst = {0.05, 2, 3};

  // Normal first, then the attacks in class order.
  std::vector<EventClass> order = {EventClass::Normal};
  for (EventClass c : kAllClasses) {
    if (is_attack(c)) order.push_back(c);
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    s.schedule.push_back({order[i], static_cast<std::int64_t>(i) * block_seconds,
                          static_cast<std::int64_t>(i + 1) * block_seconds});
  }
  for (std::size_t k = 1; k < order.size(); ++k) {
    ClassEffect effect;
    effect.silenced = {kAllSensors[k - 1], kAllSensors[k % kSensorCount]};
    s.effects[order[k]] = effect;
  }
  return s;
}

std::uint64_t GroundTruth::total_rows() const {
  std::uint64_t n = 0;
  for (auto r : rows) n += r;
  return n;
}

GeneratedData generate(const Scenario& scenario) {
  scenario.validate();
  GeneratedData out;
  Rng rng(scenario.seed);

  for (std::size_t s = 0; s < kSensorCount; ++s) {
    const SensorKind kind = kAllSensors[s];
    const EmissionSpec& spec = scenario.sensors[s];
    const FeatureRange range = sensor_features(kind);
    std::vector<SensorReading>& readings = out.streams[s];

    for (std::int64_t t = 0; t < scenario.duration; t += spec.period) {
      std::int64_t at = t;
      if (spec.jitter > 0) {
        at = std::clamp<std::int64_t>(t + rng.between(-spec.jitter, spec.jitter), 0,
                                      scenario.duration - 1);
      }
      const EventClass clazz = scenario.class_at(at);
      const auto eff = scenario.effects.find(clazz);
      const ClassEffect* effect = eff == scenario.effects.end() ? nullptr : &eff->second;
      if (effect != nullptr) {
        if (std::find(effect->silenced.begin(), effect->silenced.end(), kind) !=
            effect->silenced.end()) {
          continue;
        }
        if (effect->drop_probability[s] > 0.0 && rng.chance(effect->drop_probability[s])) {
          continue;
        }
      }
      std::uint32_t copies = 1;
      if (spec.burst.probability > 0.0 && rng.chance(spec.burst.probability)) {
        copies = static_cast<std::uint32_t>(rng.between(spec.burst.min_size, spec.burst.max_size));
      }
      for (std::uint32_t c = 0; c < copies; ++c) {
        SensorReading r;
        r.sensor = kind;
        r.timestamp = scenario.start_timestamp + at;
        r.clazz = clazz;
        for (std::size_t i = 0; i < range.count; ++i) {
          double shift = 0.0;
          if (effect != nullptr) {
            if (auto it = effect->value_shift.find(range.first + i); it != effect->value_shift.end()) {
              shift = it->second;
            }
          }
          r.values.push_back(draw_value(range.first + i, rng, shift));
        }
        readings.push_back(std::move(r));
      }
    }

    std::stable_sort(readings.begin(), readings.end(),
                     [](const SensorReading& a, const SensorReading& b) {
                       return a.timestamp < b.timestamp;
                     });
    std::set<std::int64_t> stamps;
    for (std::size_t i = 0; i < readings.size(); ++i) {
      readings[i].arrival_index = i;
      stamps.insert(readings[i].timestamp);
      ++out.truth.class_rows[static_cast<std::size_t>(readings[i].clazz)];
    }
    out.truth.rows[s] = readings.size();
    out.truth.distinct_timestamps[s] = stamps.size();
  }
  return out;
}

void write_generated(const GeneratedData& data, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
  for (std::size_t s = 0; s < kSensorCount; ++s) {
    const auto path = dir / (std::string(sensor_slug(kAllSensors[s])) + ".csv");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    write_sensor_csv(out, kAllSensors[s], data.streams[s]);
  }
  std::ofstream summary(dir / "summary.json", std::ios::trunc);
  if (!summary) throw Error(ErrorCode::Io, "cannot write summary.json");
  summary << to_json(data.truth).dump(2) << '\n';
}

nlohmann::json to_json(const Scenario& s) {
  nlohmann::json sensors = nlohmann::json::object();
  for (std::size_t i = 0; i < kSensorCount; ++i) {
    const auto& e = s.sensors[i];
    sensors[std::string(sensor_slug(kAllSensors[i]))] = {
        {"period", e.period},
        {"jitter", e.jitter},
        {"burst",
         {{"probability", e.burst.probability},
          {"min_size", e.burst.min_size},
          {"max_size", e.burst.max_size}}},
    };
  }
  nlohmann::json schedule = nlohmann::json::array();
  for (const auto& b : s.schedule) {
    schedule.push_back({{"class", std::string(class_name(b.clazz))},
                        {"start", b.start},
                        {"end", b.end}});
  }
  nlohmann::json effects = nlohmann::json::object();
  for (const auto& [clazz, e] : s.effects) {
    nlohmann::json silenced = nlohmann::json::array();
    for (auto k : e.silenced) silenced.push_back(std::string(sensor_slug(k)));
    nlohmann::json drop = nlohmann::json::object();
    for (std::size_t i = 0; i < kSensorCount; ++i) {
      if (e.drop_probability[i] > 0.0) {
        drop[std::string(sensor_slug(kAllSensors[i]))] = e.drop_probability[i];
      }
    }
    nlohmann::json shift = nlohmann::json::object();
    for (const auto& [f, v] : e.value_shift) shift[std::string(feature_info(f).name)] = v;
    effects[std::string(class_name(clazz))] = {
        {"silenced", std::move(silenced)},
        {"drop_probability", std::move(drop)},
        {"value_shift", std::move(shift)},
    };
  }
  return {
      {"seed", s.seed},
      {"start_timestamp", s.start_timestamp},
      {"duration", s.duration},
      {"sensors", std::move(sensors)},
      {"schedule", std::move(schedule)},
      {"effects", std::move(effects)},
  };
}

Scenario scenario_from_json(const nlohmann::json& j) {
  const auto sensor = [](const std::string& name) {
    auto k = sensor_from_name(name);
    if (!k) throw Error(ErrorCode::Usage, "scenario: unknown sensor '" + name + "'");
    return *k;
  };
  try {
    Scenario s;
    s.seed = j.value("seed", std::uint64_t{0});
    s.start_timestamp = j.value("start_timestamp", s.start_timestamp);
    s.duration = j.at("duration").get<std::int64_t>();
    if (j.contains("sensors")) {
      for (const auto& [name, e] : j.at("sensors").items()) {
        EmissionSpec& spec = s.sensors[static_cast<std::size_t>(sensor(name))];
        spec.period = e.value("period", std::int64_t{1});
        spec.jitter = e.value("jitter", std::int64_t{0});
        if (e.contains("burst")) {
          const auto& b = e.at("burst");
          spec.burst.probability = b.value("probability", 0.0);
          spec.burst.min_size = b.value("min_size", 1u);
          spec.burst.max_size = b.value("max_size", spec.burst.min_size);
        }
      }
    }
    for (const auto& b : j.at("schedule")) {
      s.schedule.push_back({parse_class(b.at("class").get<std::string>()),
                            b.at("start").get<std::int64_t>(),
                            b.at("end").get<std::int64_t>()});
    }
    if (j.contains("effects")) {
      for (const auto& [name, e] : j.at("effects").items()) {
        ClassEffect effect;
        for (const auto& k : e.value("silenced", nlohmann::json::array())) {
          effect.silenced.push_back(sensor(k.get<std::string>()));
        }
        const auto drop = e.value("drop_probability", nlohmann::json::object());
        const auto shift = e.value("value_shift", nlohmann::json::object());
        for (const auto& [k, p] : drop.items()) {
          effect.drop_probability[static_cast<std::size_t>(sensor(k))] = p.get<double>();
        }
        for (const auto& [f, v] : shift.items()) {
          const auto idx = feature_index(f);
          if (!idx) throw Error(ErrorCode::Usage, "scenario: unknown feature '" + f + "'");
          effect.value_shift[*idx] = v.get<double>();
        }
        s.effects[parse_class(name)] = effect;
      }
    }
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Usage, std::string("malformed scenario: ") + e.what());
  }
}

nlohmann::json to_json(const GroundTruth& t) {
  nlohmann::json sensors = nlohmann::json::object();
  for (std::size_t s = 0; s < kSensorCount; ++s) {
    sensors[std::string(sensor_name(kAllSensors[s]))] = {
        {"rows", t.rows[s]}, {"distinct_timestamps", t.distinct_timestamps[s]}};
  }
  nlohmann::json classes = nlohmann::json::object();
  for (std::size_t c = 0; c < kClassCount; ++c) {
    classes[std::string(class_name(kAllClasses[c]))] = t.class_rows[c];
  }
  return {{"total_rows", t.total_rows()},
          {"sensors", std::move(sensors)},
          {"class_counts", std::move(classes)}};
}

}  // namespace iotids
