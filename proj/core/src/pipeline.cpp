#include "iotids/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "iotids/csv.hpp"
#include "iotids/error.hpp"
#include "iotids/rng.hpp"
#include "iotids/text.hpp"

namespace iotids {

namespace {

// Readings of one sensor ordered by (timestamp, arrival_index).
std::vector<const SensorReading*> sorted_view(
    const std::vector<SensorReading>& readings) {
  std::vector<const SensorReading*> view;
  view.reserve(readings.size());
  for (const auto& r : readings) view.push_back(&r);
  std::stable_sort(view.begin(), view.end(),
                   [](const SensorReading* a, const SensorReading* b) {
                     return std::tie(a->timestamp, a->arrival_index) <
                            std::tie(b->timestamp, b->arrival_index);
                   });
  return view;
}

void place(CombinedRow& row, const SensorReading& reading) {
  const FeatureRange range = sensor_features(reading.sensor);
  const std::size_t n = std::min(range.count, reading.values.size());
  for (std::size_t i = 0; i < n; ++i) {
    row.set(range.first + i, reading.values[i].value);
  }
}

}  // namespace

std::string_view combination_name(CombinationMode mode) noexcept {
  return mode == CombinationMode::Concatenate ? "concatenate"
                                              : "group-by-timestamp";
}

CombinationMode parse_combination(std::string_view name) {
  const std::string key = to_lower(trim(name));
  if (key == "concatenate" || key == "concat") return CombinationMode::Concatenate;
  if (key == "group-by-timestamp" || key == "group-by" || key == "groupby") {
    return CombinationMode::GroupByTimestamp;
  }
  throw Error(ErrorCode::Usage, "unknown combination mode '" + key + "'");
}

CombinedDataset concatenate(const SensorStreams& streams) {
  std::vector<const SensorReading*> all;
  std::size_t total = 0;
  for (const auto& s : streams) total += s.size();
  all.reserve(total);
  for (const auto& s : streams) {
    for (const auto& r : s) all.push_back(&r);
  }
  std::sort(all.begin(), all.end(),
            [](const SensorReading* a, const SensorReading* b) {
              return std::tie(a->timestamp, a->sensor, a->arrival_index) <
                     std::tie(b->timestamp, b->sensor, b->arrival_index);
            });

  CombinedDataset out;
  out.rows.reserve(all.size());
  std::uint32_t ordinal = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (i > 0 && all[i]->timestamp == all[i - 1]->timestamp) {
      ++ordinal;
    } else {
      ordinal = 0;
    }
    CombinedRow row(all[i]->timestamp, ordinal, all[i]->clazz);
    place(row, *all[i]);
    out.rows.push_back(row);
  }
  return out;
}

CombinedDataset group_by_timestamp(const SensorStreams& streams) {
  std::array<std::vector<const SensorReading*>, kSensorCount> views;
  for (std::size_t s = 0; s < kSensorCount; ++s) views[s] = sorted_view(streams[s]);

  CombinedDataset out;
  std::array<std::size_t, kSensorCount> pos{};
  for (;;) {
    // Next timestamp across all sensors.
    bool any = false;
    std::int64_t ts = 0;
    for (std::size_t s = 0; s < kSensorCount; ++s) {
      if (pos[s] < views[s].size()) {
        const std::int64_t t = views[s][pos[s]]->timestamp;
        if (!any || t < ts) ts = t;
        any = true;
      }
    }
    if (!any) break;

    std::array<std::size_t, kSensorCount> end = pos;
    std::size_t depth = 0;
    for (std::size_t s = 0; s < kSensorCount; ++s) {
      while (end[s] < views[s].size() && views[s][end[s]]->timestamp == ts) {
        ++end[s];
      }
      depth = std::max(depth, end[s] - pos[s]);
    }

    for (std::size_t k = 0; k < depth; ++k) {
      CombinedRow row(ts, static_cast<std::uint32_t>(k), EventClass::Normal);
      bool first = true;
      bool conflict = false;
      for (std::size_t s = 0; s < kSensorCount; ++s) {
        if (pos[s] + k >= end[s]) continue;
        const SensorReading& r = *views[s][pos[s] + k];
        if (first) {
          row.clazz = r.clazz;
          first = false;
        } else if (r.clazz != row.clazz) {
          conflict = true;
        }
        place(row, r);
      }
      if (conflict) ++out.class_conflicts;
      out.rows.push_back(row);
    }
    pos = end;
  }
  return out;
}

CombinedDataset combine(const SensorStreams& streams, CombinationMode mode) {
  return mode == CombinationMode::Concatenate ? concatenate(streams)
                                              : group_by_timestamp(streams);
}

std::vector<CombinedRow> aggregate_keep_first(std::span<const CombinedRow> rows) {
  std::vector<CombinedRow> out;
  for (std::size_t i = 0; i < rows.size();) {
    std::size_t j = i;
    std::uint64_t counter = 0;
    while (j < rows.size() && rows[j].timestamp == rows[i].timestamp) {
      counter += rows[j].counter;
      ++j;
    }
    CombinedRow kept = rows[i];
    kept.ordinal = 0;
    kept.counter = counter;
    out.push_back(kept);
    i = j;
  }
  return out;
}

ClassHistogram class_histogram(std::span<const CombinedRow> rows) {
  ClassHistogram h{};
  for (const auto& r : rows) ++h[static_cast<std::size_t>(r.clazz)];
  return h;
}

std::vector<Chunk> segment(std::span<const CombinedRow> rows,
                           std::size_t block_size) {
  if (block_size == 0) {
    throw Error(ErrorCode::Usage, "block size must be at least 1");
  }
  std::vector<Chunk> chunks;
  for (std::size_t begin = 0; begin < rows.size(); begin += block_size) {
    Chunk c;
    c.index = chunks.size();
    c.begin = begin;
    c.end = std::min(rows.size(), begin + block_size);
    c.classes = class_histogram(rows.subspan(c.begin, c.size()));
    chunks.push_back(c);
  }
  return chunks;
}

std::string_view partition_name(Partition p) noexcept {
  return p == Partition::Train ? "train" : "test";
}

Partition parse_partition(std::string_view name) {
  const std::string key = to_lower(trim(name));
  if (key == "train") return Partition::Train;
  if (key == "test") return Partition::Test;
  throw Error(ErrorCode::FormatMismatch, "unknown partition '" + key + "'");
}

std::size_t PartitionAssignment::count(Partition p) const {
  return static_cast<std::size_t>(std::count(chunks.begin(), chunks.end(), p));
}

PartitionAssignment partition(std::span<const Chunk> chunks,
                              double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::Usage, "train fraction must lie in (0, 1)");
  }
  const std::size_t n = chunks.size();
  const auto n_train = static_cast<std::size_t>(
      std::ceil(train_fraction * static_cast<double>(n) - 1e-9));

  std::array<bool, kClassCount> present{};
  for (const auto& c : chunks) {
    for (std::size_t k = 0; k < kClassCount; ++k) present[k] |= c.classes[k] > 0;
  }

  PartitionAssignment result;
  result.seed = seed;
  result.train_fraction = train_fraction;
  for (int attempt = 0; attempt < kMaxPartitionAttempts; ++attempt) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(s);
    rng.shuffle(order);

    std::vector<Partition> assigned(n, Partition::Test);
    for (std::size_t i = 0; i < n_train; ++i) assigned[order[i]] = Partition::Train;

    std::array<bool, kClassCount> in_train{};
    std::array<bool, kClassCount> in_test{};
    for (std::size_t i = 0; i < n; ++i) {
      auto& seen = assigned[i] == Partition::Train ? in_train : in_test;
      for (std::size_t k = 0; k < kClassCount; ++k) {
        seen[k] |= chunks[i].classes[k] > 0;
      }
    }
    bool ok = true;
    for (std::size_t k = 0; k < kClassCount; ++k) {
      if (present[k] && !(in_train[k] && in_test[k])) ok = false;
    }
    if (ok) {
      result.effective_seed = s;
      result.chunks = std::move(assigned);
      return result;
    }
  }
  throw Error(ErrorCode::PartitionInfeasible,
              "no draw placed every class in both partitions after " +
                  std::to_string(kMaxPartitionAttempts) + " attempts");
}

void write_rows_csv(std::ostream& out, std::span<const CombinedRow> rows) {
  std::vector<std::string> fields;
  for (const auto& f : feature_table()) fields.emplace_back(f.name);
  for (const char* extra : {"timestamp", "ordinal", "counter", "class"}) {
    fields.emplace_back(extra);
  }
  csv::write_record(out, fields);
  for (const auto& row : rows) {
    fields.clear();
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      const auto cell = row.cell(f);
      fields.push_back(cell ? format_double(*cell) : std::string());
    }
    fields.push_back(std::to_string(row.timestamp));
    fields.push_back(std::to_string(row.ordinal));
    fields.push_back(std::to_string(row.counter));
    fields.emplace_back(class_name(row.clazz));
    csv::write_record(out, fields);
  }
}

std::vector<CombinedRow> read_rows_csv(std::istream& in) {
  csv::Reader reader(in);
  csv::Record rec;
  constexpr std::size_t kColumns = kFeatureCount + 4;
  if (!reader.next(rec) || rec.size() != kColumns) {
    throw Error(ErrorCode::FormatMismatch, "rows file: unexpected header");
  }
  std::vector<CombinedRow> rows;
  while (reader.next(rec)) {
    if (rec.size() != kColumns) {
      throw Error(ErrorCode::FormatMismatch,
                  "rows file line " + std::to_string(reader.line()) +
                      ": expected " + std::to_string(kColumns) + " fields");
    }
    CombinedRow row;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      if (trim(rec[f]).empty()) continue;
      const auto v = parse_double(rec[f]);
      if (!v) {
        throw Error(ErrorCode::FormatMismatch,
                    "rows file line " + std::to_string(reader.line()) +
                        ": bad value '" + rec[f] + "'");
      }
      row.set(f, *v);
    }
    const auto ts = parse_int(rec[kFeatureCount]);
    const auto ord = parse_int(rec[kFeatureCount + 1]);
    const auto counter = parse_int(rec[kFeatureCount + 2]);
    if (!ts || !ord || !counter || *ord < 0 || *counter < 1) {
      throw Error(ErrorCode::FormatMismatch,
                  "rows file line " + std::to_string(reader.line()) +
                      ": bad key columns");
    }
    row.timestamp = *ts;
    row.ordinal = static_cast<std::uint32_t>(*ord);
    row.counter = static_cast<std::uint64_t>(*counter);
    row.clazz = parse_class(rec[kFeatureCount + 3]);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace iotids
