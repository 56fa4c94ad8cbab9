#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "iotids/model.hpp"

namespace iotids {

enum class CombinationMode : std::uint8_t { Concatenate, GroupByTimestamp };

std::string_view combination_name(CombinationMode mode) noexcept;
// Accepts "concatenate" and "group-by-timestamp" (or "group-by").
CombinationMode parse_combination(std::string_view name);

struct CombinedDataset {
  std::vector<CombinedRow> rows;
  // Rows whose contributing readings carried different classes; the class of
  // the first contributing sensor (in sensor order) was kept.
  std::uint64_t class_conflicts = 0;
};

// One row per reading with only that sensor's cells present. Ordered by
// timestamp, then sensor order, then arrival index.
CombinedDataset concatenate(const SensorStreams& streams);

// Joins the k-th reading (arrival order) of every sensor at a timestamp into
// the row with ordinal k.
CombinedDataset group_by_timestamp(const SensorStreams& streams);

CombinedDataset combine(const SensorStreams& streams, CombinationMode mode);

// Keeps the ordinal-0 row of every timestamp; its counter becomes the sum of
// the counters of all rows at that timestamp. Input must be ordered by
// (timestamp, ordinal).
std::vector<CombinedRow> aggregate_keep_first(std::span<const CombinedRow> rows);

ClassHistogram class_histogram(std::span<const CombinedRow> rows);

struct Chunk {
  std::size_t index = 0;
  std::size_t begin = 0;  // first row
  std::size_t end = 0;    // one past the last row
  ClassHistogram classes{};

  std::size_t size() const noexcept { return end - begin; }
};

std::vector<Chunk> segment(std::span<const CombinedRow> rows,
                           std::size_t block_size);

enum class Partition : std::uint8_t { Train, Test };
std::string_view partition_name(Partition p) noexcept;
Partition parse_partition(std::string_view name);

inline constexpr int kMaxPartitionAttempts = 100;

struct PartitionAssignment {
  std::uint64_t seed = 0;            // requested seed
  std::uint64_t effective_seed = 0;  // seed of the accepted draw
  double train_fraction = 0.7;
  std::vector<Partition> chunks;     // indexed by chunk index

  std::size_t count(Partition p) const;
};

// ceil(train_fraction * chunks) chunks go to training, chosen by a seeded
// shuffle. A draw is accepted only when every class present in the data
// occurs in both partitions; otherwise the seed is incremented, up to
// kMaxPartitionAttempts draws, then PartitionInfeasible is thrown.
PartitionAssignment partition(std::span<const Chunk> chunks,
                              double train_fraction, std::uint64_t seed);

// Debug/storage export: 17 feature columns, then timestamp, ordinal,
// counter, class. Missing cells are empty fields.
void write_rows_csv(std::ostream& out, std::span<const CombinedRow> rows);
std::vector<CombinedRow> read_rows_csv(std::istream& in);

}  // namespace iotids
