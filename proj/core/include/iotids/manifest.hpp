#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "iotids/encode.hpp"
#include "iotids/impute.hpp"
#include "iotids/pipeline.hpp"

namespace iotids {

inline constexpr int kManifestFormatVersion = 1;

struct PipelineConfig {
  CombinationMode combination = CombinationMode::GroupByTimestamp;
  bool aggregate = true;
  std::size_t block_size = 500;
  double train_fraction = 0.7;
  std::uint64_t seed = 0;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

struct ChunkRecord {
  Chunk chunk;
  Partition partition = Partition::Train;
  std::size_t samples = 0;  // windows emitted from this chunk (encode stage)
};

struct SampleCounts {
  ClassHistogram train{};
  ClassHistogram test{};
  std::uint64_t total() const;
};

// Everything needed to re-derive a prepared store or dataset container.
struct DatasetManifest {
  int format_version = kManifestFormatVersion;
  PipelineConfig config;
  std::uint64_t effective_seed = 0;
  std::uint64_t source_rows = 0;     // readings ingested
  std::uint64_t combined_rows = 0;   // rows after combination
  std::uint64_t rows = 0;            // rows after (optional) aggregation
  std::uint64_t class_conflicts = 0;
  ClassHistogram row_classes{};
  std::vector<ChunkRecord> chunks;

  // Encode stage; absent in a prepared store.
  std::optional<TensorSpec> tensor;
  std::optional<Scaler> scaler;
  std::optional<TrainStats> train_stats;
  SampleCounts samples;
  std::uint64_t short_chunks = 0;  // chunks with fewer rows than a window
  std::string samples_sha256;
  std::vector<std::string> notes;
};

nlohmann::json to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ClassHistogram& h);
ClassHistogram histogram_from_json(const nlohmann::json& j);

}  // namespace iotids
