#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "iotids/manifest.hpp"
#include "iotids/model.hpp"

namespace iotids {

// Combined (and optionally aggregated) rows with their chunking and partition.
struct PreparedStore {
  DatasetManifest manifest;
  std::vector<CombinedRow> rows;
};

// combination -> aggregation -> segmentation -> partitioning.
PreparedStore prepare(const SensorStreams& streams, const PipelineConfig& config);

// rows.csv + chunks recorded in manifest.json.
void write_prepared(const PreparedStore& store, const std::filesystem::path& dir);
PreparedStore read_prepared(const std::filesystem::path& dir);

enum class PreviewMode { Rgb, Gray };

struct PreviewOptions {
  std::size_t count = 0;  // first N samples; 0 disables previews
  PreviewMode mode = PreviewMode::Rgb;
};

// imputation -> scaling -> windowing -> container. Returns the written
// manifest.
DatasetManifest encode_dataset(const PreparedStore& store, const TensorSpec& spec,
                               const std::filesystem::path& out_dir,
                               const PreviewOptions& previews = {});

}  // namespace iotids
