#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "iotids/encode.hpp"
#include "iotids/manifest.hpp"

namespace iotids {

namespace detail {
class Sha256;
}

// On-disk dataset: manifest.json, samples.bin (N * 224 * 224 * 3 raw bytes)
// and labels.csv (index,partition,class,chunk_index,start_row).
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kSamplesFile = "samples.bin";
inline constexpr const char* kLabelsFile = "labels.csv";

struct SampleLabel {
  std::size_t index = 0;
  Partition partition = Partition::Train;
  EventClass clazz = EventClass::Normal;
  std::size_t chunk_index = 0;
  std::size_t start_row = 0;
};

// Streams samples to disk so large datasets never sit in memory. The
// manifest is written last, with the sample counts and content hash filled
// in from what was actually appended.
class DatasetWriter {
 public:
  explicit DatasetWriter(const std::filesystem::path& dir);
  ~DatasetWriter();
  DatasetWriter(const DatasetWriter&) = delete;
  DatasetWriter& operator=(const DatasetWriter&) = delete;

  void append(const Sample& sample);
  std::size_t size() const noexcept { return count_; }
  // Finalises the container. Fills samples/sha256 fields of `manifest`.
  void finish(DatasetManifest& manifest);

 private:
  std::filesystem::path dir_;
  std::ofstream samples_;
  std::ofstream labels_;
  std::unique_ptr<detail::Sha256> hasher_;
  SampleCounts counts_;
  std::size_t count_ = 0;
  bool finished_ = false;
};

void write_dataset(std::span<const Sample> samples, DatasetManifest manifest,
                   const std::filesystem::path& dir);

struct Dataset {
  DatasetManifest manifest;
  std::vector<Sample> samples;
};

// Reads and cross-checks a container. Throws FormatMismatch when the manifest,
// labels and sample file disagree.
Dataset read_dataset(const std::filesystem::path& dir);

DatasetManifest read_manifest(const std::filesystem::path& dir);
void write_manifest(const std::filesystem::path& dir, const DatasetManifest& m);
std::vector<SampleLabel> read_labels(const std::filesystem::path& labels_csv);

std::string sha256_file(const std::filesystem::path& path);

}  // namespace iotids
