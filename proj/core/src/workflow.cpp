#include "iotids/workflow.hpp"

#include <fstream>
#include <string>

#include "iotids/container.hpp"
#include "iotids/encode.hpp"
#include "iotids/error.hpp"
#include "iotids/impute.hpp"
#include "iotids/pipeline.hpp"
#include "iotids/png.hpp"

namespace iotids {

namespace fs = std::filesystem;

inline constexpr const char* kRowsFile = "rows.csv";

PreparedStore prepare(const SensorStreams& streams, const PipelineConfig& config) {
  PreparedStore store;
  DatasetManifest& m = store.manifest;
  m.config = config;
  for (const auto& s : streams) m.source_rows += s.size();

  CombinedDataset combined = combine(streams, config.combination);
  m.combined_rows = combined.rows.size();
  m.class_conflicts = combined.class_conflicts;
  store.rows = config.aggregate ? aggregate_keep_first(combined.rows)
                                : std::move(combined.rows);
  m.rows = store.rows.size();
  m.row_classes = class_histogram(store.rows);

  const std::vector<Chunk> chunks = segment(store.rows, config.block_size);
  const PartitionAssignment assignment =
      partition(chunks, config.train_fraction, config.seed);
  m.effective_seed = assignment.effective_seed;
  for (const Chunk& c : chunks) {
    m.chunks.push_back({c, assignment.chunks[c.index], 0});
  }
  if (m.class_conflicts > 0) {
    m.notes.push_back(std::to_string(m.class_conflicts) +
                      " combined rows joined readings of different classes; the "
                      "first sensor's class was kept");
  }
  return store;
}

void write_prepared(const PreparedStore& store, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
  std::ofstream rows(dir / kRowsFile, std::ios::binary | std::ios::trunc);
  if (!rows) throw Error(ErrorCode::Io, "cannot write rows.csv");
  write_rows_csv(rows, store.rows);
  rows.close();
  if (!rows) throw Error(ErrorCode::Io, "cannot write rows.csv");
  write_manifest(dir, store.manifest);
}

PreparedStore read_prepared(const fs::path& dir) {
  PreparedStore store;
  store.manifest = read_manifest(dir);
  std::ifstream rows(dir / kRowsFile, std::ios::binary);
  if (!rows) throw Error(ErrorCode::Io, "cannot open '" + (dir / kRowsFile).string() + "'");
  store.rows = read_rows_csv(rows);
  if (store.rows.size() != store.manifest.rows) {
    throw Error(ErrorCode::FormatMismatch,
                "manifest lists " + std::to_string(store.manifest.rows) +
                    " rows, rows.csv has " + std::to_string(store.rows.size()));
  }
  std::size_t expected = 0;
  for (const auto& c : store.manifest.chunks) {
    if (c.chunk.begin != expected || c.chunk.end < c.chunk.begin ||
        c.chunk.end > store.rows.size()) {
      throw Error(ErrorCode::FormatMismatch, "manifest chunks do not tile rows.csv");
    }
    expected = c.chunk.end;
  }
  if (expected != store.rows.size()) {
    throw Error(ErrorCode::FormatMismatch, "manifest chunks do not tile rows.csv");
  }
  return store;
}

namespace {

ChannelMatrices impute_chunk(std::span<const CombinedRow> rows, const TensorSpec& spec,
                             const TrainStats* stats) {
  ChannelMatrices out;
  for (std::size_t ch = 0; ch < kChannels; ++ch) {
    out[ch] = impute_channel(rows, spec.channels[ch], stats);
  }
  return out;
}

void write_preview(const Sample& s, std::size_t index, const fs::path& dir, PreviewMode mode) {
  const std::string stem = "sample_" + std::to_string(index);
  if (mode == PreviewMode::Rgb) {
    write_png(dir / (stem + ".png"), kWindowWidth, kWindowHeight, 3, s.tensor);
    return;
  }
  std::vector<std::uint8_t> gray(kWindowWidth * kWindowHeight);
  for (std::size_t ch = 0; ch < kChannels; ++ch) {
    for (std::size_t px = 0; px < gray.size(); ++px) gray[px] = s.tensor[px * kChannels + ch];
    write_png(dir / (stem + "_c" + std::to_string(ch) + ".png"), kWindowWidth,
              kWindowHeight, 1, gray);
  }
}

}  // namespace

DatasetManifest encode_dataset(const PreparedStore& store, const TensorSpec& spec,
                               const fs::path& out_dir, const PreviewOptions& previews) {
  DatasetManifest m = store.manifest;
  m.tensor = spec;
  const std::span<const CombinedRow> rows = store.rows;
  const auto chunk_rows = [&](const ChunkRecord& c) {
    return rows.subspan(c.chunk.begin, c.chunk.size());
  };

  std::vector<std::span<const CombinedRow>> train_parts;
  for (const auto& c : m.chunks) {
    if (c.partition == Partition::Train) train_parts.push_back(chunk_rows(c));
  }
  if (spec.uses(ChannelStrategy::MedianMode)) {
    m.train_stats = compute_train_stats(train_parts);
  }
  const TrainStats* stats = m.train_stats ? &*m.train_stats : nullptr;

  ScalerFit fit;
  for (auto part : train_parts) fit.add(impute_chunk(part, spec, stats));
  m.scaler = fit.finish();

  if (spec.uses(ChannelStrategy::ConstNeg) || spec.uses(ChannelStrategy::ConstPos)) {
    m.notes.push_back(
        "constant imputation values (-100/+100) fall inside the Modbus register "
        "domain [0, 65535] (+100) or below it (-100) and can collide with real readings");
  }

  if (previews.count > 0) {
    std::error_code ec;
    fs::create_directories(out_dir / "previews", ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create previews directory: " + ec.message());
  }

  DatasetWriter writer(out_dir);
  m.short_chunks = 0;
  for (auto& c : m.chunks) {
    const auto part = chunk_rows(c);
    if (part.size() < kWindowHeight) {
      ++m.short_chunks;
      c.samples = 0;
      continue;
    }
    const ChannelBytes bytes = scale(impute_chunk(part, spec, stats), *m.scaler);
    std::vector<EventClass> classes;
    classes.reserve(part.size());
    for (const auto& r : part) classes.push_back(r.clazz);
    const auto samples = sample_windows(bytes, classes, spec.step, c.chunk.index, c.partition);
    c.samples = samples.size();
    for (const Sample& s : samples) {
      if (writer.size() < previews.count) {
        write_preview(s, writer.size(), out_dir / "previews", previews.mode);
      }
      writer.append(s);
    }
  }
  writer.finish(m);
  return m;
}

}  // namespace iotids
