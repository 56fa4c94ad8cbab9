#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "iotids/impute.hpp"
#include "iotids/model.hpp"
#include "iotids/pipeline.hpp"

namespace iotids {

// First tensor column of the 17-feature band: floor((224 - 17) / 2).
inline constexpr std::size_t kFeatureOffset = (kWindowWidth - kFeatureCount) / 2;
inline constexpr std::size_t kSampleBytes = kWindowHeight * kWindowWidth * kChannels;

// Imputed matrices of one chunk, one per channel.
using ChannelMatrices = std::array<FeatureMatrix, kChannels>;

using ByteRow = std::array<std::uint8_t, kFeatureCount>;
using ByteMatrix = std::vector<ByteRow>;
using ChannelBytes = std::array<ByteMatrix, kChannels>;

struct FeatureRangeStats {
  double min = 0.0;
  double max = 0.0;
};

// Per (channel, feature) value range observed on the imputed training data.
struct Scaler {
  std::array<std::array<FeatureRangeStats, kFeatureCount>, kChannels> ranges{};

  bool degenerate(std::size_t channel, std::size_t feature) const {
    const auto& r = ranges[channel][feature];
    return r.max <= r.min;
  }
};

// Accumulates min/max over any number of training chunks.
class ScalerFit {
 public:
  void add(const ChannelMatrices& chunk);
  // Throws EmptyTraining when no rows were added.
  Scaler finish() const;

 private:
  Scaler scaler_;
  std::size_t rows_ = 0;
};

Scaler fit_scaler(std::span<const ChannelMatrices> training_chunks);

// round(255 * (v - min) / (max - min)), half away from zero, clamped to
// [0, 255]; degenerate ranges map to 0.
std::uint8_t scale_value(double v, FeatureRangeStats range);
ByteMatrix scale(const FeatureMatrix& matrix, const Scaler& scaler,
                 std::size_t channel);
ChannelBytes scale(const ChannelMatrices& chunk, const Scaler& scaler);

nlohmann::json to_json(const Scaler& scaler);
Scaler scaler_from_json(const nlohmann::json& j);

// floor((rows - 224) / step) + 1 windows when rows >= 224, else 0.
std::size_t window_count(std::size_t rows, std::size_t step);

struct Sample {
  std::vector<std::uint8_t> tensor;  // kSampleBytes, row-major, channel-last
  EventClass clazz = EventClass::Normal;
  std::size_t chunk_index = 0;
  std::size_t start_row = 0;  // relative to the chunk
  Partition partition = Partition::Train;

  friend bool operator==(const Sample&, const Sample&) = default;
};

inline constexpr std::size_t tensor_offset(std::size_t row, std::size_t col,
                                           std::size_t channel) {
  return (row * kWindowWidth + col) * kChannels + channel;
}

// Slides a 224-row window down the chunk by `step` rows. Each window is
// labelled with the class of its last row. `classes` holds the class of every
// chunk row.
std::vector<Sample> sample_windows(const ChannelBytes& chunk,
                                   std::span<const EventClass> classes,
                                   std::size_t step, std::size_t chunk_index,
                                   Partition partition);

}  // namespace iotids
