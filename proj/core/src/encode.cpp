#include "iotids/encode.hpp"

#include <algorithm>
#include <cmath>

#include "iotids/error.hpp"

namespace iotids {

void ScalerFit::add(const ChannelMatrices& chunk) {
  for (std::size_t ch = 0; ch < kChannels; ++ch) {
    std::size_t r = 0;
    for (const FeatureVector& row : chunk[ch]) {
      for (std::size_t f = 0; f < kFeatureCount; ++f) {
        auto& range = scaler_.ranges[ch][f];
        if (rows_ == 0 && r == 0) {
          range.min = range.max = row[f];
        } else {
          range.min = std::min(range.min, row[f]);
          range.max = std::max(range.max, row[f]);
        }
      }
      ++r;
    }
  }
  rows_ += chunk[0].size();
}

Scaler ScalerFit::finish() const {
  if (rows_ == 0) {
    throw Error(ErrorCode::EmptyTraining, "no training rows to fit the scaler");
  }
  return scaler_;
}

Scaler fit_scaler(std::span<const ChannelMatrices> training_chunks) {
  ScalerFit fit;
  for (const auto& chunk : training_chunks) fit.add(chunk);
  return fit.finish();
}

std::uint8_t scale_value(double v, FeatureRangeStats range) {
  if (!(range.max > range.min)) return 0;
  const double scaled = std::round(255.0 * (v - range.min) / (range.max - range.min));
  return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

ByteMatrix scale(const FeatureMatrix& matrix, const Scaler& scaler,
                 std::size_t channel) {
  ByteMatrix out(matrix.size());
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      out[r][f] = scale_value(matrix[r][f], scaler.ranges[channel][f]);
    }
  }
  return out;
}

ChannelBytes scale(const ChannelMatrices& chunk, const Scaler& scaler) {
  ChannelBytes out;
  for (std::size_t ch = 0; ch < kChannels; ++ch) out[ch] = scale(chunk[ch], scaler, ch);
  return out;
}

nlohmann::json to_json(const Scaler& scaler) {
  nlohmann::json channels = nlohmann::json::array();
  for (std::size_t ch = 0; ch < kChannels; ++ch) {
    nlohmann::json features = nlohmann::json::object();
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      features[std::string(feature_info(f).name)] = {
          {"min", scaler.ranges[ch][f].min}, {"max", scaler.ranges[ch][f].max}};
    }
    channels.push_back(std::move(features));
  }
  return channels;
}

Scaler scaler_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != kChannels) {
    throw Error(ErrorCode::FormatMismatch, "scaler must list three channels");
  }
  Scaler scaler;
  for (std::size_t ch = 0; ch < kChannels; ++ch) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      const auto& e = j[ch].at(std::string(feature_info(f).name));
      scaler.ranges[ch][f] = {e.at("min").get<double>(), e.at("max").get<double>()};
    }
  }
  return scaler;
}

std::size_t window_count(std::size_t rows, std::size_t step) {
  if (step == 0 || rows < kWindowHeight) return 0;
  return (rows - kWindowHeight) / step + 1;
}

std::vector<Sample> sample_windows(const ChannelBytes& chunk,
                                   std::span<const EventClass> classes,
                                   std::size_t step, std::size_t chunk_index,
                                   Partition partition) {
  const std::size_t rows = chunk[0].size();
  if (classes.size() != rows) {
    throw Error(ErrorCode::FormatMismatch, "class list does not match chunk rows");
  }
  std::vector<Sample> samples;
  samples.reserve(window_count(rows, step));
  for (std::size_t start = 0; step > 0 && start + kWindowHeight <= rows; start += step) {
    Sample s;
    s.tensor.assign(kSampleBytes, 0);
    for (std::size_t r = 0; r < kWindowHeight; ++r) {
      for (std::size_t ch = 0; ch < kChannels; ++ch) {
        const ByteRow& src = chunk[ch][start + r];
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
          s.tensor[tensor_offset(r, kFeatureOffset + f, ch)] = src[f];
        }
      }
    }
    s.clazz = classes[start + kWindowHeight - 1];
    s.chunk_index = chunk_index;
    s.start_row = start;
    s.partition = partition;
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace iotids
