#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "iotids/model.hpp"

namespace iotids {

inline constexpr double kConstNegative = -100.0;
inline constexpr double kConstPositive = 100.0;

enum class ChannelStrategy : std::uint8_t {
  ConstNeg,    // -const: missing -> -100
  ConstPos,    // +const: missing -> +100
  Miss,        // 1 where missing, 0 where present
  Fill,        // forward fill, leading gap back-filled, empty column -> 0
  MedianMode,  // training median (numeric) or mode (categorical)
};

std::string_view strategy_token(ChannelStrategy s) noexcept;

inline constexpr std::size_t kChannels = 3;
inline constexpr std::size_t kWindowHeight = 224;
inline constexpr std::size_t kWindowWidth = 224;

struct TensorSpec {
  std::array<ChannelStrategy, kChannels> channels{
      ChannelStrategy::Miss, ChannelStrategy::Miss, ChannelStrategy::Miss};
  std::size_t step = 20;

  bool uses(ChannelStrategy s) const;
  // Canonical token, e.g. "miss3", "fill2|miss1".
  std::string token() const;

  friend bool operator==(const TensorSpec&, const TensorSpec&) = default;
};

// Parses imputation tokens such as "-const3", "+const3", "miss3", "fill3",
// "mm3", "fill2|miss1", "miss2|fill1", "-const2|miss1". Channel counts must
// add up to three. Throws Usage on malformed tokens.
TensorSpec parse_tensor_spec(std::string_view token, std::size_t step = 20);

// Per-feature replacement values for MedianMode, computed on training rows.
struct TrainStats {
  FeatureVector fill{};
  std::array<std::uint64_t, kFeatureCount> observed{};
};

TrainStats compute_train_stats(std::span<const std::span<const CombinedRow>> rows);
TrainStats compute_train_stats(std::span<const CombinedRow> rows);

nlohmann::json to_json(const TrainStats& stats);
TrainStats train_stats_from_json(const nlohmann::json& j);

// Imputes one chunk for one channel. Throws MissingStats when MedianMode is
// requested without statistics.
FeatureMatrix impute_channel(std::span<const CombinedRow> rows,
                             ChannelStrategy strategy,
                             const TrainStats* train_stats = nullptr);

}  // namespace iotids
