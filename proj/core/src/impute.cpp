#include "iotids/impute.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "iotids/error.hpp"
#include "iotids/text.hpp"

namespace iotids {

std::string_view strategy_token(ChannelStrategy s) noexcept {
  switch (s) {
    case ChannelStrategy::ConstNeg: return "-const";
    case ChannelStrategy::ConstPos: return "+const";
    case ChannelStrategy::Miss: return "miss";
    case ChannelStrategy::Fill: return "fill";
    case ChannelStrategy::MedianMode: return "mm";
  }
  return "?";
}

bool TensorSpec::uses(ChannelStrategy s) const {
  return std::find(channels.begin(), channels.end(), s) != channels.end();
}

std::string TensorSpec::token() const {
  std::string out;
  for (std::size_t i = 0; i < kChannels;) {
    std::size_t j = i;
    while (j < kChannels && channels[j] == channels[i]) ++j;
    if (!out.empty()) out += '|';
    out += strategy_token(channels[i]);
    out += std::to_string(j - i);
    i = j;
  }
  return out;
}

TensorSpec parse_tensor_spec(std::string_view token, std::size_t step) {
  static constexpr std::array<ChannelStrategy, 5> kAll = {
      ChannelStrategy::ConstNeg, ChannelStrategy::ConstPos,
      ChannelStrategy::Miss, ChannelStrategy::Fill,
      ChannelStrategy::MedianMode};
  const auto fail = [&](const std::string& why) -> TensorSpec {
    throw Error(ErrorCode::Usage,
                "bad imputation token '" + std::string(token) + "': " + why);
  };
  if (step == 0) fail("step must be positive");

  TensorSpec spec;
  spec.step = step;
  std::size_t channel = 0;
  std::string_view rest = trim(token);
  if (rest.empty()) fail("empty");
  while (!rest.empty()) {
    const auto bar = rest.find('|');
    std::string_view part = trim(rest.substr(0, bar));
    rest = bar == std::string_view::npos ? std::string_view{} : rest.substr(bar + 1);
    if (bar != std::string_view::npos && trim(rest).empty()) fail("trailing '|'");

    std::size_t digits = part.size();
    while (digits > 0 && part[digits - 1] >= '0' && part[digits - 1] <= '9') --digits;
    if (digits == part.size()) fail("missing channel count");
    const auto count = parse_int(part.substr(digits));
    const std::string name = to_lower(part.substr(0, digits));

    std::optional<ChannelStrategy> strategy;
    for (ChannelStrategy s : kAll) {
      if (name == strategy_token(s)) strategy = s;
    }
    if (!strategy) fail("unknown strategy '" + name + "'");
    if (!count || *count < 1 || channel + static_cast<std::size_t>(*count) > kChannels) {
      fail("channel counts must add up to 3");
    }
    for (std::int64_t i = 0; i < *count; ++i) spec.channels[channel++] = *strategy;
  }
  if (channel != kChannels) fail("channel counts must add up to 3");
  return spec;
}

TrainStats compute_train_stats(std::span<const std::span<const CombinedRow>> parts) {
  TrainStats stats;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const bool categorical = feature_info(f).kind == DomainKind::Categorical;
    std::vector<double> values;
    for (const auto part : parts) {
      for (const auto& row : part) {
        if (auto v = row.cell(f)) values.push_back(*v);
      }
    }
    stats.observed[f] = values.size();
    if (values.empty()) {
      stats.fill[f] = 0.0;
      continue;
    }
    if (categorical) {
      // Mode; ties go to the smallest code.
      std::map<double, std::uint64_t> freq;
      for (double v : values) ++freq[v];
      auto best = freq.begin();
      for (auto it = freq.begin(); it != freq.end(); ++it) {
        if (it->second > best->second) best = it;
      }
      stats.fill[f] = best->first;
    } else {
      const std::size_t mid = values.size() / 2;
      std::nth_element(values.begin(), values.begin() + mid, values.end());
      const double upper = values[mid];
      if (values.size() % 2 == 1) {
        stats.fill[f] = upper;
      } else {
        const double lower = *std::max_element(values.begin(), values.begin() + mid);
        stats.fill[f] = lower + (upper - lower) / 2.0;
      }
    }
  }
  return stats;
}

TrainStats compute_train_stats(std::span<const CombinedRow> rows) {
  const std::array<std::span<const CombinedRow>, 1> parts = {rows};
  return compute_train_stats(parts);
}

nlohmann::json to_json(const TrainStats& stats) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const bool categorical = feature_info(f).kind == DomainKind::Categorical;
    out[std::string(feature_info(f).name)] = {
        {categorical ? "mode" : "median", stats.fill[f]},
        {"observed", stats.observed[f]},
    };
  }
  return out;
}

TrainStats train_stats_from_json(const nlohmann::json& j) {
  TrainStats stats;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const std::string name(feature_info(f).name);
    if (!j.contains(name)) {
      throw Error(ErrorCode::FormatMismatch, "train stats lack '" + name + "'");
    }
    const auto& e = j.at(name);
    stats.fill[f] = e.contains("mode") ? e.at("mode").get<double>()
                                       : e.at("median").get<double>();
    stats.observed[f] = e.at("observed").get<std::uint64_t>();
  }
  return stats;
}

FeatureMatrix impute_channel(std::span<const CombinedRow> rows,
                             ChannelStrategy strategy,
                             const TrainStats* train_stats) {
  if (strategy == ChannelStrategy::MedianMode && train_stats == nullptr) {
    throw Error(ErrorCode::MissingStats,
                "median/mode imputation needs training statistics");
  }
  FeatureMatrix out(rows.size());
  switch (strategy) {
    case ChannelStrategy::ConstNeg:
    case ChannelStrategy::ConstPos: {
      const double c = strategy == ChannelStrategy::ConstNeg ? kConstNegative
                                                             : kConstPositive;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
          out[r][f] = rows[r].cell(f).value_or(c);
        }
      }
      break;
    }
    case ChannelStrategy::Miss:
      for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
          out[r][f] = rows[r].is_missing(f) ? 1.0 : 0.0;
        }
      }
      break;
    case ChannelStrategy::MedianMode:
      for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
          out[r][f] = rows[r].cell(f).value_or(train_stats->fill[f]);
        }
      }
      break;
    case ChannelStrategy::Fill:
      for (std::size_t f = 0; f < kFeatureCount; ++f) {
        std::optional<double> last;
        std::size_t leading = 0;  // rows before the first present cell
        for (std::size_t r = 0; r < rows.size(); ++r) {
          if (auto v = rows[r].cell(f)) {
            if (!last) {
              for (std::size_t k = 0; k < leading; ++k) out[k][f] = *v;
            }
            last = v;
            out[r][f] = *v;
          } else if (last) {
            out[r][f] = *last;
          } else {
            ++leading;
          }
        }
        if (!last) {
          for (std::size_t r = 0; r < rows.size(); ++r) out[r][f] = 0.0;
        }
      }
      break;
  }
  return out;
}

}  // namespace iotids
