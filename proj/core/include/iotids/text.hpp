#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace iotids {

std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);

std::optional<double> parse_double(std::string_view s) noexcept;
std::optional<std::int64_t> parse_int(std::string_view s) noexcept;

// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

}  // namespace iotids
