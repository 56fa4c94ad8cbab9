#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

namespace iotids {

// 8-bit grayscale (channels = 1) or RGB (channels = 3), rows top to bottom.
void write_png(const std::filesystem::path& path, std::uint32_t width,
               std::uint32_t height, int channels,
               std::span<const std::uint8_t> pixels);

}  // namespace iotids
