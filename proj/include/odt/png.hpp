#pragma once

#include <cstdint>
#include <filesystem>

#include "odt/grid.hpp"

namespace odt {

using GrayImage = Image2<std::uint8_t>;

/// 8-bit grayscale PNG without timestamps, so equal images give equal bytes.
void write_png(const std::filesystem::path& path, const GrayImage& img);

/// Linear map of [lo, hi] to [0, 255] with clamping; a flat range maps to 0.
GrayImage to_gray(const Frame& f, double lo, double hi);
GrayImage to_gray(const Frame& f);

}  // namespace odt
