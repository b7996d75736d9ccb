#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace edgevo {

struct Image8 {
  int width = 0, height = 0, channels = 0;  // 1 (gray) or 3 (rgb)
  std::vector<std::uint8_t> data;
};

struct Image16 {
  int width = 0, height = 0;
  std::vector<std::uint16_t> data;
};

/// Reads any PNG, normalized to 8-bit grayscale or RGB (palette expanded,
/// 16-bit narrowed, alpha stripped).
Image8 read_png8(const std::filesystem::path& path);

/// Reads a 16-bit single-channel PNG exactly; anything else is an error.
Image16 read_png_gray16(const std::filesystem::path& path);

void write_png_gray8(const std::filesystem::path& path, int width, int height,
                     const std::uint8_t* data);
void write_png_gray16(const std::filesystem::path& path, int width, int height,
                      const std::uint16_t* data);

}  // namespace edgevo
