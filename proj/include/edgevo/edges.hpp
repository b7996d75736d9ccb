#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "edgevo/image.hpp"

namespace edgevo {

/// Boolean per-pixel edge set restricting the residual support.
struct EdgeMask {
  int width = 0, height = 0;
  std::vector<std::uint8_t> bits;
  int count = 0;

  EdgeMask() = default;
  EdgeMask(int w, int h)
      : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

  bool get(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v) {
    std::uint8_t& b = bits[static_cast<std::size_t>(y) * width + x];
    count += static_cast<int>(v) - static_cast<int>(b != 0);
    b = v ? 1 : 0;
  }
  double density() const {
    return bits.empty() ? 0.0 : static_cast<double>(count) / bits.size();
  }
};

enum class EdgeDetectorKind { Canny, LoG, Sobel };

/// Histogram-based Otsu threshold: maximizes between-class variance over a
/// `bins`-bin histogram of the values. All-equal input returns that value
/// (degenerate; masks thresholded strictly above it come out empty).
float otsu_threshold(std::span<const float> values, int bins = 256);

/// Canny: 5x5 Gaussian blur (sigma 1.4), Sobel magnitude/orientation,
/// 4-direction non-maximum suppression, hysteresis with
/// high = otsu_threshold(magnitudes) and low = high/2.
EdgeMask canny(const GrayImage& img);

/// Canny with an explicit high threshold (low = high/2); canny() calls this
/// with the Otsu threshold.
EdgeMask canny_with_threshold(const GrayImage& img, float high);

/// Difference-of-Gaussians zero crossings (sigma 1.0 / 1.6); a crossing is
/// kept when the contrast across it exceeds the Otsu threshold of |DoG|.
EdgeMask log_edges(const GrayImage& img);

/// Sobel gradient magnitude thresholded at its Otsu value; no thinning.
EdgeMask sobel_edges(const GrayImage& img);

EdgeMask detect_edges(const GrayImage& img, EdgeDetectorKind kind);

const char* to_string(EdgeDetectorKind kind);
EdgeDetectorKind edge_detector_from_string(const std::string& name);

/// Debug rendering of a mask as a binary PGM (P5, 0/255).
void write_pgm(const EdgeMask& mask, const std::filesystem::path& path);

}  // namespace edgevo
