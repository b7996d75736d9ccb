#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace edgevo {

/// Row-major grayscale image with intensities normalized to [0, 1].
struct GrayImage {
  int width = 0, height = 0;
  std::vector<float> data;

  GrayImage() = default;
  GrayImage(int w, int h, float fill = 0.0f)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  float& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  float at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  bool inBounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
  std::size_t size() const { return data.size(); }
};

/// Row-major depth image in meters; 0 encodes invalid depth.
struct DepthImage {
  int width = 0, height = 0;
  std::vector<float> data;

  DepthImage() = default;
  DepthImage(int w, int h, float fill = 0.0f)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  float& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  float at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  bool validAt(int x, int y) const { return at(x, y) > 0.0f; }
};

/// Per-pixel intensity derivatives (intensity per pixel).
struct GradientImage {
  int width = 0, height = 0;
  std::vector<float> gx, gy;

  GradientImage() = default;
  GradientImage(int w, int h)
      : width(w), height(h),
        gx(static_cast<std::size_t>(w) * h, 0.0f),
        gy(static_cast<std::size_t>(w) * h, 0.0f) {}

  float gxAt(int x, int y) const { return gx[static_cast<std::size_t>(y) * width + x]; }
  float gyAt(int x, int y) const { return gy[static_cast<std::size_t>(y) * width + x]; }
};

/// Luminance conversion 0.299 R + 0.587 G + 0.114 B, scaled to [0, 1].
/// `rgb` is interleaved, 3 bytes per pixel.
GrayImage to_gray(int width, int height, const std::uint8_t* rgb);
GrayImage to_gray(int width, int height, const std::vector<std::uint8_t>& rgb);

/// Bilinear interpolation of the four neighbors. Empty when (x, y) lies
/// outside [0, w-1] x [0, h-1]; the caller drops the sample.
std::optional<float> bilinear_sample(const GrayImage& img, double x, double y);

struct IntensityAndGradient {
  float value;
  float gx, gy;
};

/// Fused bilinear intensity sample plus the exact derivative of the bilinear
/// intensity surface within the sample's 2x2 cell. This is the gradient the
/// photometric Jacobian needs: it is the true derivative of what
/// bilinear_sample evaluates.
std::optional<IntensityAndGradient> sample_intensity_gradient(const GrayImage& img,
                                                              double x, double y);

/// Central differences (I(x+1) - I(x-1))/2 in the interior, one-sided at the
/// borders. Requires width, height >= 3.
GradientImage gradient(const GrayImage& img);

/// 2x2 box average; odd trailing row/column trimmed. Requires dims >= 2.
GrayImage downsample_gray(const GrayImage& img);

/// Mean of the valid (nonzero) entries of each 2x2 block; 0 if none valid.
DepthImage downsample_depth(const DepthImage& img);

}  // namespace edgevo
