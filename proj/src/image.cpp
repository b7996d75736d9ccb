#include "edgevo/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace edgevo {

GrayImage to_gray(int width, int height, const std::uint8_t* rgb) {
  GrayImage out(width, height);
  const std::size_t n = static_cast<std::size_t>(width) * height;
  constexpr float kScale = 1.0f / 255.0f;
  for (std::size_t i = 0; i < n; ++i) {
    const float r = rgb[3 * i + 0];
    const float g = rgb[3 * i + 1];
    const float b = rgb[3 * i + 2];
    out.data[i] = std::clamp((0.299f * r + 0.587f * g + 0.114f * b) * kScale, 0.0f, 1.0f);
  }
  return out;
}

GrayImage to_gray(int width, int height, const std::vector<std::uint8_t>& rgb) {
  if (rgb.size() != static_cast<std::size_t>(width) * height * 3)
    throw std::invalid_argument("to_gray: rgb buffer size does not match dimensions");
  return to_gray(width, height, rgb.data());
}

std::optional<float> bilinear_sample(const GrayImage& img, double x, double y) {
  if (!(x >= 0.0 && y >= 0.0 && x <= img.width - 1.0 && y <= img.height - 1.0))
    return std::nullopt;
  const int x0 = img.width >= 2 ? std::min(static_cast<int>(x), img.width - 2) : 0;
  const int y0 = img.height >= 2 ? std::min(static_cast<int>(y), img.height - 2) : 0;
  const int x1 = std::min(x0 + 1, img.width - 1);
  const int y1 = std::min(y0 + 1, img.height - 1);
  const float fx = static_cast<float>(x - x0);
  const float fy = static_cast<float>(y - y0);
  const float i00 = img.at(x0, y0), i10 = img.at(x1, y0);
  const float i01 = img.at(x0, y1), i11 = img.at(x1, y1);
  const float top = i00 + fx * (i10 - i00);
  const float bot = i01 + fx * (i11 - i01);
  return top + fy * (bot - top);
}

std::optional<IntensityAndGradient> sample_intensity_gradient(const GrayImage& img,
                                                              double x, double y) {
  if (!(x >= 0.0 && y >= 0.0 && x <= img.width - 1.0 && y <= img.height - 1.0))
    return std::nullopt;
  const int x0 = img.width >= 2 ? std::min(static_cast<int>(x), img.width - 2) : 0;
  const int y0 = img.height >= 2 ? std::min(static_cast<int>(y), img.height - 2) : 0;
  const int x1 = std::min(x0 + 1, img.width - 1);
  const int y1 = std::min(y0 + 1, img.height - 1);
  const float fx = static_cast<float>(x - x0);
  const float fy = static_cast<float>(y - y0);
  const float i00 = img.at(x0, y0), i10 = img.at(x1, y0);
  const float i01 = img.at(x0, y1), i11 = img.at(x1, y1);
  IntensityAndGradient s;
  const float top = i00 + fx * (i10 - i00);
  const float bot = i01 + fx * (i11 - i01);
  s.value = top + fy * (bot - top);
  s.gx = (1.0f - fy) * (i10 - i00) + fy * (i11 - i01);
  s.gy = (1.0f - fx) * (i01 - i00) + fx * (i11 - i10);
  return s;
}

GradientImage gradient(const GrayImage& img) {
  if (img.width < 3 || img.height < 3)
    throw std::invalid_argument("gradient: image must be at least 3x3");
  GradientImage g(img.width, img.height);
  const int w = img.width, h = img.height;
  for (int y = 0; y < h; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      const int xm = std::max(x - 1, 0), xp = std::min(x + 1, w - 1);
      const int ym = std::max(y - 1, 0), yp = std::min(y + 1, h - 1);
      const float sx = (x == 0 || x == w - 1) ? 1.0f : 0.5f;
      const float sy = (y == 0 || y == h - 1) ? 1.0f : 0.5f;
      g.gx[row + x] = sx * (img.at(xp, y) - img.at(xm, y));
      g.gy[row + x] = sy * (img.at(x, yp) - img.at(x, ym));
    }
  }
  return g;
}

GrayImage downsample_gray(const GrayImage& img) {
  if (img.width < 2 || img.height < 2)
    throw std::invalid_argument("downsample_gray: image must be at least 2x2");
  const int ow = img.width / 2, oh = img.height / 2;
  GrayImage out(ow, oh);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      const float s = img.at(2 * x, 2 * y) + img.at(2 * x + 1, 2 * y) +
                      img.at(2 * x, 2 * y + 1) + img.at(2 * x + 1, 2 * y + 1);
      out.at(x, y) = 0.25f * s;
    }
  return out;
}

DepthImage downsample_depth(const DepthImage& img) {
  if (img.width < 2 || img.height < 2)
    throw std::invalid_argument("downsample_depth: image must be at least 2x2");
  const int ow = img.width / 2, oh = img.height / 2;
  DepthImage out(ow, oh);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      float sum = 0.0f;
      int n = 0;
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) {
          const float d = img.at(2 * x + dx, 2 * y + dy);
          if (d > 0.0f) {
            sum += d;
            ++n;
          }
        }
      out.at(x, y) = n > 0 ? sum / n : 0.0f;
    }
  return out;
}

}  // namespace edgevo
