#include "edgevo/edges.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace edgevo {

namespace {

// Separable Gaussian blur with replicated borders.
GrayImage gaussian_blur(const GrayImage& img, double sigma, int radius) {
  std::vector<float> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * i * i / (sigma * sigma));
    k[i + radius] = static_cast<float>(v);
    sum += v;
  }
  for (float& v : k) v = static_cast<float>(v / sum);

  const int w = img.width, h = img.height;
  GrayImage tmp(w, h), out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int i = -radius; i <= radius; ++i)
        acc += k[i + radius] * img.at(std::clamp(x + i, 0, w - 1), y);
      tmp.at(x, y) = acc;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int i = -radius; i <= radius; ++i)
        acc += k[i + radius] * tmp.at(x, std::clamp(y + i, 0, h - 1));
      out.at(x, y) = acc;
    }
  return out;
}

struct SobelResponse {
  std::vector<float> gx, gy, mag;  // zero on the 1px border
  int width, height;
};

SobelResponse sobel_response(const GrayImage& img) {
  const int w = img.width, h = img.height;
  SobelResponse r;
  r.width = w;
  r.height = h;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  r.gx.assign(n, 0.0f);
  r.gy.assign(n, 0.0f);
  r.mag.assign(n, 0.0f);
  for (int y = 1; y < h - 1; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    for (int x = 1; x < w - 1; ++x) {
      const float gx = (img.at(x + 1, y - 1) + 2.0f * img.at(x + 1, y) + img.at(x + 1, y + 1)) -
                       (img.at(x - 1, y - 1) + 2.0f * img.at(x - 1, y) + img.at(x - 1, y + 1));
      const float gy = (img.at(x - 1, y + 1) + 2.0f * img.at(x, y + 1) + img.at(x + 1, y + 1)) -
                       (img.at(x - 1, y - 1) + 2.0f * img.at(x, y - 1) + img.at(x + 1, y - 1));
      r.gx[row + x] = gx;
      r.gy[row + x] = gy;
      r.mag[row + x] = std::hypot(gx, gy);
    }
  }
  return r;
}

std::vector<float> interior_values(const std::vector<float>& v, int w, int h) {
  std::vector<float> out;
  out.reserve(static_cast<std::size_t>(std::max(w - 2, 0)) * std::max(h - 2, 0));
  for (int y = 1; y < h - 1; ++y)
    for (int x = 1; x < w - 1; ++x) out.push_back(v[static_cast<std::size_t>(y) * w + x]);
  return out;
}

void clear_border(EdgeMask& m) {
  for (int x = 0; x < m.width; ++x) {
    m.set(x, 0, false);
    m.set(x, m.height - 1, false);
  }
  for (int y = 0; y < m.height; ++y) {
    m.set(0, y, false);
    m.set(m.width - 1, y, false);
  }
}

// Neighbor offsets for the four quantized gradient directions.
constexpr int kDirDx[4] = {1, 1, 0, -1};
constexpr int kDirDy[4] = {0, 1, 1, 1};

int quantize_direction(float gx, float gy) {
  double ang = std::atan2(gy, gx);
  if (ang < 0) ang += M_PI;  // fold to [0, pi)
  if (ang >= M_PI) ang = 0.0;
  const double deg = ang * 180.0 / M_PI;
  if (deg < 22.5 || deg >= 157.5) return 0;
  if (deg < 67.5) return 1;
  if (deg < 112.5) return 2;
  return 3;
}

}  // namespace

float otsu_threshold(std::span<const float> values, int bins) {
  if (values.empty()) throw std::invalid_argument("otsu_threshold: empty values");
  if (bins < 2) throw std::invalid_argument("otsu_threshold: bins must be >= 2");

  const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
  const float vmin = *mn_it, vmax = *mx_it;
  if (vmin == vmax) return vmin;

  std::vector<std::size_t> hist(bins, 0);
  const double scale = bins / (static_cast<double>(vmax) - vmin);
  for (float v : values) {
    int b = static_cast<int>((static_cast<double>(v) - vmin) * scale);
    b = std::clamp(b, 0, bins - 1);
    ++hist[b];
  }

  const double total = static_cast<double>(values.size());
  double sum_all = 0.0;
  for (int b = 0; b < bins; ++b) sum_all += b * static_cast<double>(hist[b]);

  double w0 = 0.0, sum0 = 0.0, best = -1.0;
  double tie_sum = 0.0;
  int tie_n = 0;
  for (int b = 0; b < bins - 1; ++b) {
    w0 += static_cast<double>(hist[b]);
    if (w0 == 0.0) continue;
    const double w1 = total - w0;
    if (w1 == 0.0) break;
    sum0 += b * static_cast<double>(hist[b]);
    const double mu0 = sum0 / w0;
    const double mu1 = (sum_all - sum0) / w1;
    const double between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (between > best + 1e-12 * std::max(best, 1.0)) {
      best = between;
      tie_sum = b;
      tie_n = 1;
    } else if (std::abs(between - best) <= 1e-12 * std::max(best, 1.0)) {
      tie_sum += b;
      ++tie_n;
    }
  }
  // Plateaus are common (empty valley bins); take the middle of the tie run.
  const double b_star = tie_sum / std::max(tie_n, 1);
  const double binw = (static_cast<double>(vmax) - vmin) / bins;
  return static_cast<float>(vmin + (b_star + 1.0) * binw);
}

EdgeMask canny_with_threshold(const GrayImage& img, float high) {
  if (std::min(img.width, img.height) < 16)
    throw std::invalid_argument("canny: min dimension is 16");
  const int w = img.width, h = img.height;
  const GrayImage blurred = gaussian_blur(img, 1.4, 2);
  const SobelResponse s = sobel_response(blurred);
  const float low = 0.5f * high;

  // Non-maximum suppression, ties broken toward the positive direction so a
  // symmetric two-pixel ridge keeps exactly one pixel.
  std::vector<std::uint8_t> survives(static_cast<std::size_t>(w) * h, 0);
  for (int y = 1; y < h - 1; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    for (int x = 1; x < w - 1; ++x) {
      const float m = s.mag[row + x];
      if (m <= low) continue;
      const int d = quantize_direction(s.gx[row + x], s.gy[row + x]);
      const int dx = kDirDx[d], dy = kDirDy[d];
      const float mpos = s.mag[static_cast<std::size_t>(y + dy) * w + (x + dx)];
      const float mneg = s.mag[static_cast<std::size_t>(y - dy) * w + (x - dx)];
      if (m >= mpos && m > mneg) survives[row + x] = 1;
    }
  }

  // Hysteresis: flood from strong pixels through weak NMS survivors.
  EdgeMask mask(w, h);
  std::vector<std::pair<int, int>> stack;
  for (int y = 1; y < h - 1; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    for (int x = 1; x < w - 1; ++x) {
      if (!survives[row + x] || s.mag[row + x] <= high || mask.get(x, y)) continue;
      stack.emplace_back(x, y);
      mask.set(x, y, true);
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx, ny = cy + dy;
            if (nx < 1 || ny < 1 || nx >= w - 1 || ny >= h - 1) continue;
            const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
            if (!survives[ni] || mask.get(nx, ny) || s.mag[ni] <= low) continue;
            mask.set(nx, ny, true);
            stack.emplace_back(nx, ny);
          }
      }
    }
  }
  clear_border(mask);
  return mask;
}

EdgeMask canny(const GrayImage& img) {
  if (std::min(img.width, img.height) < 16)
    throw std::invalid_argument("canny: min dimension is 16");
  const GrayImage blurred = gaussian_blur(img, 1.4, 2);
  const SobelResponse s = sobel_response(blurred);
  const std::vector<float> mags = interior_values(s.mag, img.width, img.height);
  const float high = otsu_threshold(mags);
  if (high <= 0.0f) return EdgeMask(img.width, img.height);  // uniform image
  return canny_with_threshold(img, high);
}

EdgeMask log_edges(const GrayImage& img) {
  if (std::min(img.width, img.height) < 16)
    throw std::invalid_argument("log_edges: min dimension is 16");
  const int w = img.width, h = img.height;
  const GrayImage g1 = gaussian_blur(img, 1.0, 3);
  const GrayImage g2 = gaussian_blur(img, 1.6, 5);
  std::vector<float> dog(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < dog.size(); ++i) dog[i] = g2.data[i] - g1.data[i];

  std::vector<float> abs_dog(dog.size());
  for (std::size_t i = 0; i < dog.size(); ++i) abs_dog[i] = std::abs(dog[i]);
  const float thr = otsu_threshold(abs_dog);

  EdgeMask mask(w, h);
  if (thr <= 0.0f) return mask;
  auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };
  for (int y = 1; y < h - 1; ++y)
    for (int x = 1; x < w - 1; ++x) {
      const float a = dog[idx(x, y)];
      for (const auto& [nx, ny] : {std::pair{x + 1, y}, std::pair{x, y + 1}}) {
        const float b = dog[idx(nx, ny)];
        if (!((a < 0.0f && b > 0.0f) || (a > 0.0f && b < 0.0f))) continue;
        if (std::abs(a) + std::abs(b) <= thr) continue;
        // Mark the side closer to the zero crossing.
        if (std::abs(b) < std::abs(a) && nx < w - 1 && ny < h - 1)
          mask.set(nx, ny, true);
        else
          mask.set(x, y, true);
      }
    }
  clear_border(mask);
  return mask;
}

EdgeMask sobel_edges(const GrayImage& img) {
  if (std::min(img.width, img.height) < 3)
    throw std::invalid_argument("sobel_edges: min dimension is 3");
  const int w = img.width, h = img.height;
  const SobelResponse s = sobel_response(img);
  const std::vector<float> mags = interior_values(s.mag, w, h);
  const float thr = otsu_threshold(mags);
  EdgeMask mask(w, h);
  if (thr <= 0.0f) return mask;
  for (int y = 1; y < h - 1; ++y)
    for (int x = 1; x < w - 1; ++x)
      if (s.mag[static_cast<std::size_t>(y) * w + x] > thr) mask.set(x, y, true);
  return mask;
}

EdgeMask detect_edges(const GrayImage& img, EdgeDetectorKind kind) {
  switch (kind) {
    case EdgeDetectorKind::Canny: return canny(img);
    case EdgeDetectorKind::LoG: return log_edges(img);
    case EdgeDetectorKind::Sobel: return sobel_edges(img);
  }
  throw std::logic_error("detect_edges: unknown detector");
}

const char* to_string(EdgeDetectorKind kind) {
  switch (kind) {
    case EdgeDetectorKind::Canny: return "canny";
    case EdgeDetectorKind::LoG: return "log";
    case EdgeDetectorKind::Sobel: return "sobel";
  }
  return "?";
}

EdgeDetectorKind edge_detector_from_string(const std::string& name) {
  if (name == "canny") return EdgeDetectorKind::Canny;
  if (name == "log") return EdgeDetectorKind::LoG;
  if (name == "sobel") return EdgeDetectorKind::Sobel;
  throw std::invalid_argument("unknown edge detector: " + name);
}

void write_pgm(const EdgeMask& mask, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_pgm: cannot open " + path.string());
  f << "P5\n" << mask.width << " " << mask.height << "\n255\n";
  std::vector<std::uint8_t> row(mask.width);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) row[x] = mask.get(x, y) ? 255 : 0;
    f.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
}

}  // namespace edgevo
