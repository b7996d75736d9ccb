#include "edgevo/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>

#include "edgevo/errors.hpp"

namespace edgevo {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.string().c_str(), mode));
  if (!f) throw IoError("cannot open " + path.string());
  return f;
}

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  PngReader() {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png) info = png_create_info_struct(png);
    if (!png || !info) throw IoError("libpng allocation failed");
  }
  ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  PngWriter() {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png) info = png_create_info_struct(png);
    if (!png || !info) throw IoError("libpng allocation failed");
  }
  ~PngWriter() { png_destroy_write_struct(&png, &info); }
};

}  // namespace

Image8 read_png8(const std::filesystem::path& path) {
  FilePtr f = open_file(path, "rb");
  PngReader r;
  if (setjmp(png_jmpbuf(r.png))) throw IoError("failed to decode PNG " + path.string());
  png_init_io(r.png, f.get());
  png_read_info(r.png, r.info);

  png_set_strip_16(r.png);
  png_set_packing(r.png);
  png_set_strip_alpha(r.png);
  const png_byte color = png_get_color_type(r.png, r.info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(r.png, r.info) < 8)
    png_set_expand_gray_1_2_4_to_8(r.png);
  png_read_update_info(r.png, r.info);

  Image8 img;
  img.width = static_cast<int>(png_get_image_width(r.png, r.info));
  img.height = static_cast<int>(png_get_image_height(r.png, r.info));
  img.channels = static_cast<int>(png_get_channels(r.png, r.info));
  if (img.channels != 1 && img.channels != 3)
    throw IoError("unsupported channel count in " + path.string());

  img.data.resize(static_cast<std::size_t>(img.width) * img.height * img.channels);
  std::vector<png_bytep> rows(img.height);
  const std::size_t stride = static_cast<std::size_t>(img.width) * img.channels;
  for (int y = 0; y < img.height; ++y) rows[y] = img.data.data() + y * stride;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return img;
}

Image16 read_png_gray16(const std::filesystem::path& path) {
  FilePtr f = open_file(path, "rb");
  PngReader r;
  if (setjmp(png_jmpbuf(r.png))) throw IoError("failed to decode PNG " + path.string());
  png_init_io(r.png, f.get());
  png_read_info(r.png, r.info);

  if (png_get_bit_depth(r.png, r.info) != 16)
    throw IoError(path.string() + ": expected 16-bit depth PNG");
  if (png_get_color_type(r.png, r.info) != PNG_COLOR_TYPE_GRAY)
    throw IoError(path.string() + ": expected single-channel depth PNG");
  png_read_update_info(r.png, r.info);

  Image16 img;
  img.width = static_cast<int>(png_get_image_width(r.png, r.info));
  img.height = static_cast<int>(png_get_image_height(r.png, r.info));
  img.data.resize(static_cast<std::size_t>(img.width) * img.height);

  // PNG stores 16-bit samples big-endian; swap into host integers directly.
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(img.width) * 2);
  std::vector<png_bytep> row(1);
  for (int y = 0; y < img.height; ++y) {
    row[0] = raw.data();
    png_read_rows(r.png, row.data(), nullptr, 1);
    for (int x = 0; x < img.width; ++x)
      img.data[static_cast<std::size_t>(y) * img.width + x] =
          static_cast<std::uint16_t>((raw[2 * x] << 8) | raw[2 * x + 1]);
  }
  png_read_end(r.png, nullptr);
  return img;
}

void write_png_gray8(const std::filesystem::path& path, int width, int height,
                     const std::uint8_t* data) {
  FilePtr f = open_file(path, "wb");
  PngWriter w;
  if (setjmp(png_jmpbuf(w.png))) throw IoError("failed to encode PNG " + path.string());
  png_init_io(w.png, f.get());
  png_set_IHDR(w.png, w.info, width, height, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);
  for (int y = 0; y < height; ++y)
    png_write_row(w.png, const_cast<png_bytep>(data + static_cast<std::size_t>(y) * width));
  png_write_end(w.png, nullptr);
}

void write_png_gray16(const std::filesystem::path& path, int width, int height,
                      const std::uint16_t* data) {
  FilePtr f = open_file(path, "wb");
  PngWriter w;
  if (setjmp(png_jmpbuf(w.png))) throw IoError("failed to encode PNG " + path.string());
  png_init_io(w.png, f.get());
  png_set_IHDR(w.png, w.info, width, height, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(width) * 2);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::uint16_t v = data[static_cast<std::size_t>(y) * width + x];
      raw[2 * x] = static_cast<std::uint8_t>(v >> 8);
      raw[2 * x + 1] = static_cast<std::uint8_t>(v & 0xff);
    }
    png_write_row(w.png, raw.data());
  }
  png_write_end(w.png, nullptr);
}

}  // namespace edgevo
