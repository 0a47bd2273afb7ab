#include "depthkit/viz.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "depthkit/errors.hpp"

namespace depthkit {

std::array<std::uint8_t, 3> turbo_colormap(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const double r = 0.13572138 + t * (4.61539260 + t * (-42.66032258 + t * (132.13108234 +
                   t * (-152.94239396 + t * 59.28637943))));
  const double g = 0.09140261 + t * (2.19418839 + t * (4.84296658 + t * (-14.18503333 +
                   t * (4.27729857 + t * 2.82956604))));
  const double b = 0.10667330 + t * (12.64194608 + t * (-60.58204836 + t * (110.36276771 +
                   t * (-89.90310912 + t * 27.34824973))));
  auto quantize = [](double c) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0));
  };
  return {quantize(r), quantize(g), quantize(b)};
}

std::vector<std::uint8_t> render_depth_rgb(const DepthMap& map) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (!map.valid()[i]) continue;
    lo = std::min(lo, map.values()[i]);
    hi = std::max(hi, map.values()[i]);
  }
  const bool flat = !(hi > lo);

  std::vector<std::uint8_t> rgb(map.size() * 3, 0);
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (!map.valid()[i]) continue;
    const double t = flat ? 0.5 : (map.values()[i] - lo) / (hi - lo);
    const auto c = turbo_colormap(t);
    rgb[3 * i] = c[0];
    rgb[3 * i + 1] = c[1];
    rgb[3 * i + 2] = c[2];
  }
  return rgb;
}

namespace {

struct FileHandle {
  FILE* f = nullptr;
  ~FileHandle() {
    if (f) std::fclose(f);
  }
};

}  // namespace

void write_rgb_png(const std::filesystem::path& path, int width, int height,
                   const std::vector<std::uint8_t>& rgb) {
  if (rgb.size() != static_cast<std::size_t>(width) * height * 3) {
    raise(ErrorCode::invalid_argument, "write_rgb_png: buffer size mismatch");
  }
  FileHandle fh;
  fh.f = std::fopen(path.string().c_str(), "wb");
  if (!fh.f) raise(ErrorCode::io, "write_rgb_png: cannot open " + path.string());

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    raise(ErrorCode::io, "write_rgb_png: libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    raise(ErrorCode::io, "write_rgb_png: PNG write failed for " + path.string());
  }
  png_init_io(png, fh.f);
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<png_bytep>(rgb.data() + static_cast<std::size_t>(y) * width * 3);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

std::vector<std::uint8_t> read_rgb_png(const std::filesystem::path& path, int& width, int& height) {
  FileHandle fh;
  fh.f = std::fopen(path.string().c_str(), "rb");
  if (!fh.f) raise(ErrorCode::io, "read_rgb_png: cannot open " + path.string());

  unsigned char sig[8];
  if (std::fread(sig, 1, 8, fh.f) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    raise(ErrorCode::magic_mismatch, "read_rgb_png: " + path.string() + " is not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    raise(ErrorCode::io, "read_rgb_png: libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    raise(ErrorCode::truncated_file, "read_rgb_png: truncated or corrupt PNG: " + path.string());
  }
  png_init_io(png, fh.f);
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  if (png_get_bit_depth(png, info) != 8 || png_get_color_type(png, info) != PNG_COLOR_TYPE_RGB) {
    png_destroy_read_struct(&png, &info, nullptr);
    raise(ErrorCode::parse, "read_rgb_png: " + path.string() + " is not 8-bit RGB");
  }
  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(width) * height * 3);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = rgb.data() + static_cast<std::size_t>(y) * width * 3;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return rgb;
}

}  // namespace depthkit
