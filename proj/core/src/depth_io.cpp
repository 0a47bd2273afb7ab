#include "depthkit/depth_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "depthkit/errors.hpp"

namespace depthkit {
namespace {

constexpr char kFloatMapMagic[8] = {'D', 'K', 'F', 'M', 'A', 'P', '0', '1'};
constexpr double kFloatMapNoData = 0.0;

struct FileHandle {
  FILE* f = nullptr;
  ~FileHandle() {
    if (f) std::fclose(f);
  }
};

struct PngRead {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngRead() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWrite {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWrite() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

void append_u32_le(std::vector<unsigned char>& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

void append_f64_le(std::vector<unsigned char>& buf, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<unsigned char>((bits >> (8 * i)) & 0xff));
}

std::uint32_t read_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

double read_f64_le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

MaskedGrid read_png16_grid(const std::filesystem::path& path) {
  FileHandle fh;
  fh.f = std::fopen(path.string().c_str(), "rb");
  if (!fh.f) raise(ErrorCode::io, "read_depth: cannot open " + path.string());

  unsigned char sig[8];
  if (std::fread(sig, 1, 8, fh.f) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    raise(ErrorCode::magic_mismatch, "read_depth: " + path.string() + " is not a PNG file");
  }

  PngRead ctx;
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) raise(ErrorCode::io, "read_depth: libpng init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) raise(ErrorCode::io, "read_depth: libpng init failed");

  if (setjmp(png_jmpbuf(ctx.png))) {
    raise(ErrorCode::truncated_file, "read_depth: truncated or corrupt PNG: " + path.string());
  }
  png_init_io(ctx.png, fh.f);
  png_set_sig_bytes(ctx.png, 8);
  png_read_info(ctx.png, ctx.info);

  const png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
  const png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
  const int depth = png_get_bit_depth(ctx.png, ctx.info);
  const int color = png_get_color_type(ctx.png, ctx.info);
  if (depth != 16 || color != PNG_COLOR_TYPE_GRAY) {
    raise(ErrorCode::parse, "read_depth: " + path.string() +
                                " is not 16-bit single-channel (bit depth " +
                                std::to_string(depth) + ", color type " + std::to_string(color) +
                                ")");
  }

  std::vector<unsigned char> bytes(static_cast<std::size_t>(w) * h * 2);
  std::vector<png_bytep> rows(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = bytes.data() + static_cast<std::size_t>(y) * w * 2;
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);

  MaskedGrid grid(static_cast<int>(w), static_cast<int>(h));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::uint16_t raw =
        static_cast<std::uint16_t>(bytes[2 * i] << 8 | bytes[2 * i + 1]);  // network order
    if (raw != 0) {
      grid.values[i] = raw / 256.0;
      grid.valid[i] = 1;
    }
  }
  return grid;
}

void write_png16_grid(const MaskedGrid& grid, const std::filesystem::path& path) {
  std::vector<unsigned char> bytes(grid.size() * 2);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::uint16_t raw = 0;
    if (grid.valid[i]) {
      const double scaled = std::llround(grid.values[i] * 256.0);
      if (scaled < 1.0 || scaled > 65535.0) {
        raise(ErrorCode::range, "write_depth: depth " + std::to_string(grid.values[i]) +
                                    " m is outside the png16 representable range [1/512, 256)");
      }
      raw = static_cast<std::uint16_t>(scaled);
    }
    bytes[2 * i] = static_cast<unsigned char>(raw >> 8);
    bytes[2 * i + 1] = static_cast<unsigned char>(raw & 0xff);
  }

  FileHandle fh;
  fh.f = std::fopen(path.string().c_str(), "wb");
  if (!fh.f) raise(ErrorCode::io, "write_depth: cannot open " + path.string());

  PngWrite ctx;
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) raise(ErrorCode::io, "write_depth: libpng init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) raise(ErrorCode::io, "write_depth: libpng init failed");

  if (setjmp(png_jmpbuf(ctx.png))) {
    raise(ErrorCode::io, "write_depth: PNG write failed for " + path.string());
  }
  png_init_io(ctx.png, fh.f);
  png_set_compression_level(ctx.png, 6);
  png_set_IHDR(ctx.png, ctx.info, grid.width, grid.height, 16, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);
  std::vector<png_bytep> rows(grid.height);
  for (int y = 0; y < grid.height; ++y) {
    rows[y] = bytes.data() + static_cast<std::size_t>(y) * grid.width * 2;
  }
  png_write_image(ctx.png, rows.data());
  png_write_end(ctx.png, nullptr);
}

}  // namespace

void write_float_map_grid(const MaskedGrid& grid, const std::filesystem::path& path) {
  std::vector<unsigned char> buf;
  buf.reserve(24 + grid.size() * 8);
  buf.insert(buf.end(), kFloatMapMagic, kFloatMapMagic + 8);
  append_u32_le(buf, static_cast<std::uint32_t>(grid.width));
  append_u32_le(buf, static_cast<std::uint32_t>(grid.height));
  append_f64_le(buf, kFloatMapNoData);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    append_f64_le(buf, grid.valid[i] ? grid.values[i] : kFloatMapNoData);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::io, "write_depth: cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out.flush()) raise(ErrorCode::io, "write_depth: write failed for " + path.string());
}

MaskedGrid read_float_map_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::io, "read_depth: cannot open " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (buf.size() < 8 || std::memcmp(buf.data(), kFloatMapMagic, 8) != 0) {
    raise(ErrorCode::magic_mismatch, "read_depth: " + path.string() + " is not a float-map file");
  }
  if (buf.size() < 24) raise(ErrorCode::truncated_file, "read_depth: truncated header in " + path.string());
  const std::uint32_t w = read_u32_le(buf.data() + 8);
  const std::uint32_t h = read_u32_le(buf.data() + 12);
  if (w == 0 || h == 0 || w > (1u << 20) || h > (1u << 20)) {
    raise(ErrorCode::parse, "read_depth: implausible dimensions in " + path.string());
  }
  const double nodata = read_f64_le(buf.data() + 16);
  const std::size_t need = 24 + static_cast<std::size_t>(w) * h * 8;
  if (buf.size() < need) {
    raise(ErrorCode::truncated_file, "read_depth: truncated payload in " + path.string());
  }

  std::uint64_t nodata_bits;
  std::memcpy(&nodata_bits, &nodata, sizeof(nodata_bits));

  MaskedGrid grid(static_cast<int>(w), static_cast<int>(h));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = read_f64_le(buf.data() + 24 + i * 8);
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    if (bits == nodata_bits) continue;  // sentinel (bitwise, so a NaN sentinel works too)
    grid.values[i] = v;
    grid.valid[i] = 1;
  }
  return grid;
}

namespace {

// mono_space transform between stored values and metric depth
void to_depth_space(MaskedGrid& grid, MonoSpace space) {
  if (space == MonoSpace::depth) return;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.valid[i]) continue;
    if (grid.values[i] > 0.0) {
      grid.values[i] = 1.0 / grid.values[i];
    } else {
      grid.values[i] = 0.0;
      grid.valid[i] = 0;
    }
  }
}

MaskedGrid from_depth_space(const DepthMap& map, MonoSpace space) {
  MaskedGrid grid = map.grid();
  if (space == MonoSpace::inverse_depth) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid.valid[i]) grid.values[i] = 1.0 / grid.values[i];
    }
  }
  return grid;
}

}  // namespace

DepthMap read_depth(const std::filesystem::path& path, const DepthCodec& codec) {
  MaskedGrid grid = codec.kind == DepthFileKind::png16_kitti ? read_png16_grid(path)
                                                             : read_float_map_grid(path);
  to_depth_space(grid, codec.mono_space);
  if (codec.mono_space == MonoSpace::depth) {
    // stored depths must be usable as-is; drop non-positive or non-finite ones
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid.valid[i] && (!(grid.values[i] > 0.0) || !std::isfinite(grid.values[i]))) {
        grid.values[i] = 0.0;
        grid.valid[i] = 0;
      }
    }
  }
  bool any_valid = false;
  for (auto v : grid.valid) any_valid |= v != 0;
  if (!any_valid) {
    raise(ErrorCode::all_invalid, "read_depth: " + path.string() + " holds no valid pixel");
  }
  return DepthMap::from_grid(std::move(grid));
}

void write_depth(const DepthMap& map, const std::filesystem::path& path, const DepthCodec& codec) {
  const MaskedGrid grid = from_depth_space(map, codec.mono_space);
  if (codec.kind == DepthFileKind::png16_kitti) {
    write_png16_grid(grid, path);
  } else {
    write_float_map_grid(grid, path);
  }
}

}  // namespace depthkit
