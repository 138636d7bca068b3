#include "umse/raster_io.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <limits>
#include <vector>

#include "umse/errors.hpp"

namespace umse {

namespace {

constexpr std::string_view kF32Magic = "UMF1";

void put_u32_le(std::string& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<char>((v >> s) & 0xFF));
}

std::uint32_t get_u32_le(std::string_view bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + k])) << (8 * k);
  }
  return v;
}

std::string encode_f32(const ImageGrid& grid) {
  if (grid.width() > std::numeric_limits<std::uint32_t>::max() ||
      grid.height() > std::numeric_limits<std::uint32_t>::max()) {
    throw FormatError("image " + grid.shape_string() + " too large for F32 raster");
  }
  std::string out;
  out.reserve(kF32Magic.size() + 8 + 4 * grid.size());
  out.append(kF32Magic);
  put_u32_le(out, static_cast<std::uint32_t>(grid.width()));
  put_u32_le(out, static_cast<std::uint32_t>(grid.height()));
  for (double v : grid.pixels()) {
    const auto f = static_cast<float>(v);
    if (!std::isfinite(f)) throw FormatError("value " + std::to_string(v) + " overflows float32");
    put_u32_le(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

std::string encode_pgm(const ImageGrid& grid, unsigned maxval) {
  const auto px = grid.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const double v = px[i];
    if (v != std::floor(v) || v < 0.0 || v > maxval) {
      throw FormatError("sample " + std::to_string(v) + " at index " + std::to_string(i) +
                        " is not an integer in [0, " + std::to_string(maxval) + "]");
    }
  }
  std::string out = "P5\n" + std::to_string(grid.width()) + " " + std::to_string(grid.height()) +
                    "\n" + std::to_string(maxval) + "\n";
  const bool wide = maxval > 255;
  out.reserve(out.size() + px.size() * (wide ? 2 : 1));
  for (double v : px) {
    const auto s = static_cast<unsigned>(v);
    if (wide) out.push_back(static_cast<char>(s >> 8));
    out.push_back(static_cast<char>(s & 0xFF));
  }
  return out;
}

ImageGrid decode_f32(std::string_view bytes) {
  if (bytes.size() < 12) throw FormatError("truncated F32 raster header");
  const std::uint32_t w = get_u32_le(bytes, 4);
  const std::uint32_t h = get_u32_le(bytes, 8);
  if (w == 0 || h == 0) throw FormatError("F32 raster has a zero dimension");
  const std::uint64_t count = std::uint64_t{w} * h;
  if (bytes.size() - 12 != 4 * count) {
    throw FormatError("F32 raster payload is " + std::to_string(bytes.size() - 12) +
                      " bytes, expected " + std::to_string(4 * count));
  }
  std::vector<double> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    const float f = std::bit_cast<float>(get_u32_le(bytes, 12 + 4 * i));
    if (!std::isfinite(f)) throw FormatError("non-finite sample at index " + std::to_string(i));
    data[i] = f;
  }
  return ImageGrid(w, h, std::move(data));
}

// Reads one whitespace-delimited ASCII integer from a PGM header, skipping
// '#' comments.
std::uint64_t pgm_header_int(std::string_view bytes, std::size_t& at) {
  while (at < bytes.size()) {
    if (bytes[at] == '#') {
      while (at < bytes.size() && bytes[at] != '\n') ++at;
    } else if (std::isspace(static_cast<unsigned char>(bytes[at]))) {
      ++at;
    } else {
      break;
    }
  }
  if (at >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[at]))) {
    throw FormatError("corrupt PGM header");
  }
  std::uint64_t v = 0;
  while (at < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[at]))) {
    v = v * 10 + static_cast<unsigned>(bytes[at] - '0');
    if (v > (1ULL << 32)) throw FormatError("PGM header value out of range");
    ++at;
  }
  return v;
}

ImageGrid decode_pgm(std::string_view bytes) {
  std::size_t at = 2;
  const auto w = pgm_header_int(bytes, at);
  const auto h = pgm_header_int(bytes, at);
  const auto maxval = pgm_header_int(bytes, at);
  if (w == 0 || h == 0) throw FormatError("PGM has a zero dimension");
  if (maxval != 255 && maxval != 65535) {
    throw FormatError("unsupported PGM maxval " + std::to_string(maxval) + " (need 255 or 65535)");
  }
  if (at >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[at]))) {
    throw FormatError("corrupt PGM header");
  }
  ++at;
  const std::size_t bps = maxval > 255 ? 2 : 1;
  const std::uint64_t count = w * h;
  if (bytes.size() - at < bps * count) throw FormatError("truncated PGM payload");
  std::vector<double> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto hi = static_cast<unsigned char>(bytes[at + bps * i]);
    data[i] = bps == 2 ? hi * 256.0 + static_cast<unsigned char>(bytes[at + bps * i + 1]) : hi;
  }
  return ImageGrid(w, h, std::move(data));
}

}  // namespace

RasterFormat parse_raster_format(std::string_view name) {
  if (name == "pgm8") return RasterFormat::Pgm8;
  if (name == "pgm16") return RasterFormat::Pgm16;
  if (name == "f32") return RasterFormat::F32;
  throw InvalidArgument("unknown raster format '" + std::string(name) +
                        "' (expected pgm8, pgm16 or f32)");
}

const char* to_string(RasterFormat format) noexcept {
  switch (format) {
    case RasterFormat::Pgm8: return "pgm8";
    case RasterFormat::Pgm16: return "pgm16";
    case RasterFormat::F32: return "f32";
  }
  return "unknown";
}

std::string encode_image(const ImageGrid& grid, RasterFormat format) {
  switch (format) {
    case RasterFormat::Pgm8: return encode_pgm(grid, 255);
    case RasterFormat::Pgm16: return encode_pgm(grid, 65535);
    case RasterFormat::F32: return encode_f32(grid);
  }
  throw InvalidArgument("unknown raster format");
}

ImageGrid decode_image(std::string_view bytes) {
  if (bytes.starts_with(kF32Magic)) return decode_f32(bytes);
  if (bytes.starts_with("P5")) return decode_pgm(bytes);
  throw FormatError("unrecognised raster (expected UMF1 or P5 magic)");
}

ImageGrid read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  try {
    return decode_image(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_image(const ImageGrid& grid, const std::filesystem::path& path, RasterFormat format) {
  const std::string bytes = encode_image(grid, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to '" + path.string() + "'");
}

}  // namespace umse
