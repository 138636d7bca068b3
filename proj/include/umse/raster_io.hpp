#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "umse/image_grid.hpp"

namespace umse {

// Supported on-disk rasters.
//   Pgm8   binary "P5", maxval 255
//   Pgm16  binary "P5", maxval 65535, big-endian samples
//   F32    "UMF1", u32 LE width, u32 LE height, width*height f32 LE, row-major
// PGM samples are integer intensities used as-is. F32 stores single precision:
// values exactly representable as float round-trip bit for bit.
enum class RasterFormat { Pgm8, Pgm16, F32 };

// "pgm8", "pgm16" or "f32".
RasterFormat parse_raster_format(std::string_view name);
const char* to_string(RasterFormat format) noexcept;

// Throws FormatError when the grid cannot be stored losslessly in `format`
// (non-integer or out-of-range PGM samples, values overflowing float).
std::string encode_image(const ImageGrid& grid, RasterFormat format);
// Format is sniffed from the magic bytes. Throws FormatError on a corrupt
// header, unsupported maxval, or truncated payload.
ImageGrid decode_image(std::string_view bytes);

ImageGrid read_image(const std::filesystem::path& path);
void write_image(const ImageGrid& grid, const std::filesystem::path& path, RasterFormat format);

}  // namespace umse
