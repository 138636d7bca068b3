#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "umse/image_grid.hpp"

namespace umse {

// Builtin clean images spanning the smoothness axis.
ImageGrid constant_pattern(std::size_t width, std::size_t height, double value);
// Linear ramp from `low` at the top-left corner to `high` at the bottom-right.
ImageGrid gradient_pattern(std::size_t width, std::size_t height, double low, double high);
// Pixel (r, c) is `low` when r + c is even and `high` otherwise.
ImageGrid checkerboard_pattern(std::size_t width, std::size_t height, double low, double high);
// Seeded band-limited random field: white Gaussian noise smoothed with a
// Gaussian of `correlation_sigma` pixels, then rescaled to the requested
// sample mean and standard deviation.
ImageGrid texture_pattern(std::size_t width, std::size_t height, double correlation_sigma,
                          double mean, double stddev, std::uint64_t seed);

// Builds a pattern from an id string:
//   constant[:value]              default 128
//   gradient[:low:high]           default 0:255
//   checkerboard[:low:high]       default 0:255
//   texture[:corr[:mean:stddev]]  default 1.5:128:40
ImageGrid make_pattern(std::string_view id, std::size_t width, std::size_t height,
                       std::uint64_t seed);

}  // namespace umse
