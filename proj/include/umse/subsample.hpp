#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "umse/image_grid.hpp"

namespace umse {

enum class SubsampleMode { Deterministic, Randomized };

// Sub-image roles, in the order the assignment record stores them.
enum class SubRole : std::size_t { Y = 0, A = 1, B = 2, C = 3 };

// Positions inside a 2x2 block, numbered with 1-based (row, col) parity:
//   1 = (odd row, odd col)    top-left
//   2 = (even row, odd col)   bottom-left
//   3 = (odd row, even col)   top-right
//   4 = (even row, even col)  bottom-right
// Deterministic mode is Y<-1, A<-2, B<-3, C<-4.
struct BlockAssignment {
  std::array<std::uint8_t, 4> position{1, 2, 3, 4};  // indexed by SubRole

  std::uint8_t operator[](SubRole role) const noexcept {
    return position[static_cast<std::size_t>(role)];
  }
  bool operator==(const BlockAssignment&) const = default;
};

// Row offset and column offset of a block position (1..4) inside its block.
constexpr std::size_t block_row_offset(std::uint8_t position) noexcept {
  return (position == 2 || position == 4) ? 1 : 0;
}
constexpr std::size_t block_col_offset(std::uint8_t position) noexcept {
  return (position == 3 || position == 4) ? 1 : 0;
}

struct SubsampleOutput {
  ImageGrid sub_y;
  ImageGrid sub_a;
  ImageGrid sub_b;
  ImageGrid sub_c;
  // One entry per block, row-major over the N x N block grid.
  std::vector<BlockAssignment> assignment;

  const ImageGrid& sub(SubRole role) const noexcept;
  ReferenceSet as_reference_set() const;
};

// Splits a 2N x 2N (more generally 2W x 2H) image into four half-resolution
// sub-images, one pixel per 2x2 block each. Randomized mode draws an
// independent uniform permutation of the four block positions per block;
// Deterministic mode ignores the seed. Throws InvalidArgument on odd
// dimensions (crop with crop_to_even first).
SubsampleOutput spatial_subsample(const ImageGrid& image, SubsampleMode mode, std::uint64_t seed);

// Drops the last row and/or column when odd. Throws InvalidArgument on
// images smaller than 2x2.
ImageGrid crop_to_even(const ImageGrid& image);

// Takes, from every block of `image`, the pixel that `assignment` sent to
// `role`. Used to pair a full-resolution clean or denoised image with the
// sub-images of a decomposition.
ImageGrid gather_by_assignment(const ImageGrid& image, std::span<const BlockAssignment> assignment,
                               SubRole role);

}  // namespace umse
