#include "umse/subsample.hpp"

#include <algorithm>
#include <string>

#include "umse/errors.hpp"
#include "umse/random.hpp"

namespace umse {

namespace {

void require_even(const ImageGrid& image) {
  if (image.width() % 2 != 0 || image.height() % 2 != 0) {
    throw InvalidArgument("spatial subsampling needs even dimensions, got " + image.shape_string() +
                          " (crop_to_even first)");
  }
}

std::vector<BlockAssignment> draw_assignment(std::size_t blocks_wide, std::size_t blocks_high,
                                             SubsampleMode mode, std::uint64_t seed) {
  std::vector<BlockAssignment> assignment(blocks_wide * blocks_high);
  if (mode == SubsampleMode::Deterministic) return assignment;
  // One engine per block row keeps the draw independent of the thread count.
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t br = 0; br < static_cast<std::ptrdiff_t>(blocks_high); ++br) {
    Engine rng = make_engine(seed, static_cast<std::uint64_t>(br));
    for (std::size_t bc = 0; bc < blocks_wide; ++bc) {
      auto& p = assignment[static_cast<std::size_t>(br) * blocks_wide + bc].position;
      std::shuffle(p.begin(), p.end(), rng);
    }
  }
  return assignment;
}

}  // namespace

const ImageGrid& SubsampleOutput::sub(SubRole role) const noexcept {
  switch (role) {
    case SubRole::Y: return sub_y;
    case SubRole::A: return sub_a;
    case SubRole::B: return sub_b;
    case SubRole::C: return sub_c;
  }
  return sub_y;
}

ReferenceSet SubsampleOutput::as_reference_set() const {
  return ReferenceSet(sub_y, sub_a, sub_b, sub_c);
}

ImageGrid gather_by_assignment(const ImageGrid& image, std::span<const BlockAssignment> assignment,
                               SubRole role) {
  require_even(image);
  const std::size_t bw = image.width() / 2;
  const std::size_t bh = image.height() / 2;
  if (assignment.size() != bw * bh) {
    throw ShapeError("assignment has " + std::to_string(assignment.size()) + " blocks, image " +
                     image.shape_string() + " has " + std::to_string(bw * bh));
  }
  std::vector<double> out(bw * bh);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t br = 0; br < static_cast<std::ptrdiff_t>(bh); ++br) {
    const auto r = static_cast<std::size_t>(br);
    for (std::size_t bc = 0; bc < bw; ++bc) {
      const std::uint8_t pos = assignment[r * bw + bc][role];
      out[r * bw + bc] = image(2 * r + block_row_offset(pos), 2 * bc + block_col_offset(pos));
    }
  }
  return ImageGrid(bw, bh, std::move(out));
}

SubsampleOutput spatial_subsample(const ImageGrid& image, SubsampleMode mode, std::uint64_t seed) {
  require_even(image);
  const std::size_t bw = image.width() / 2;
  const std::size_t bh = image.height() / 2;
  auto assignment = draw_assignment(bw, bh, mode, seed);
  auto y = gather_by_assignment(image, assignment, SubRole::Y);
  auto a = gather_by_assignment(image, assignment, SubRole::A);
  auto b = gather_by_assignment(image, assignment, SubRole::B);
  auto c = gather_by_assignment(image, assignment, SubRole::C);
  return SubsampleOutput{std::move(y), std::move(a), std::move(b), std::move(c),
                         std::move(assignment)};
}

ImageGrid crop_to_even(const ImageGrid& image) {
  if (image.width() < 2 || image.height() < 2) {
    throw InvalidArgument("cannot crop " + image.shape_string() + " to even dimensions");
  }
  const std::size_t w = image.width() & ~std::size_t{1};
  const std::size_t h = image.height() & ~std::size_t{1};
  if (w == image.width() && h == image.height()) return image;
  std::vector<double> out;
  out.reserve(w * h);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) out.push_back(image(r, c));
  }
  return ImageGrid(w, h, std::move(out));
}

}  // namespace umse
