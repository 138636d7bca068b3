#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace umse {

// Row-major 2D raster of finite doubles. Clean signals, noisy frames,
// references and denoiser outputs all travel as ImageGrid.
class ImageGrid {
 public:
  // Throws InvalidArgument on zero dimensions, a size mismatch, or a
  // non-finite sample.
  ImageGrid(std::size_t width, std::size_t height, std::vector<double> data);
  ImageGrid(std::size_t width, std::size_t height, double fill = 0.0);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const double> pixels() const noexcept { return data_; }

  double operator()(std::size_t row, std::size_t col) const noexcept {
    return data_[row * width_ + col];
  }

  bool same_shape(const ImageGrid& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  std::string shape_string() const;

  bool operator==(const ImageGrid&) const = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<double> data_;
};

// Throws ShapeError naming `what` when the two grids differ in shape.
void require_same_shape(const ImageGrid& lhs, const ImageGrid& rhs, const char* what);

// Noisy input y together with three noisy references a, b, c of the same
// underlying clean signal. All four share one shape.
struct ReferenceSet {
  ImageGrid input_y;
  ImageGrid ref_a;
  ImageGrid ref_b;
  ImageGrid ref_c;

  ReferenceSet(ImageGrid y, ImageGrid a, ImageGrid b, ImageGrid c);

  std::size_t width() const noexcept { return input_y.width(); }
  std::size_t height() const noexcept { return input_y.height(); }
  std::size_t size() const noexcept { return input_y.size(); }
};

}  // namespace umse
