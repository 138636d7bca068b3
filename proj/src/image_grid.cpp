#include "umse/image_grid.hpp"

#include <cmath>

#include "umse/errors.hpp"

namespace umse {

ImageGrid::ImageGrid(std::size_t width, std::size_t height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width_ == 0 || height_ == 0) {
    throw InvalidArgument("image dimensions must be positive, got " + shape_string());
  }
  if (data_.size() != width_ * height_) {
    throw InvalidArgument("image " + shape_string() + " needs " + std::to_string(width_ * height_) +
                          " samples, got " + std::to_string(data_.size()));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw InvalidArgument("non-finite sample at index " + std::to_string(i));
    }
  }
}

ImageGrid::ImageGrid(std::size_t width, std::size_t height, double fill)
    : ImageGrid(width, height, std::vector<double>(width * height, fill)) {}

std::string ImageGrid::shape_string() const {
  return std::to_string(width_) + "x" + std::to_string(height_);
}

void require_same_shape(const ImageGrid& lhs, const ImageGrid& rhs, const char* what) {
  if (!lhs.same_shape(rhs)) {
    throw ShapeError(std::string(what) + ": shape mismatch " + lhs.shape_string() + " vs " +
                     rhs.shape_string());
  }
}

ReferenceSet::ReferenceSet(ImageGrid y, ImageGrid a, ImageGrid b, ImageGrid c)
    : input_y(std::move(y)), ref_a(std::move(a)), ref_b(std::move(b)), ref_c(std::move(c)) {
  require_same_shape(input_y, ref_a, "reference set (y, a)");
  require_same_shape(input_y, ref_b, "reference set (y, b)");
  require_same_shape(input_y, ref_c, "reference set (y, c)");
}

}  // namespace umse
