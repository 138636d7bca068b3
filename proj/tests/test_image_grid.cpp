#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "umse/errors.hpp"
#include "umse/image_grid.hpp"

namespace umse {
namespace {

TEST(ImageGrid, StoresRowMajor) {
  const ImageGrid g(3, 2, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(g.width(), 3u);
  EXPECT_EQ(g.height(), 2u);
  EXPECT_EQ(g(1, 0), 4.0);
  EXPECT_EQ(g(0, 2), 3.0);
}

TEST(ImageGrid, RejectsLengthMismatch) {
  EXPECT_THROW(ImageGrid(2, 2, std::vector<double>{1, 2, 3}), InvalidArgument);
}

TEST(ImageGrid, RejectsZeroDimensions) {
  EXPECT_THROW(ImageGrid(0, 3, std::vector<double>{}), InvalidArgument);
}

TEST(ImageGrid, RejectsNonFinite) {
  EXPECT_THROW(ImageGrid(2, 1, {1.0, std::nan("")}), InvalidArgument);
  EXPECT_THROW(ImageGrid(1, 1, {std::numeric_limits<double>::infinity()}), InvalidArgument);
}

TEST(ReferenceSet, RequiresMatchingShapes) {
  const ImageGrid a(2, 2, 0.0);
  const ImageGrid b(4, 1, 0.0);
  EXPECT_THROW(ReferenceSet(a, a, a, b), ShapeError);
  EXPECT_NO_THROW(ReferenceSet(a, a, a, a));
}

}  // namespace
}  // namespace umse
