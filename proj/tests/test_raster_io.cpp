#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "umse/errors.hpp"
#include "umse/raster_io.hpp"

namespace umse {
namespace {

TEST(RasterIo, F32RoundTripIsExact) {
  const ImageGrid g(2, 1, {1.5, -2.25});
  EXPECT_EQ(decode_image(encode_image(g, RasterFormat::F32)), g);
}

TEST(RasterIo, F32RoundTripPropertyForFloatValues) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<float> d(-1e6f, 1e6f);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t w = 1 + rng() % 40, h = 1 + rng() % 40;
    std::vector<double> v(w * h);
    for (double& x : v) x = d(rng);
    const ImageGrid g(w, h, v);
    EXPECT_EQ(decode_image(encode_image(g, RasterFormat::F32)), g);
  }
}

TEST(RasterIo, F32LayoutIsLittleEndianWithMagic) {
  const std::string bytes = encode_image(ImageGrid(2, 2, {1, 2, 3, 4}), RasterFormat::F32);
  EXPECT_EQ(bytes.size(), 28u);
  EXPECT_EQ(bytes.substr(0, 4), "UMF1");
  EXPECT_EQ(bytes.substr(4, 4), std::string("\x02\x00\x00\x00", 4));
  EXPECT_EQ(bytes.substr(8, 4), std::string("\x02\x00\x00\x00", 4));
  // 1.0f = 0x3F800000
  EXPECT_EQ(bytes.substr(12, 4), std::string("\x00\x00\x80\x3F", 4));
}

TEST(RasterIo, PgmRoundTripsIntegers) {
  const ImageGrid g8(3, 2, {0, 1, 255, 128, 7, 9});
  const std::string b8 = encode_image(g8, RasterFormat::Pgm8);
  EXPECT_TRUE(b8.starts_with("P5\n3 2\n255\n"));
  EXPECT_EQ(decode_image(b8), g8);

  const ImageGrid g16(2, 1, {258, 65535});
  const std::string b16 = encode_image(g16, RasterFormat::Pgm16);
  // Big-endian samples: 258 = 0x0102.
  EXPECT_EQ(b16.substr(b16.size() - 4), std::string("\x01\x02\xFF\xFF", 4));
  EXPECT_EQ(decode_image(b16), g16);
}

TEST(RasterIo, PgmRejectsValuesItCannotStore) {
  EXPECT_THROW(encode_image(ImageGrid(1, 1, {256.0}), RasterFormat::Pgm8), FormatError);
  EXPECT_THROW(encode_image(ImageGrid(1, 1, {-1.0}), RasterFormat::Pgm16), FormatError);
  EXPECT_THROW(encode_image(ImageGrid(1, 1, {1.5}), RasterFormat::Pgm8), FormatError);
}

TEST(RasterIo, F32RejectsFloatOverflow) {
  EXPECT_THROW(encode_image(ImageGrid(1, 1, {1e300}), RasterFormat::F32), FormatError);
}

TEST(RasterIo, PgmHeaderCommentsAccepted) {
  const std::string bytes = std::string("P5\n# made by hand\n2 1\n# another\n255\n") + "\x05\x06";
  EXPECT_EQ(decode_image(bytes), ImageGrid(2, 1, {5, 6}));
}

TEST(RasterIo, CorruptInputsRejected) {
  EXPECT_THROW(decode_image("P6\n1 1\n255\n\x00"), FormatError);
  EXPECT_THROW(decode_image("P5\nx 1\n255\n"), FormatError);
  EXPECT_THROW(decode_image(std::string("P5\n2 2\n255\n\x01\x02", 13)), FormatError);
  EXPECT_THROW(decode_image(std::string("P5\n1 1\n1023\n\x01\x02", 14)), FormatError);
  EXPECT_THROW(decode_image(std::string("UMF1\x01\x00\x00\x00", 8)), FormatError);
  std::string truncated = encode_image(ImageGrid(2, 2, 1.0), RasterFormat::F32);
  truncated.pop_back();
  EXPECT_THROW(decode_image(truncated), FormatError);
  std::string nan_payload = encode_image(ImageGrid(1, 1, 1.0), RasterFormat::F32);
  nan_payload.replace(12, 4, std::string("\x00\x00\xC0\x7F", 4));
  EXPECT_THROW(decode_image(nan_payload), FormatError);
}

TEST(RasterIo, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "umse_raster_io_test";
  std::filesystem::create_directories(dir);
  const ImageGrid g(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  write_image(g, dir / "g.pgm", RasterFormat::Pgm8);
  write_image(g, dir / "g.umf", RasterFormat::F32);
  EXPECT_EQ(read_image(dir / "g.pgm"), g);
  EXPECT_EQ(read_image(dir / "g.umf"), g);
  EXPECT_THROW(read_image(dir / "missing.umf"), IoError);
  std::filesystem::remove_all(dir);
}

TEST(RasterIo, FormatNames) {
  EXPECT_EQ(parse_raster_format("pgm16"), RasterFormat::Pgm16);
  EXPECT_STREQ(to_string(RasterFormat::F32), "f32");
  EXPECT_THROW(parse_raster_format("png"), InvalidArgument);
}

}  // namespace
}  // namespace umse
