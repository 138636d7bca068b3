#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "test_helpers.hpp"
#include "umse/errors.hpp"
#include "umse/metrics.hpp"

namespace umse {
namespace {

using testing::rel_diff;
using testing::row;

constexpr double kExact = 1e-12;

ReferenceSet worked_refs() {
  // a=[4,0], b=[2,2], c=[0,0]; y is unused by the metric.
  return ReferenceSet(row({0, 0}), row({4, 0}), row({2, 2}), row({0, 0}));
}

TEST(Mse, IdentityIsZero) { EXPECT_EQ(mse(row({5, 5}), row({5, 5})), 0.0); }

TEST(Mse, WorkedExample) { EXPECT_NEAR(mse(row({1, 3}), row({2, 1})), 2.5, kExact); }

TEST(Mse, ConstantShiftGivesSquare) {
  std::mt19937_64 rng(1);
  const ImageGrid x = testing::random_grid(rng, 17, 9);
  std::vector<double> shifted(x.pixels().begin(), x.pixels().end());
  for (double& v : shifted) v += 3.5;
  EXPECT_LT(rel_diff(mse(x, ImageGrid(17, 9, shifted)), 12.25), kExact);
}

TEST(Mse, RejectsShapeMismatch) {
  EXPECT_THROW(mse(ImageGrid(2, 2, 0.0), ImageGrid(4, 1, 0.0)), ShapeError);
}

TEST(SePerPixel, WorkedExamples) {
  EXPECT_EQ(se_per_pixel(row({1, 3}), row({2, 1})), (std::vector<double>{1, 4}));
  EXPECT_EQ(se_per_pixel(row({0}), row({3})), (std::vector<double>{9}));
  EXPECT_EQ(se_per_pixel(row({7, -2}), row({7, -2})), (std::vector<double>{0, 0}));
  EXPECT_THROW(se_per_pixel(row({1}), row({1, 2})), ShapeError);
}

TEST(Umse, AllIdenticalIsZero) {
  const ImageGrid f = row({3, -1, 8});
  EXPECT_EQ(umse(ReferenceSet(f, f, f, f), f), 0.0);
}

TEST(Umse, EqualBAndCGivesPlainMeanSquare) {
  const ImageGrid f = row({1, 2, 3});
  const ImageGrid a = row({2, 0, 7});
  const ImageGrid bc = row({9, 9, -4});
  // (1 + 4 + 16) / 3
  EXPECT_LT(rel_diff(umse(ReferenceSet(f, a, bc, bc), f), 7.0), kExact);
}

TEST(Umse, WorkedExample) { EXPECT_NEAR(umse(worked_refs(), row({1, 1})), 3.0, kExact); }

TEST(Umse, RejectsShapeMismatch) {
  EXPECT_THROW(umse(worked_refs(), row({1, 1, 1})), ShapeError);
}

TEST(UsePerPixel, WorkedExamples) {
  EXPECT_EQ(use_per_pixel(worked_refs(), row({1, 1})), (std::vector<double>{7, -1}));
  const ReferenceSet single(row({0}), row({0}), row({0}), row({2}));
  EXPECT_EQ(use_per_pixel(single, row({0})), (std::vector<double>{-2}));
  const ImageGrid f = row({4, 5});
  EXPECT_EQ(use_per_pixel(ReferenceSet(f, f, f, f), f), (std::vector<double>{0, 0}));
}

TEST(NoiseVarianceEstimate, WorkedExamples) {
  EXPECT_EQ(noise_variance_estimate(row({3, 4}), row({3, 4})), 0.0);
  EXPECT_NEAR(noise_variance_estimate(row({2, 2}), row({0, 0})), 2.0, kExact);
  EXPECT_THROW(noise_variance_estimate(row({1}), row({1, 1})), ShapeError);
}

TEST(Psnr, WorkedExamples) {
  EXPECT_NEAR(*psnr(255.0 * 255.0, 255.0), 0.0, kExact);
  EXPECT_NEAR(*psnr(255.0 * 255.0 / 100.0, 255.0), 20.0, 1e-12);
  EXPECT_NEAR(*psnr(65.025, 255.0), 30.0, 30.0 * kExact);
}

TEST(Psnr, UndefinedForNonPositiveMse) {
  EXPECT_FALSE(psnr(0.0, 255.0).has_value());
  EXPECT_FALSE(psnr(-1.0, 255.0).has_value());
  EXPECT_THROW(psnr(1.0, 0.0), InvalidArgument);
}

TEST(Upsnr, DegenerateZeroUmseIsInvalid) {
  const ImageGrid f = row({1, 2});
  const MetricReport r = upsnr(ReferenceSet(f, f, f, f), f, 255.0);
  EXPECT_FALSE(r.valid);
  EXPECT_FALSE(r.value.has_value());
  EXPECT_EQ(r.kind, MetricKind::Upsnr);
}

TEST(Upsnr, UmseEqualToPeakSquaredIsZeroDb) {
  // b = c, so uMSE = mean (a - f)^2 = 4 = peak^2 for peak 2.
  const ImageGrid f = row({0, 0});
  const MetricReport r = upsnr(ReferenceSet(f, row({2, -2}), f, f), f, 2.0);
  ASSERT_TRUE(r.valid);
  EXPECT_NEAR(*r.value, 0.0, kExact);
}

TEST(Upsnr, WorkedExample) {
  const MetricReport r = upsnr(worked_refs(), row({1, 1}), 255.0);
  ASSERT_TRUE(r.valid);
  EXPECT_LT(rel_diff(*r.value, 43.35959106148248), kExact);
  EXPECT_EQ(r.peak, 255.0);
  EXPECT_EQ(r.n, 2u);
}

TEST(Upsnr, NegativeUmseIsInvalidNotClamped) {
  // a = f, b and c differ: uMSE = -2.
  const ReferenceSet refs(row({0}), row({0}), row({0}), row({2}));
  EXPECT_FALSE(upsnr(refs, row({0}), 255.0).valid);
  EXPECT_THROW(upsnr(refs, row({0}), -1.0), InvalidArgument);
}

TEST(MseAvg, WorkedExamples) {
  const std::vector<ImageGrid> refs{row({2}), row({4})};
  EXPECT_NEAR(mse_avg(refs, row({0})), 9.0, kExact);
  const ImageGrid f = row({1, -6, 2});
  const std::vector<ImageGrid> copies(5, f);
  EXPECT_EQ(mse_avg(copies, f), 0.0);
}

TEST(MseAvg, Errors) {
  EXPECT_THROW(mse_avg(std::vector<ImageGrid>{}, row({1})), InvalidArgument);
  const std::vector<ImageGrid> refs{row({1, 2})};
  EXPECT_THROW(mse_avg(refs, row({1})), ShapeError);
}

// Randomized property checks over many small grids.
class MetricProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{20240611};

  ReferenceSet random_refs(std::size_t w, std::size_t h) {
    return ReferenceSet(testing::random_grid(rng, w, h), testing::random_grid(rng, w, h),
                        testing::random_grid(rng, w, h), testing::random_grid(rng, w, h));
  }
};

TEST_F(MetricProperties, UmseIsMeanOfPerPixelTerms) {
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t w = 1 + rng() % 90, h = 1 + rng() % 90;
    const ReferenceSet refs = random_refs(w, h);
    const ImageGrid f = testing::random_grid(rng, w, h);
    EXPECT_EQ(umse(refs, f), mean(use_per_pixel(refs, f)));
    EXPECT_EQ(mse(refs.ref_a, f), mean(se_per_pixel(refs.ref_a, f)));
  }
}

TEST_F(MetricProperties, UmseDecomposesIntoMeanSquareMinusCorrection) {
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t w = 1 + rng() % 60, h = 1 + rng() % 60;
    const ReferenceSet refs = random_refs(w, h);
    const ImageGrid f = testing::random_grid(rng, w, h);
    const double lhs = umse(refs, f);
    const double rhs = mse(refs.ref_a, f) - noise_variance_estimate(refs.ref_b, refs.ref_c);
    // Relative to the size of the terms being subtracted.
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * mse(refs.ref_a, f));
  }
}

TEST_F(MetricProperties, UmseSymmetricInBAndC) {
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t w = 1 + rng() % 60, h = 1 + rng() % 60;
    const ReferenceSet refs = random_refs(w, h);
    const ReferenceSet swapped(refs.input_y, refs.ref_a, refs.ref_c, refs.ref_b);
    const ImageGrid f = testing::random_grid(rng, w, h);
    EXPECT_EQ(umse(refs, f), umse(swapped, f));
  }
}

TEST_F(MetricProperties, MseInvariantUnderJointPermutation) {
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 500;
    const ImageGrid x = testing::random_grid(rng, n, 1);
    const ImageGrid f = testing::random_grid(rng, n, 1);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> px(n), pf(n);
    for (std::size_t i = 0; i < n; ++i) {
      px[i] = x.pixels()[perm[i]];
      pf[i] = f.pixels()[perm[i]];
    }
    EXPECT_LT(rel_diff(mse(x, f), mse(row(px), row(pf))), kExact);
  }
}

TEST_F(MetricProperties, UpsnrStrictlyDecreasingInUmse) {
  std::uniform_real_distribution<double> u(1e-6, 1e6);
  for (int trial = 0; trial < 1000; ++trial) {
    double lo = u(rng), hi = u(rng);
    if (lo == hi) continue;
    if (lo > hi) std::swap(lo, hi);
    EXPECT_GT(*psnr(lo, 255.0), *psnr(hi, 255.0));
  }
}

TEST(EvaluateDataset, PoolsPixelsAcrossImages) {
  const ReferenceSet r1 = worked_refs();                                  // uMSE 3, n 2
  const ReferenceSet r2(row({0}), row({0}), row({0}), row({0}));           // uMSE 1, n 1
  const std::vector<ReferenceSet> refs{r1, r2};
  const std::vector<ImageGrid> den{row({1, 1}), row({1})};
  const DatasetEvaluation ev = evaluate_dataset(refs, den, 255.0);
  ASSERT_EQ(ev.per_image_umse.size(), 2u);
  EXPECT_NEAR(*ev.per_image_umse[0].value, 3.0, kExact);
  EXPECT_NEAR(*ev.per_image_umse[1].value, 1.0, kExact);
  // (7 - 1 + 1) / 3
  EXPECT_NEAR(*ev.pooled_umse.value, 7.0 / 3.0, kExact);
  EXPECT_EQ(ev.pooled_umse.n, 3u);
  EXPECT_EQ(ev.pooled_use, (std::vector<double>{7, -1, 1}));
  ASSERT_TRUE(ev.mean_upsnr_db.has_value());
  EXPECT_NEAR(*ev.mean_upsnr_db, (*psnr(3.0, 255.0) + *psnr(1.0, 255.0)) / 2.0, 1e-12);
}

TEST(EvaluateDataset, MeanDbAbsentWhenAnyImageUndefined) {
  const ImageGrid f = row({1});
  const std::vector<ReferenceSet> refs{ReferenceSet(f, f, f, f), worked_refs()};
  const std::vector<ImageGrid> den{f, row({1, 1})};
  const DatasetEvaluation ev = evaluate_dataset(refs, den, 255.0);
  EXPECT_FALSE(ev.mean_upsnr_db.has_value());
  EXPECT_TRUE(ev.pooled_upsnr.valid);
}

TEST(Mean, CompensatedSummationIsAccurate) {
  // 1e6 copies of 0.1 plus one large value: naive float accumulation drifts.
  std::vector<double> v(1'000'000, 0.1);
  v.push_back(1e10);
  const double expected = (1e10 + 1e5) / 1'000'001.0;
  EXPECT_LT(rel_diff(mean(v), expected), 1e-15);
}

}  // namespace
}  // namespace umse
