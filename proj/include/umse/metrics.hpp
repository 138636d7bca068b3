#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "umse/image_grid.hpp"

namespace umse {

enum class MetricKind { Mse, Umse, Psnr, Upsnr, MseAvg };

const char* to_string(MetricKind kind) noexcept;

// One scalar metric. PSNR-family reports carry the peak value they were
// computed with and are `valid == false` (with no value) when the underlying
// squared error is not strictly positive.
struct MetricReport {
  MetricKind kind = MetricKind::Mse;
  std::optional<double> value;
  std::size_t n = 0;
  std::optional<double> peak;
  bool valid = false;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
};

// Mean of `values` using the library's fixed summation order: compensated
// sums over blocks of detail::kReductionBlock, combined in block order.
// Throws InvalidArgument on empty input.
double mean(std::span<const double> values);

// Supervised mean squared error (1/n) sum (x_i - f_i)^2.
double mse(const ImageGrid& clean, const ImageGrid& denoised);
std::vector<double> se_per_pixel(const ImageGrid& clean, const ImageGrid& denoised);

// Unsupervised MSE from three noisy references:
//   (1/n) sum [ (a_i - f_i)^2 - (b_i - c_i)^2 / 2 ]
// May be negative. Equal, bit for bit, to mean(use_per_pixel(refs, f)).
double umse(const ReferenceSet& refs, const ImageGrid& denoised);
std::vector<double> use_per_pixel(const ReferenceSet& refs, const ImageGrid& denoised);

// (1/n) sum (b_i - c_i)^2 / 2, the correction term of umse.
double noise_variance_estimate(const ImageGrid& ref_b, const ImageGrid& ref_c);

// 10 log10(peak^2 / mse_value); nullopt when mse_value <= 0.
// Throws InvalidArgument when peak <= 0.
std::optional<double> psnr(double mse_value, double peak);

MetricReport mse_report(const ImageGrid& clean, const ImageGrid& denoised);
MetricReport psnr_report(const ImageGrid& clean, const ImageGrid& denoised, double peak);
MetricReport umse_report(const ReferenceSet& refs, const ImageGrid& denoised);
MetricReport upsnr(const ReferenceSet& refs, const ImageGrid& denoised, double peak);

// MSE against the pixel-wise mean of m >= 1 noisy references. Biased upward
// by sigma^2 / m under i.i.d. noise of variance sigma^2.
double mse_avg(std::span<const ImageGrid> references, const ImageGrid& denoised);

// Evaluation of a set of images. `pooled_*` treat all pixels as one sample
// of size sum(n); `mean_upsnr_db` averages per-image uPSNR in dB and is absent
// when any per-image value is undefined.
struct DatasetEvaluation {
  std::vector<MetricReport> per_image_umse;
  std::vector<MetricReport> per_image_upsnr;
  MetricReport pooled_umse;
  MetricReport pooled_upsnr;
  std::optional<double> mean_upsnr_db;
  // Concatenated per-pixel uSE values, image by image.
  std::vector<double> pooled_use;
};

DatasetEvaluation evaluate_dataset(std::span<const ReferenceSet> refs,
                                   std::span<const ImageGrid> denoised, double peak);

}  // namespace umse
