#pragma once

// Serial reference implementations of the parallel kernels. They follow the
// defining formulas as literally as possible and exist so tests and the
// benchmark can check the OpenMP kernels against an independent route.

#include <cstdint>
#include <span>
#include <vector>

#include "umse/bootstrap.hpp"
#include "umse/image_grid.hpp"
#include "umse/subsample.hpp"
#include "umse/synth.hpp"

namespace umse::reference {

double mse(const ImageGrid& clean, const ImageGrid& denoised);
double umse(const ReferenceSet& refs, const ImageGrid& denoised);
std::vector<double> use_per_pixel(const ReferenceSet& refs, const ImageGrid& denoised);
double noise_variance_estimate(const ImageGrid& ref_b, const ImageGrid& ref_c);

// Direct (non-separable) 2D convolution with a (2r+1)^2 Gaussian kernel
// normalized over the whole square.
ImageGrid gaussian_smooth(const ImageGrid& image, double filter_sigma);
// Direct neighbourhood average.
ImageGrid box_filter(const ImageGrid& image, std::size_t radius);

// Deterministic decomposition written with 1-based index formulas:
// Y(i,j) = I(2i-1, 2j-1), A(i,j) = I(2i, 2j-1), B(i,j) = I(2i-1, 2j),
// C(i,j) = I(2i, 2j).
SubsampleOutput spatial_subsample_deterministic(const ImageGrid& image);

// Same seeding contract as the parallel kernels, evaluated in a single loop.
ImageGrid add_noise(const ImageGrid& clean, const NoiseModel& model, std::uint64_t seed);
std::vector<double> bootstrap_resample_means(std::span<const double> use_values,
                                             const BootstrapConfig& config);

}  // namespace umse::reference
