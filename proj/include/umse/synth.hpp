#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "umse/image_grid.hpp"

namespace umse {

struct NoiseModel {
  enum class Kind { AdditiveGaussian, Poisson };

  Kind kind = Kind::AdditiveGaussian;
  double sigma = 1.0;  // AdditiveGaussian only, intensity units

  static NoiseModel gaussian(double sigma);
  static NoiseModel poisson();

  // "gaussian:<sigma>" or "poisson".
  static NoiseModel parse(std::string_view text);
  std::string to_string() const;

  // Throws InvalidArgument when a Gaussian sigma is not positive and finite.
  void validate() const;
};

// Pixel-wise independent noise. Gaussian adds N(0, sigma^2) without clipping;
// Poisson replaces x_i with a Poisson(x_i) draw. Pixels are processed in fixed
// chunks of kNoiseChunk, chunk j drawing from mix_seed(seed, j), so output
// depends only on (clean, model, seed). Throws InvalidArgument on negative
// intensities under Poisson.
inline constexpr std::size_t kNoiseChunk = 4096;
ImageGrid add_noise(const ImageGrid& clean, const NoiseModel& model, std::uint64_t seed);

// Stream tags for the four members of a simulated reference set.
inline constexpr std::uint64_t kStreamInput = 0;
inline constexpr std::uint64_t kStreamRefA = 1;
inline constexpr std::uint64_t kStreamRefB = 2;
inline constexpr std::uint64_t kStreamRefC = 3;

// Four independent noisy realizations (y, a, b, c) of `clean`; member s uses
// add_noise(clean, model, mix_seed(seed, s)).
ReferenceSet make_reference_set(const ImageGrid& clean, const NoiseModel& model, std::uint64_t seed);

// `count` independent noisy frames; frame j uses mix_seed(seed, j).
std::vector<ImageGrid> make_noisy_frames(const ImageGrid& clean, const NoiseModel& model,
                                         std::size_t count, std::uint64_t seed);

// Normalized 1D Gaussian taps, radius ceil(3 sigma), length 2 radius + 1.
std::vector<double> gaussian_kernel(double filter_sigma);

// Separable Gaussian convolution with edge replication.
ImageGrid gaussian_smooth(const ImageGrid& image, double filter_sigma);

// Mean over the (2r+1)^2 neighbourhood with edge replication. radius >= 1.
ImageGrid box_filter(const ImageGrid& image, std::size_t radius);

ImageGrid identity_denoiser(const ImageGrid& image);

}  // namespace umse
