#include "umse/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include "umse/errors.hpp"
#include "umse/random.hpp"

namespace umse {

NoiseModel NoiseModel::gaussian(double sigma) {
  NoiseModel m{Kind::AdditiveGaussian, sigma};
  m.validate();
  return m;
}

NoiseModel NoiseModel::poisson() { return NoiseModel{Kind::Poisson, 0.0}; }

NoiseModel NoiseModel::parse(std::string_view text) {
  if (text == "poisson") return poisson();
  constexpr std::string_view prefix = "gaussian:";
  if (text.starts_with(prefix)) {
    const std::string_view num = text.substr(prefix.size());
    double sigma = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), sigma);
    if (ec == std::errc() && ptr == num.data() + num.size()) return gaussian(sigma);
  }
  throw InvalidArgument("unrecognised noise model '" + std::string(text) +
                        "' (expected gaussian:<sigma> or poisson)");
}

std::string NoiseModel::to_string() const {
  if (kind == Kind::Poisson) return "poisson";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, sigma);
  return "gaussian:" + std::string(buf, res.ptr);
}

void NoiseModel::validate() const {
  if (kind == Kind::AdditiveGaussian && !(sigma > 0.0 && std::isfinite(sigma))) {
    throw InvalidArgument("Gaussian noise sigma must be positive, got " + std::to_string(sigma));
  }
}

ImageGrid add_noise(const ImageGrid& clean, const NoiseModel& model, std::uint64_t seed) {
  model.validate();
  const auto x = clean.pixels();
  const std::size_t n = x.size();
  if (model.kind == NoiseModel::Kind::Poisson) {
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] < 0.0) {
        throw InvalidArgument("Poisson noise needs non-negative intensities, pixel " +
                              std::to_string(i) + " is " + std::to_string(x[i]));
      }
    }
  }

  std::vector<double> out(n);
  const std::size_t chunks = (n + kNoiseChunk - 1) / kNoiseChunk;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ch = 0; ch < static_cast<std::ptrdiff_t>(chunks); ++ch) {
    Engine rng = make_engine(seed, static_cast<std::uint64_t>(ch));
    const std::size_t begin = static_cast<std::size_t>(ch) * kNoiseChunk;
    const std::size_t end = std::min(begin + kNoiseChunk, n);
    if (model.kind == NoiseModel::Kind::AdditiveGaussian) {
      std::normal_distribution<double> noise(0.0, model.sigma);
      for (std::size_t i = begin; i < end; ++i) out[i] = x[i] + noise(rng);
    } else {
      for (std::size_t i = begin; i < end; ++i) {
        if (x[i] == 0.0) {
          out[i] = 0.0;
          continue;
        }
        std::poisson_distribution<long long> draw(x[i]);
        out[i] = static_cast<double>(draw(rng));
      }
    }
  }
  return ImageGrid(clean.width(), clean.height(), std::move(out));
}

ReferenceSet make_reference_set(const ImageGrid& clean, const NoiseModel& model,
                                std::uint64_t seed) {
  return ReferenceSet(add_noise(clean, model, mix_seed(seed, kStreamInput)),
                      add_noise(clean, model, mix_seed(seed, kStreamRefA)),
                      add_noise(clean, model, mix_seed(seed, kStreamRefB)),
                      add_noise(clean, model, mix_seed(seed, kStreamRefC)));
}

std::vector<ImageGrid> make_noisy_frames(const ImageGrid& clean, const NoiseModel& model,
                                         std::size_t count, std::uint64_t seed) {
  std::vector<ImageGrid> frames;
  frames.reserve(count);
  for (std::size_t j = 0; j < count; ++j) frames.push_back(add_noise(clean, model, mix_seed(seed, j)));
  return frames;
}

std::vector<double> gaussian_kernel(double filter_sigma) {
  if (!(filter_sigma > 0.0 && std::isfinite(filter_sigma))) {
    throw InvalidArgument("Gaussian filter sigma must be positive, got " +
                          std::to_string(filter_sigma));
  }
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * filter_sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
    const double t = std::exp(-static_cast<double>(k * k) / (2.0 * filter_sigma * filter_sigma));
    taps[static_cast<std::size_t>(k + radius)] = t;
    total += t;
  }
  for (double& t : taps) t /= total;
  return taps;
}

namespace {

inline std::size_t clamp_index(std::ptrdiff_t i, std::size_t extent) noexcept {
  if (i < 0) return 0;
  if (static_cast<std::size_t>(i) >= extent) return extent - 1;
  return static_cast<std::size_t>(i);
}

// Horizontal then vertical pass of a symmetric 1D kernel, edge replicated.
ImageGrid separable_filter(const ImageGrid& image, const std::vector<double>& taps) {
  const std::size_t w = image.width();
  const std::size_t h = image.height();
  const auto radius = static_cast<std::ptrdiff_t>(taps.size() / 2);
  const auto src = image.pixels();

  std::vector<double> tmp(w * h);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(h); ++r) {
    const double* row = src.data() + static_cast<std::size_t>(r) * w;
    for (std::size_t c = 0; c < w; ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        acc += taps[static_cast<std::size_t>(k + radius)] *
               row[clamp_index(static_cast<std::ptrdiff_t>(c) + k, w)];
      }
      tmp[static_cast<std::size_t>(r) * w + c] = acc;
    }
  }

  std::vector<double> out(w * h);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(h); ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        acc += taps[static_cast<std::size_t>(k + radius)] * tmp[clamp_index(r + k, h) * w + c];
      }
      out[static_cast<std::size_t>(r) * w + c] = acc;
    }
  }
  return ImageGrid(w, h, std::move(out));
}

}  // namespace

ImageGrid gaussian_smooth(const ImageGrid& image, double filter_sigma) {
  return separable_filter(image, gaussian_kernel(filter_sigma));
}

ImageGrid box_filter(const ImageGrid& image, std::size_t radius) {
  if (radius == 0) throw InvalidArgument("box filter radius must be at least 1");
  const std::size_t len = 2 * radius + 1;
  return separable_filter(image, std::vector<double>(len, 1.0 / static_cast<double>(len)));
}

ImageGrid identity_denoiser(const ImageGrid& image) { return image; }

}  // namespace umse
