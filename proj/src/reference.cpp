#include "umse/reference.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "umse/detail/summation.hpp"
#include "umse/errors.hpp"
#include "umse/random.hpp"

namespace umse::reference {

double mse(const ImageGrid& clean, const ImageGrid& denoised) {
  require_same_shape(clean, denoised, "reference::mse");
  detail::CompensatedSum s;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const double d = clean.pixels()[i] - denoised.pixels()[i];
    s.add(d * d);
  }
  return s.value() / static_cast<double>(clean.size());
}

std::vector<double> use_per_pixel(const ReferenceSet& refs, const ImageGrid& denoised) {
  require_same_shape(refs.input_y, denoised, "reference::use_per_pixel");
  std::vector<double> out;
  out.reserve(denoised.size());
  for (std::size_t i = 0; i < denoised.size(); ++i) {
    const double a = refs.ref_a.pixels()[i];
    const double b = refs.ref_b.pixels()[i];
    const double c = refs.ref_c.pixels()[i];
    const double f = denoised.pixels()[i];
    out.push_back((a - f) * (a - f) - (b - c) * (b - c) / 2.0);
  }
  return out;
}

double umse(const ReferenceSet& refs, const ImageGrid& denoised) {
  detail::CompensatedSum s;
  for (double v : use_per_pixel(refs, denoised)) s.add(v);
  return s.value() / static_cast<double>(denoised.size());
}

double noise_variance_estimate(const ImageGrid& ref_b, const ImageGrid& ref_c) {
  require_same_shape(ref_b, ref_c, "reference::noise_variance_estimate");
  detail::CompensatedSum s;
  for (std::size_t i = 0; i < ref_b.size(); ++i) {
    const double d = ref_b.pixels()[i] - ref_c.pixels()[i];
    s.add(d * d / 2.0);
  }
  return s.value() / static_cast<double>(ref_b.size());
}

namespace {

template <typename Weight>
ImageGrid direct_filter(const ImageGrid& image, std::ptrdiff_t radius, Weight&& weight) {
  const auto w = static_cast<std::ptrdiff_t>(image.width());
  const auto h = static_cast<std::ptrdiff_t>(image.height());
  double total = 0.0;
  for (std::ptrdiff_t dy = -radius; dy <= radius; ++dy) {
    for (std::ptrdiff_t dx = -radius; dx <= radius; ++dx) total += weight(dx, dy);
  }
  std::vector<double> out(image.size());
  for (std::ptrdiff_t r = 0; r < h; ++r) {
    for (std::ptrdiff_t c = 0; c < w; ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t dy = -radius; dy <= radius; ++dy) {
        for (std::ptrdiff_t dx = -radius; dx <= radius; ++dx) {
          const auto rr = std::clamp(r + dy, std::ptrdiff_t{0}, h - 1);
          const auto cc = std::clamp(c + dx, std::ptrdiff_t{0}, w - 1);
          acc += weight(dx, dy) * image(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
        }
      }
      out[static_cast<std::size_t>(r * w + c)] = acc / total;
    }
  }
  return ImageGrid(image.width(), image.height(), std::move(out));
}

}  // namespace

ImageGrid gaussian_smooth(const ImageGrid& image, double filter_sigma) {
  if (!(filter_sigma > 0.0)) throw InvalidArgument("filter sigma must be positive");
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * filter_sigma));
  return direct_filter(image, radius, [filter_sigma](std::ptrdiff_t dx, std::ptrdiff_t dy) {
    return std::exp(-static_cast<double>(dx * dx + dy * dy) / (2.0 * filter_sigma * filter_sigma));
  });
}

ImageGrid box_filter(const ImageGrid& image, std::size_t radius) {
  if (radius == 0) throw InvalidArgument("box radius must be at least 1");
  return direct_filter(image, static_cast<std::ptrdiff_t>(radius),
                       [](std::ptrdiff_t, std::ptrdiff_t) { return 1.0; });
}

SubsampleOutput spatial_subsample_deterministic(const ImageGrid& image) {
  if (image.width() % 2 || image.height() % 2) throw InvalidArgument("odd dimensions");
  const std::size_t nw = image.width() / 2;
  const std::size_t nh = image.height() / 2;
  // 1-based accessor I(row, col).
  auto I = [&image](std::size_t row, std::size_t col) { return image(row - 1, col - 1); };
  std::vector<double> y, a, b, c;
  for (std::size_t i = 1; i <= nh; ++i) {
    for (std::size_t j = 1; j <= nw; ++j) {
      y.push_back(I(2 * i - 1, 2 * j - 1));
      a.push_back(I(2 * i, 2 * j - 1));
      b.push_back(I(2 * i - 1, 2 * j));
      c.push_back(I(2 * i, 2 * j));
    }
  }
  return SubsampleOutput{ImageGrid(nw, nh, std::move(y)), ImageGrid(nw, nh, std::move(a)),
                         ImageGrid(nw, nh, std::move(b)), ImageGrid(nw, nh, std::move(c)),
                         std::vector<BlockAssignment>(nw * nh)};
}

ImageGrid add_noise(const ImageGrid& clean, const NoiseModel& model, std::uint64_t seed) {
  model.validate();
  const auto x = clean.pixels();
  std::vector<double> out(x.size());
  for (std::size_t begin = 0, chunk = 0; begin < x.size(); begin += kNoiseChunk, ++chunk) {
    Engine rng = make_engine(seed, chunk);
    const std::size_t end = std::min(begin + kNoiseChunk, x.size());
    if (model.kind == NoiseModel::Kind::AdditiveGaussian) {
      std::normal_distribution<double> noise(0.0, model.sigma);
      for (std::size_t i = begin; i < end; ++i) out[i] = x[i] + noise(rng);
    } else {
      for (std::size_t i = begin; i < end; ++i) {
        if (x[i] < 0.0) throw InvalidArgument("negative intensity under Poisson noise");
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

std::vector<double> bootstrap_resample_means(std::span<const double> use_values,
                                             const BootstrapConfig& config) {
  config.validate();
  if (use_values.empty()) throw InvalidArgument("empty uSE vector");
  std::vector<double> out;
  for (std::size_t k = 0; k < config.resamples; ++k) {
    Engine rng = make_engine(config.seed, k);
    std::uniform_int_distribution<std::size_t> pick(0, use_values.size() - 1);
    detail::CompensatedSum s;
    for (std::size_t i = 0; i < use_values.size(); ++i) s.add(use_values[pick(rng)]);
    out.push_back(s.value() / static_cast<double>(use_values.size()));
  }
  return out;
}

}  // namespace umse::reference
