#include "umse/patterns.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "umse/detail/summation.hpp"
#include "umse/errors.hpp"
#include "umse/random.hpp"
#include "umse/synth.hpp"

namespace umse {

ImageGrid constant_pattern(std::size_t width, std::size_t height, double value) {
  return ImageGrid(width, height, value);
}

ImageGrid gradient_pattern(std::size_t width, std::size_t height, double low, double high) {
  std::vector<double> v(width * height);
  const double span = static_cast<double>(width + height - 2);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const double t = span > 0 ? static_cast<double>(r + c) / span : 0.0;
      v[r * width + c] = low + (high - low) * t;
    }
  }
  return ImageGrid(width, height, std::move(v));
}

ImageGrid checkerboard_pattern(std::size_t width, std::size_t height, double low, double high) {
  std::vector<double> v(width * height);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) v[r * width + c] = (r + c) % 2 == 0 ? low : high;
  }
  return ImageGrid(width, height, std::move(v));
}

ImageGrid texture_pattern(std::size_t width, std::size_t height, double correlation_sigma,
                          double mean, double stddev, std::uint64_t seed) {
  if (!(stddev > 0.0)) throw InvalidArgument("texture stddev must be positive");
  const ImageGrid white = add_noise(ImageGrid(width, height, 0.0), NoiseModel::gaussian(1.0), seed);
  const ImageGrid field = gaussian_smooth(white, correlation_sigma);
  const auto f = field.pixels();

  detail::CompensatedSum s;
  for (double x : f) s.add(x);
  const double m = s.value() / static_cast<double>(f.size());
  detail::CompensatedSum ss;
  for (double x : f) ss.add((x - m) * (x - m));
  const double sd = std::sqrt(ss.value() / static_cast<double>(f.size()));
  if (!(sd > 0.0)) throw DegenerateData("texture field has zero variance");

  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) v[i] = mean + stddev * (f[i] - m) / sd;
  return ImageGrid(width, height, std::move(v));
}

namespace {

std::vector<double> parse_params(std::string_view text, std::string_view id) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto colon = text.find(':');
    const std::string_view tok = text.substr(0, colon);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw InvalidArgument("bad numeric parameter '" + std::string(tok) + "' in pattern '" +
                            std::string(id) + "'");
    }
    out.push_back(v);
    if (colon == std::string_view::npos) break;
    text.remove_prefix(colon + 1);
  }
  return out;
}

}  // namespace

ImageGrid make_pattern(std::string_view id, std::size_t width, std::size_t height,
                       std::uint64_t seed) {
  const auto colon = id.find(':');
  const std::string_view name = id.substr(0, colon);
  const auto p = colon == std::string_view::npos ? std::vector<double>{}
                                                 : parse_params(id.substr(colon + 1), id);
  auto bad_arity = [&] {
    return InvalidArgument("wrong number of parameters for pattern '" + std::string(id) + "'");
  };
  if (name == "constant") {
    if (p.size() > 1) throw bad_arity();
    return constant_pattern(width, height, p.empty() ? 128.0 : p[0]);
  }
  if (name == "gradient" || name == "checkerboard") {
    if (p.size() != 0 && p.size() != 2) throw bad_arity();
    const double lo = p.empty() ? 0.0 : p[0];
    const double hi = p.empty() ? 255.0 : p[1];
    return name == "gradient" ? gradient_pattern(width, height, lo, hi)
                              : checkerboard_pattern(width, height, lo, hi);
  }
  if (name == "texture") {
    if (p.size() != 0 && p.size() != 1 && p.size() != 3) throw bad_arity();
    const double corr = p.empty() ? 1.5 : p[0];
    const double mean = p.size() == 3 ? p[1] : 128.0;
    const double sd = p.size() == 3 ? p[2] : 40.0;
    return texture_pattern(width, height, corr, mean, sd, seed);
  }
  throw InvalidArgument("unknown pattern '" + std::string(id) + "'");
}

}  // namespace umse
