#include <charconv>
#include <fstream>
#include <iterator>
#include <string>

#include "umse/errors.hpp"
#include "umse/experiments.hpp"
#include "umse/raster_io.hpp"
#include "umse/synth.hpp"

namespace umse {

namespace {

constexpr std::pair<ExperimentKind, const char*> kKindNames[] = {
    {ExperimentKind::Unbiasedness, "unbiasedness"},
    {ExperimentKind::ConsistencySlope, "consistency_slope"},
    {ExperimentKind::Normality, "normality"},
    {ExperimentKind::Coverage, "coverage"},
    {ExperimentKind::AvgBaselineBias, "avg_baseline_bias"},
    {ExperimentKind::SubsamplingBiasSweep, "subsampling_bias_sweep"},
    {ExperimentKind::LagCorrelation, "lag_correlation"},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view text, std::string_view key) {
  text = trim(text);
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("config key '" + std::string(key) + "': bad number '" +
                          std::string(text) + "'");
  }
  return v;
}

template <typename T>
std::vector<T> parse_list(std::string_view text, std::string_view key) {
  std::vector<T> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_number<T>(text.substr(0, comma), key));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

ReferenceSource parse_reference_source(std::string_view v) {
  if (v == "independent") return ReferenceSource::Independent;
  if (v == "subsample_det") return ReferenceSource::SubsampleDeterministic;
  if (v == "subsample_rand") return ReferenceSource::SubsampleRandomized;
  throw InvalidArgument("references must be independent, subsample_det or subsample_rand");
}

}  // namespace

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (const auto& [kind, label] : kKindNames) {
    if (name == label) return kind;
  }
  throw InvalidArgument("unknown experiment kind '" + std::string(name) + "'");
}

const char* to_string(ExperimentKind kind) noexcept {
  for (const auto& [k, label] : kKindNames) {
    if (k == kind) return label;
  }
  return "unknown";
}

DenoiserSpec DenoiserSpec::parse(std::string_view text) {
  DenoiserSpec d;
  if (text == "identity") return d;
  if (text.starts_with("gaussian:")) {
    d.kind = Kind::GaussianSmooth;
    d.sigma = parse_number<double>(text.substr(9), "denoiser");
    if (!(d.sigma > 0.0)) throw InvalidArgument("denoiser gaussian sigma must be positive");
    return d;
  }
  if (text.starts_with("box:")) {
    d.kind = Kind::Box;
    d.radius = parse_number<std::size_t>(text.substr(4), "denoiser");
    if (d.radius == 0) throw InvalidArgument("denoiser box radius must be at least 1");
    return d;
  }
  if (text.starts_with("file:") && text.size() > 5) {
    d.kind = Kind::ExternalFile;
    d.path = std::string(text.substr(5));
    return d;
  }
  throw InvalidArgument("unrecognised denoiser '" + std::string(text) + "'");
}

std::string DenoiserSpec::to_string() const {
  switch (kind) {
    case Kind::Identity: return "identity";
    case Kind::GaussianSmooth: return "gaussian:" + format_number(sigma);
    case Kind::Box: return "box:" + std::to_string(radius);
    case Kind::ExternalFile: return "file:" + path;
  }
  return "identity";
}

ImageGrid DenoiserSpec::apply(const ImageGrid& noisy) const {
  switch (kind) {
    case Kind::Identity: return identity_denoiser(noisy);
    case Kind::GaussianSmooth: return gaussian_smooth(noisy, sigma);
    case Kind::Box: return box_filter(noisy, radius);
    case Kind::ExternalFile: {
      ImageGrid out = read_image(path);
      require_same_shape(noisy, out, "external denoiser output");
      return out;
    }
  }
  return noisy;
}

void ExperimentConfig::validate() const {
  noise.validate();
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  if (width == 0 || height == 0) throw InvalidArgument("width and height must be positive");
  if (!(peak > 0.0)) throw InvalidArgument("peak must be positive");
  switch (kind) {
    case ExperimentKind::ConsistencySlope:
      if (pixel_counts.empty()) throw InvalidArgument("consistency_slope needs pixel_counts");
      if (trials < 2) throw InvalidArgument("consistency_slope needs at least 2 trials");
      break;
    case ExperimentKind::Normality:
      if (trials < 2) throw InvalidArgument("normality needs at least 2 trials");
      break;
    case ExperimentKind::Coverage:
      if (bootstrap) bootstrap->validate();
      break;
    case ExperimentKind::AvgBaselineBias:
      if (m_values.empty()) throw InvalidArgument("avg_baseline_bias needs m_values");
      for (auto m : m_values) {
        if (m == 0) throw InvalidArgument("m_values entries must be at least 1");
      }
      break;
    case ExperimentKind::SubsamplingBiasSweep:
      if (smoothing_levels.empty()) throw InvalidArgument("sweep needs smoothing_levels");
      for (double s : smoothing_levels) {
        if (s < 0.0) throw InvalidArgument("smoothing levels must be non-negative");
      }
      break;
    case ExperimentKind::LagCorrelation:
      if (frames < 2) throw InvalidArgument("lag_correlation needs at least 2 frames");
      if (max_lag < 1) throw InvalidArgument("max_lag must be at least 1");
      break;
    case ExperimentKind::Unbiasedness:
      break;
  }
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  ExperimentConfig cfg;
  std::size_t bootstrap_k = 0;
  std::optional<double> alpha;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    if (key == "kind") cfg.kind = parse_experiment_kind(value);
    else if (key == "clean") cfg.clean_source = std::string(value);
    else if (key == "width") cfg.width = parse_number<std::size_t>(value, key);
    else if (key == "height") cfg.height = parse_number<std::size_t>(value, key);
    else if (key == "noise") cfg.noise = NoiseModel::parse(value);
    else if (key == "denoiser") cfg.denoiser = DenoiserSpec::parse(value);
    else if (key == "trials") cfg.trials = parse_number<std::size_t>(value, key);
    else if (key == "pixel_counts") cfg.pixel_counts = parse_list<std::size_t>(value, key);
    else if (key == "m_values") cfg.m_values = parse_list<std::size_t>(value, key);
    else if (key == "smoothing_levels") cfg.smoothing_levels = parse_list<double>(value, key);
    else if (key == "bootstrap_k") bootstrap_k = parse_number<std::size_t>(value, key);
    else if (key == "alpha") alpha = parse_number<double>(value, key);
    else if (key == "references") cfg.references = parse_reference_source(value);
    else if (key == "frames") cfg.frames = parse_number<std::size_t>(value, key);
    else if (key == "max_lag") cfg.max_lag = parse_number<std::size_t>(value, key);
    else if (key == "axis") {
      if (value == "horizontal") cfg.axis = Axis::Horizontal;
      else if (value == "vertical") cfg.axis = Axis::Vertical;
      else throw InvalidArgument("axis must be horizontal or vertical");
    }
    else if (key == "peak") cfg.peak = parse_number<double>(value, key);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(value, key);
    else throw InvalidArgument("unknown config key '" + std::string(key) + "'");
  }
  if (bootstrap_k > 0 || alpha) {
    BootstrapConfig b;
    if (bootstrap_k > 0) b.resamples = bootstrap_k;
    if (alpha) b.alpha = *alpha;
    b.seed = cfg.seed;
    cfg.bootstrap = b;
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse(text);
}

}  // namespace umse
