#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "umse/bootstrap.hpp"
#include "umse/csv.hpp"
#include "umse/image_grid.hpp"
#include "umse/synth.hpp"

namespace umse {

enum class ExperimentKind {
  Unbiasedness,
  ConsistencySlope,
  Normality,
  Coverage,
  AvgBaselineBias,
  SubsamplingBiasSweep,
  LagCorrelation,
};

ExperimentKind parse_experiment_kind(std::string_view name);
const char* to_string(ExperimentKind kind) noexcept;

struct DenoiserSpec {
  enum class Kind { Identity, GaussianSmooth, Box, ExternalFile };

  Kind kind = Kind::Identity;
  double sigma = 0.0;      // GaussianSmooth
  std::size_t radius = 0;  // Box
  std::string path;        // ExternalFile

  // "identity", "gaussian:<sigma>", "box:<radius>" or "file:<path>".
  static DenoiserSpec parse(std::string_view text);
  std::string to_string() const;

  // ExternalFile ignores the input and returns the image stored at `path`
  // (which must match the input's shape).
  ImageGrid apply(const ImageGrid& noisy) const;
};

// Where the three references (and the denoiser input) come from.
enum class ReferenceSource {
  Independent,             // fresh independent noise on the clean image
  SubsampleDeterministic,  // spatial decomposition of one noisy image
  SubsampleRandomized,
};

enum class Axis { Horizontal, Vertical };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Unbiasedness;
  // Builtin pattern id (see make_pattern) or "file:<path>".
  std::string clean_source = "texture";
  std::size_t width = 128;
  std::size_t height = 128;
  NoiseModel noise = NoiseModel::gaussian(55.0);
  DenoiserSpec denoiser;
  std::size_t trials = 1000;
  std::vector<std::size_t> pixel_counts;
  std::vector<std::size_t> m_values{1, 3, 10, 100};
  std::vector<double> smoothing_levels{0.0, 1.0, 2.0, 4.0};
  std::optional<BootstrapConfig> bootstrap;
  ReferenceSource references = ReferenceSource::Independent;
  std::size_t frames = 8;
  std::size_t max_lag = 5;
  Axis axis = Axis::Horizontal;
  double peak = 255.0;
  std::uint64_t seed = 0;

  // Throws InvalidArgument on an inconsistent configuration.
  void validate() const;

  // Plain-text `key = value` lines; '#' starts a comment. Unknown keys are
  // rejected. See README for the key list.
  static ExperimentConfig parse(std::string_view text);
  static ExperimentConfig load(const std::filesystem::path& path);
};

struct ExperimentReport {
  ExperimentKind kind = ExperimentKind::Unbiasedness;
  // Headline statistics in a fixed order; NaN marks an absent value.
  std::vector<std::pair<std::string, double>> summary;
  // One row per sweep point (n, m, smoothing level or lag); may be empty.
  Table points;
  // Raw per-trial values.
  Table trials;

  std::optional<double> get(std::string_view key) const;
  void set(std::string key, double value);
  void set(std::string key, std::optional<double> value);
};

ExperimentReport run_unbiasedness(const ExperimentConfig& config);
ExperimentReport run_consistency_slope(const ExperimentConfig& config);
ExperimentReport run_normality(const ExperimentConfig& config);
ExperimentReport run_coverage(const ExperimentConfig& config);
ExperimentReport run_avg_baseline_bias(const ExperimentConfig& config);
ExperimentReport run_subsampling_bias_sweep(const ExperimentConfig& config);
ExperimentReport run_lag_correlation(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config);

// Writes summary.csv (header of summary keys, one data row), trials.csv and,
// when non-empty, points.csv into `dir`, creating it if needed.
void write_report(const ExperimentReport& report, const std::filesystem::path& dir);

// RMS of the pairwise differences between the four sub-images of the
// deterministic decomposition of `clean` (all six pairs pooled), divided by
// the RMS intensity of `clean`. Throws DegenerateData on an all-zero image.
double reference_relative_rmse(const ImageGrid& clean);

// Pearson correlation between residual pixels j apart, j = 1..max_lag, after
// subtracting the per-pixel mean across frames; pairs pooled over frames.
// Throws InvalidArgument on fewer than two frames or max_lag out of range,
// DegenerateData on zero residual variance.
std::vector<double> lag_correlation(std::span<const ImageGrid> frames, std::size_t max_lag,
                                    Axis axis);

// Statistics helpers shared with tests.
struct SampleMoments {
  double mean = 0.0;
  double stddev = 0.0;  // unbiased (n - 1)
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};
SampleMoments sample_moments(std::span<const double> values);
// Kolmogorov-Smirnov distance between the empirical CDF of `values` and the
// standard normal CDF.
double ks_distance_to_normal(std::span<const double> values);
double median(std::vector<double> values);
// Least-squares fit y = intercept + slope x.
std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace umse
