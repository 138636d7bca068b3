#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace umse {

struct BootstrapConfig {
  std::size_t resamples = 1000;  // K
  double alpha = 0.05;           // intervals have nominal coverage 1 - alpha
  std::uint64_t seed = 0;

  // Throws InvalidArgument unless K >= 2 and 0 < alpha < 1.
  void validate() const;
};

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

struct BootstrapResult {
  Interval umse;
  // Absent when more than half of the resamples had uMSE_k <= 0.
  std::optional<Interval> upsnr;
  // Resamples left out of the uPSNR quantiles because uMSE_k <= 0.
  std::size_t upsnr_excluded = 0;
  // uMSE_k, indexed by k.
  std::vector<double> resample_umse;
};

// Empirical quantile of ascending `sorted` with linear interpolation between
// order statistics (Hyndman-Fan type 7): h = (K - 1) p.
double empirical_quantile(std::span<const double> sorted, double p);

// uMSE_k for k = 1..K. Resample k draws n indices uniformly with replacement
// from an engine seeded with mix_seed(config.seed, k), so the result does not
// depend on how iterations are scheduled across threads.
std::vector<double> bootstrap_resample_means(std::span<const double> use_values,
                                             const BootstrapConfig& config);

// Percentile bootstrap intervals for uMSE and uPSNR from the per-pixel uSE
// values. Throws InvalidArgument on empty input or non-positive peak.
BootstrapResult bootstrap_ci(std::span<const double> use_values, double peak,
                             const BootstrapConfig& config);

}  // namespace umse
