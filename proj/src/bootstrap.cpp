#include "umse/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "umse/detail/summation.hpp"
#include "umse/errors.hpp"
#include "umse/metrics.hpp"
#include "umse/random.hpp"

namespace umse {

void BootstrapConfig::validate() const {
  if (resamples < 2) {
    throw InvalidArgument("bootstrap needs at least 2 resamples, got " + std::to_string(resamples));
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("bootstrap alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
}

double empirical_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InvalidArgument("quantile of an empty set");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("quantile level outside [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<double> bootstrap_resample_means(std::span<const double> use_values,
                                             const BootstrapConfig& config) {
  config.validate();
  if (use_values.empty()) throw InvalidArgument("bootstrap of an empty uSE vector");
  const std::size_t n = use_values.size();
  const double* v = use_values.data();
  std::vector<double> means(config.resamples);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(config.resamples); ++k) {
    Engine rng = make_engine(config.seed, static_cast<std::uint64_t>(k));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    detail::CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i) acc.add(v[pick(rng)]);
    means[static_cast<std::size_t>(k)] = acc.value() / static_cast<double>(n);
  }
  return means;
}

BootstrapResult bootstrap_ci(std::span<const double> use_values, double peak,
                             const BootstrapConfig& config) {
  if (!(peak > 0.0)) throw InvalidArgument("bootstrap peak must be positive");
  BootstrapResult out;
  out.resample_umse = bootstrap_resample_means(use_values, config);

  std::vector<double> sorted = out.resample_umse;
  std::sort(sorted.begin(), sorted.end());
  const double lo_p = config.alpha / 2.0;
  const double hi_p = 1.0 - config.alpha / 2.0;
  out.umse = {empirical_quantile(sorted, lo_p), empirical_quantile(sorted, hi_p)};

  std::vector<double> db;
  db.reserve(sorted.size());
  for (double u : sorted) {
    if (auto p = psnr(u, peak)) db.push_back(*p);
  }
  out.upsnr_excluded = sorted.size() - db.size();
  if (2 * out.upsnr_excluded <= sorted.size()) {
    std::sort(db.begin(), db.end());
    out.upsnr = Interval{empirical_quantile(db, lo_p), empirical_quantile(db, hi_p)};
  }
  return out;
}

}  // namespace umse
