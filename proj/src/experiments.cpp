#include "umse/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "umse/bootstrap.hpp"
#include "umse/detail/parallel.hpp"
#include "umse/detail/summation.hpp"
#include "umse/errors.hpp"
#include "umse/metrics.hpp"
#include "umse/patterns.hpp"
#include "umse/random.hpp"
#include "umse/raster_io.hpp"
#include "umse/subsample.hpp"

namespace umse {

namespace {

// Stream tags mixed into ExperimentConfig::seed.
constexpr std::uint64_t kTagClean = 0x10;
constexpr std::uint64_t kTagInput = 0x11;
constexpr std::uint64_t kTagTrials = 0x12;
constexpr std::uint64_t kTagBootstrap = 0x13;
constexpr std::uint64_t kTagAvgRefs = 0x14;
constexpr std::uint64_t kTagSubsample = 0x15;
constexpr std::uint64_t kTagSweepPoint = 0x100;

const double kNaN = std::nan("");

ImageGrid load_clean(const ExperimentConfig& cfg, std::size_t width, std::size_t height) {
  if (cfg.clean_source.starts_with("file:")) return read_image(cfg.clean_source.substr(5));
  return make_pattern(cfg.clean_source, width, height, mix_seed(cfg.seed, kTagClean));
}

// Per-pixel noise variance of the model on `clean`, averaged over pixels.
double mean_noise_variance(const NoiseModel& model, const ImageGrid& clean) {
  if (model.kind == NoiseModel::Kind::AdditiveGaussian) return model.sigma * model.sigma;
  return mean(clean.pixels());
}

struct TrialOutcome {
  double true_mse = 0.0;
  double umse = 0.0;
  std::vector<double> use;
};

// Draws one Monte Carlo trial. With independent references the denoised image
// is computed once from a fixed noisy input and only a, b, c are redrawn per
// trial. With spatial subsampling the whole noisy image is redrawn, decomposed,
// and the clean image is gathered at the Y sites for the true MSE.
class TrialSampler {
 public:
  TrialSampler(const ExperimentConfig& cfg, ImageGrid clean, ReferenceSource source,
               std::uint64_t seed)
      : cfg_(cfg), source_(source), seed_(seed),
        clean_(source == ReferenceSource::Independent ? std::move(clean)
                                                      : crop_to_even(clean)) {
    if (source_ == ReferenceSource::Independent) {
      input_ = add_noise(clean_, cfg_.noise, mix_seed(seed_, kTagInput));
      denoised_ = cfg_.denoiser.apply(*input_);
      fixed_mse_ = mse(clean_, *denoised_);
    }
  }

  const ImageGrid& clean() const noexcept { return clean_; }
  std::optional<double> fixed_mse() const noexcept { return fixed_mse_; }
  // Independent-reference mode only.
  const ImageGrid& denoised() const { return denoised_.value(); }
  std::size_t pixels_per_trial() const noexcept {
    return source_ == ReferenceSource::Independent ? clean_.size() : clean_.size() / 4;
  }

  TrialOutcome draw(std::size_t trial, bool keep_use) const {
    const std::uint64_t s = mix_seed(mix_seed(seed_, kTagTrials), trial);
    TrialOutcome out;
    if (source_ == ReferenceSource::Independent) {
      const ReferenceSet refs(*input_, add_noise(clean_, cfg_.noise, mix_seed(s, kStreamRefA)),
                              add_noise(clean_, cfg_.noise, mix_seed(s, kStreamRefB)),
                              add_noise(clean_, cfg_.noise, mix_seed(s, kStreamRefC)));
      out.true_mse = *fixed_mse_;
      finish(out, refs, *denoised_, keep_use);
      return out;
    }
    const ImageGrid noisy = add_noise(clean_, cfg_.noise, mix_seed(s, kStreamInput));
    const auto mode = source_ == ReferenceSource::SubsampleRandomized ? SubsampleMode::Randomized
                                                                      : SubsampleMode::Deterministic;
    const SubsampleOutput dec = spatial_subsample(noisy, mode, mix_seed(s, kTagSubsample));
    const ImageGrid f = cfg_.denoiser.apply(dec.sub_y);
    out.true_mse = mse(gather_by_assignment(clean_, dec.assignment, SubRole::Y), f);
    finish(out, dec.as_reference_set(), f, keep_use);
    return out;
  }

 private:
  static void finish(TrialOutcome& out, const ReferenceSet& refs, const ImageGrid& f,
                     bool keep_use) {
    if (keep_use) {
      out.use = use_per_pixel(refs, f);
      out.umse = mean(out.use);
    } else {
      out.umse = umse(refs, f);
    }
  }

  const ExperimentConfig& cfg_;
  ReferenceSource source_;
  std::uint64_t seed_;
  ImageGrid clean_;
  std::optional<ImageGrid> input_;
  std::optional<ImageGrid> denoised_;
  std::optional<double> fixed_mse_;
};

std::vector<TrialOutcome> draw_trials(const TrialSampler& sampler, std::size_t trials) {
  std::vector<TrialOutcome> out(trials);
  detail::parallel_for_index(trials, [&](std::size_t t) { out[t] = sampler.draw(t, false); });
  return out;
}

double compensated_mean(std::span<const double> v) {
  detail::CompensatedSum s;
  for (double x : v) s.add(x);
  return s.value() / static_cast<double>(v.size());
}

double standard_error(std::span<const double> v) {
  if (v.size() < 2) return kNaN;
  return sample_moments(v).stddev / std::sqrt(static_cast<double>(v.size()));
}

}  // namespace

// ---------------------------------------------------------------------------
// Statistics helpers

SampleMoments sample_moments(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("moments of an empty sample");
  const double m = compensated_mean(values);
  detail::CompensatedSum s2, s3, s4;
  for (double x : values) {
    const double d = x - m;
    s2.add(d * d);
    s3.add(d * d * d);
    s4.add(d * d * d * d);
  }
  const double n = static_cast<double>(values.size());
  SampleMoments out;
  out.mean = m;
  out.stddev = values.size() > 1 ? std::sqrt(s2.value() / (n - 1.0)) : 0.0;
  const double m2 = s2.value() / n;
  if (m2 > 0.0) {
    out.skewness = (s3.value() / n) / std::pow(m2, 1.5);
    out.excess_kurtosis = (s4.value() / n) / (m2 * m2) - 3.0;
  }
  return out;
}

double ks_distance_to_normal(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("KS distance of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-sorted[i] / std::sqrt(2.0));
    d = std::max({d, static_cast<double>(i + 1) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  return d;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t h = values.size() / 2;
  return values.size() % 2 ? values[h] : 0.5 * (values[h - 1] + values[h]);
}

std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("line fit needs at least two (x, y) pairs");
  }
  const double mx = compensated_mean(x);
  const double my = compensated_mean(y);
  detail::CompensatedSum sxx, sxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx.add((x[i] - mx) * (x[i] - mx));
    sxy.add((x[i] - mx) * (y[i] - my));
  }
  if (!(sxx.value() > 0.0)) throw DegenerateData("line fit with constant x");
  const double slope = sxy.value() / sxx.value();
  return {slope, my - slope * mx};
}

// ---------------------------------------------------------------------------
// Diagnostics

double reference_relative_rmse(const ImageGrid& clean) {
  const SubsampleOutput dec = spatial_subsample(clean, SubsampleMode::Deterministic, 0);
  const ImageGrid* subs[] = {&dec.sub_y, &dec.sub_a, &dec.sub_b, &dec.sub_c};
  detail::CompensatedSum diff;
  std::size_t count = 0;
  for (std::size_t p = 0; p < 4; ++p) {
    for (std::size_t q = p + 1; q < 4; ++q) {
      const auto u = subs[p]->pixels();
      const auto v = subs[q]->pixels();
      for (std::size_t i = 0; i < u.size(); ++i) diff.add((u[i] - v[i]) * (u[i] - v[i]));
      count += u.size();
    }
  }
  detail::CompensatedSum energy;
  for (double x : clean.pixels()) energy.add(x * x);
  const double rms = std::sqrt(energy.value() / static_cast<double>(clean.size()));
  if (!(rms > 0.0)) throw DegenerateData("relative RMSE of an all-zero image");
  return std::sqrt(diff.value() / static_cast<double>(count)) / rms;
}

std::vector<double> lag_correlation(std::span<const ImageGrid> frames, std::size_t max_lag,
                                    Axis axis) {
  if (frames.size() < 2) throw InvalidArgument("lag correlation needs at least two frames");
  for (const auto& f : frames) require_same_shape(frames.front(), f, "lag_correlation");
  const std::size_t w = frames.front().width();
  const std::size_t h = frames.front().height();
  const std::size_t extent = axis == Axis::Horizontal ? w : h;
  if (max_lag < 1 || max_lag >= extent) {
    throw InvalidArgument("max_lag must lie in [1, " + std::to_string(extent - 1) + "]");
  }

  const std::size_t n = w * h;
  std::vector<double> frame_mean(n);
  for (std::size_t i = 0; i < n; ++i) {
    detail::CompensatedSum s;
    for (const auto& f : frames) s.add(f.pixels()[i]);
    frame_mean[i] = s.value() / static_cast<double>(frames.size());
  }
  std::vector<std::vector<double>> residual(frames.size(), std::vector<double>(n));
  for (std::size_t k = 0; k < frames.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) residual[k][i] = frames[k].pixels()[i] - frame_mean[i];
  }

  std::vector<double> out(max_lag);
  detail::parallel_for_index(max_lag, [&](std::size_t idx) {
    const std::size_t j = idx + 1;
    const std::size_t rows = axis == Axis::Horizontal ? h : h - j;
    const std::size_t cols = axis == Axis::Horizontal ? w - j : w;
    const std::size_t step = axis == Axis::Horizontal ? j : j * w;
    detail::CompensatedSum sx, sy, sxx, syy, sxy;
    std::size_t pairs = 0;
    for (const auto& r : residual) {
      for (std::size_t row = 0; row < rows; ++row) {
        for (std::size_t col = 0; col < cols; ++col) {
          const std::size_t p = row * w + col;
          const double x = r[p];
          const double y = r[p + step];
          sx.add(x);
          sy.add(y);
          sxx.add(x * x);
          syy.add(y * y);
          sxy.add(x * y);
          ++pairs;
        }
      }
    }
    const double np = static_cast<double>(pairs);
    const double mx = sx.value() / np;
    const double my = sy.value() / np;
    const double vx = sxx.value() / np - mx * mx;
    const double vy = syy.value() / np - my * my;
    const double scale = std::max(1.0, std::max(sxx.value(), syy.value()) / np);
    if (!(vx > 1e-14 * scale) || !(vy > 1e-14 * scale)) {
      throw DegenerateData("residuals have zero variance at lag " + std::to_string(j));
    }
    out[idx] = (sxy.value() / np - mx * my) / std::sqrt(vx * vy);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Report plumbing

std::optional<double> ExperimentReport::get(std::string_view key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return std::isnan(v) ? std::nullopt : std::optional<double>(v);
  }
  return std::nullopt;
}

void ExperimentReport::set(std::string key, double value) {
  for (auto& [k, v] : summary) {
    if (k == key) {
      v = value;
      return;
    }
  }
  summary.emplace_back(std::move(key), value);
}

void ExperimentReport::set(std::string key, std::optional<double> value) {
  set(std::move(key), or_nan(value));
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::trunc);
    if (!out) throw IoError("cannot write '" + (dir / name).string() + "'");
    return out;
  };
  {
    auto out = open("summary.csv");
    std::vector<std::string> keys{"experiment"};
    std::vector<std::string> values{to_string(report.kind)};
    for (const auto& [k, v] : report.summary) {
      keys.push_back(k);
      values.push_back(format_number(v));
    }
    write_csv_row(out, keys);
    write_csv_row(out, values);
  }
  {
    auto out = open("trials.csv");
    write_csv(out, report.trials);
  }
  if (!report.points.columns.empty()) {
    auto out = open("points.csv");
    write_csv(out, report.points);
  }
}

// ---------------------------------------------------------------------------
// Experiments

ExperimentReport run_unbiasedness(const ExperimentConfig& cfg) {
  cfg.validate();
  const TrialSampler sampler(cfg, load_clean(cfg, cfg.width, cfg.height), cfg.references, cfg.seed);
  const auto outcomes = draw_trials(sampler, cfg.trials);

  ExperimentReport r;
  r.kind = ExperimentKind::Unbiasedness;
  r.trials.columns = {"trial", "true_mse", "umse", "error"};
  std::vector<double> umses, mses, errors;
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    const auto& o = outcomes[t];
    umses.push_back(o.umse);
    mses.push_back(o.true_mse);
    errors.push_back(o.umse - o.true_mse);
    r.trials.add_row({static_cast<double>(t), o.true_mse, o.umse, o.umse - o.true_mse});
  }
  const double se = standard_error(errors);
  const double mean_error = compensated_mean(errors);
  r.set("trials", static_cast<double>(cfg.trials));
  r.set("n", static_cast<double>(sampler.pixels_per_trial()));
  r.set("true_mse", compensated_mean(mses));
  r.set("mean_umse", compensated_mean(umses));
  r.set("std_umse", umses.size() > 1 ? sample_moments(umses).stddev : kNaN);
  r.set("mean_error", mean_error);
  r.set("se", se);
  r.set("z", se > 0.0 ? mean_error / se : kNaN);
  return r;
}

ExperimentReport run_consistency_slope(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport r;
  r.kind = ExperimentKind::ConsistencySlope;
  r.trials.columns = {"n", "trial", "umse"};
  r.points.columns = {"n", "true_mse", "mean_umse", "std_umse"};

  std::vector<double> log_n, log_sd;
  for (std::size_t s = 0; s < cfg.pixel_counts.size(); ++s) {
    const std::size_t n = cfg.pixel_counts[s];
    const TrialSampler sampler(cfg, load_clean(cfg, n, 1), ReferenceSource::Independent,
                               mix_seed(cfg.seed, kTagSweepPoint + s));
    const auto outcomes = draw_trials(sampler, cfg.trials);
    std::vector<double> umses;
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
      umses.push_back(outcomes[t].umse);
      r.trials.add_row({static_cast<double>(n), static_cast<double>(t), outcomes[t].umse});
    }
    const auto mom = sample_moments(umses);
    r.points.add_row({static_cast<double>(n), *sampler.fixed_mse(), mom.mean, mom.stddev});
    log_n.push_back(std::log(static_cast<double>(n)));
    log_sd.push_back(std::log(mom.stddev));
  }

  r.set("trials", static_cast<double>(cfg.trials));
  r.set("sweep_points", static_cast<double>(cfg.pixel_counts.size()));
  const bool distinct =
      std::any_of(log_n.begin(), log_n.end(), [&](double v) { return v != log_n.front(); });
  if (distinct) {
    const auto [slope, intercept] = fit_line(log_n, log_sd);
    r.set("slope", slope);
    r.set("intercept", intercept);
  } else {
    r.set("slope", kNaN);
    r.set("intercept", kNaN);
  }
  return r;
}

ExperimentReport run_normality(const ExperimentConfig& cfg) {
  cfg.validate();
  const ImageGrid clean = cfg.pixel_counts.empty() ? load_clean(cfg, cfg.width, cfg.height)
                                                   : load_clean(cfg, cfg.pixel_counts.front(), 1);
  const TrialSampler sampler(cfg, clean, ReferenceSource::Independent, cfg.seed);
  const auto outcomes = draw_trials(sampler, cfg.trials);

  std::vector<double> umses;
  for (const auto& o : outcomes) umses.push_back(o.umse);
  const auto mom = sample_moments(umses);
  if (!(mom.stddev > 0.0)) throw DegenerateData("uMSE has zero spread across trials");
  std::vector<double> standardized;
  for (double u : umses) standardized.push_back((u - mom.mean) / mom.stddev);

  ExperimentReport r;
  r.kind = ExperimentKind::Normality;
  r.trials.columns = {"trial", "umse", "standardized"};
  for (std::size_t t = 0; t < umses.size(); ++t) {
    r.trials.add_row({static_cast<double>(t), umses[t], standardized[t]});
  }
  r.set("trials", static_cast<double>(cfg.trials));
  r.set("n", static_cast<double>(sampler.pixels_per_trial()));
  r.set("true_mse", *sampler.fixed_mse());
  r.set("mean_umse", mom.mean);
  r.set("std_umse", mom.stddev);
  r.set("ks_distance", ks_distance_to_normal(standardized));
  r.set("skewness", mom.skewness);
  r.set("excess_kurtosis", mom.excess_kurtosis);
  r.set("low_power", cfg.trials < 100 ? 1.0 : 0.0);
  return r;
}

ExperimentReport run_coverage(const ExperimentConfig& cfg) {
  cfg.validate();
  BootstrapConfig boot = cfg.bootstrap.value_or(BootstrapConfig{});
  const TrialSampler sampler(cfg, load_clean(cfg, cfg.width, cfg.height), cfg.references, cfg.seed);

  struct Row {
    double true_mse, umse, lo, hi, psnr_lo, psnr_hi;
  };
  std::vector<Row> rows(cfg.trials);
  detail::parallel_for_index(cfg.trials, [&](std::size_t t) {
    const TrialOutcome o = sampler.draw(t, true);
    BootstrapConfig bc = boot;
    bc.seed = mix_seed(mix_seed(cfg.seed, kTagBootstrap), t);
    const BootstrapResult b = bootstrap_ci(o.use, cfg.peak, bc);
    rows[t] = {o.true_mse, o.umse, b.umse.low, b.umse.high,
               b.upsnr ? b.upsnr->low : kNaN, b.upsnr ? b.upsnr->high : kNaN};
  });

  ExperimentReport r;
  r.kind = ExperimentKind::Coverage;
  r.trials.columns = {"trial", "true_mse", "umse", "ci_low", "ci_high", "covered",
                      "true_psnr", "ci_psnr_low", "ci_psnr_high", "psnr_covered"};
  std::size_t covered = 0, psnr_covered = 0, psnr_defined = 0;
  std::vector<double> widths;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const Row& w = rows[t];
    const bool in = w.lo <= w.true_mse && w.true_mse <= w.hi;
    covered += in;
    const double true_psnr = or_nan(psnr(w.true_mse, cfg.peak));
    double pin = kNaN;
    if (!std::isnan(w.psnr_lo) && !std::isnan(true_psnr)) {
      ++psnr_defined;
      const bool p = w.psnr_lo <= true_psnr && true_psnr <= w.psnr_hi;
      psnr_covered += p;
      pin = p;
    }
    widths.push_back(w.hi - w.lo);
    r.trials.add_row({static_cast<double>(t), w.true_mse, w.umse, w.lo, w.hi,
                      in ? 1.0 : 0.0, true_psnr, w.psnr_lo, w.psnr_hi, pin});
  }
  const double trials = static_cast<double>(cfg.trials);
  const double frac = static_cast<double>(covered) / trials;
  const double nominal = 1.0 - boot.alpha;
  r.set("trials", trials);
  r.set("n", static_cast<double>(sampler.pixels_per_trial()));
  r.set("resamples", static_cast<double>(boot.resamples));
  r.set("alpha", boot.alpha);
  r.set("nominal", nominal);
  r.set("coverage", frac);
  r.set("binomial_se", std::sqrt(frac * (1.0 - frac) / trials));
  r.set("coverage_z", (frac - nominal) / std::sqrt(nominal * (1.0 - nominal) / trials));
  r.set("psnr_coverage", psnr_defined ? static_cast<double>(psnr_covered) /
                                            static_cast<double>(psnr_defined)
                                      : kNaN);
  r.set("mean_interval_width", compensated_mean(widths));
  r.set("true_mse", sampler.fixed_mse());
  return r;
}

ExperimentReport run_avg_baseline_bias(const ExperimentConfig& cfg) {
  cfg.validate();
  const TrialSampler sampler(cfg, load_clean(cfg, cfg.width, cfg.height),
                             ReferenceSource::Independent, cfg.seed);
  const double true_mse = *sampler.fixed_mse();
  const ImageGrid& f = sampler.denoised();
  const double noise_var = mean_noise_variance(cfg.noise, sampler.clean());

  // Typical uMSE error with three references, same fixed denoiser.
  const auto umse_trials = draw_trials(sampler, cfg.trials);
  std::vector<double> umse_abs;
  for (const auto& o : umse_trials) umse_abs.push_back(std::abs(o.umse - true_mse));
  const double umse_err = compensated_mean(umse_abs);

  ExperimentReport r;
  r.kind = ExperimentKind::AvgBaselineBias;
  r.trials.columns = {"m", "trial", "mse_avg", "deviation", "umse_abs_error"};
  r.points.columns = {"m", "mean_deviation", "se", "analytic_bias", "z", "mean_abs_error"};

  std::optional<double> matching_m;
  double worst_z = 0.0;
  for (std::size_t k = 0; k < cfg.m_values.size(); ++k) {
    const std::size_t m = cfg.m_values[k];
    std::vector<double> dev(cfg.trials);
    detail::parallel_for_index(cfg.trials, [&](std::size_t t) {
      const std::uint64_t s = mix_seed(mix_seed(cfg.seed, kTagAvgRefs + k), t);
      const auto refs = make_noisy_frames(sampler.clean(), cfg.noise, m, s);
      dev[t] = mse_avg(refs, f) - true_mse;
    });
    std::vector<double> abs_dev;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      abs_dev.push_back(std::abs(dev[t]));
      r.trials.add_row({static_cast<double>(m), static_cast<double>(t), dev[t] + true_mse, dev[t],
                        umse_abs[t]});
    }
    const double bias = compensated_mean(dev);
    const double se = standard_error(dev);
    const double analytic = noise_var / static_cast<double>(m);
    const double z = se > 0.0 ? (bias - analytic) / se : kNaN;
    const double mean_abs = compensated_mean(abs_dev);
    r.points.add_row({static_cast<double>(m), bias, se, analytic, z, mean_abs});
    if (!std::isnan(z)) worst_z = std::max(worst_z, std::abs(z));
    if (!matching_m && mean_abs <= umse_err) matching_m = static_cast<double>(m);
  }

  r.set("trials", static_cast<double>(cfg.trials));
  r.set("n", static_cast<double>(sampler.pixels_per_trial()));
  r.set("true_mse", true_mse);
  r.set("noise_variance", noise_var);
  r.set("umse_mean_abs_error", umse_err);
  r.set("max_abs_z", worst_z);
  r.set("matching_m", matching_m);
  r.set("analytic_matching_m", umse_err > 0.0 ? noise_var / umse_err : kNaN);
  return r;
}

ExperimentReport run_subsampling_bias_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const ReferenceSource source = cfg.references == ReferenceSource::Independent
                                     ? ReferenceSource::SubsampleDeterministic
                                     : cfg.references;
  const ImageGrid base = crop_to_even(load_clean(cfg, cfg.width, cfg.height));

  ExperimentReport r;
  r.kind = ExperimentKind::SubsamplingBiasSweep;
  r.trials.columns = {"smoothing_sigma", "trial", "true_mse", "umse", "abs_error"};
  r.points.columns = {"smoothing_sigma", "relative_rmse", "median_abs_error", "mean_error", "se",
                      "z"};

  std::vector<double> rel, med;
  for (double level : cfg.smoothing_levels) {
    const ImageGrid clean = level > 0.0 ? gaussian_smooth(base, level) : base;
    // Same seed at every level: the sweep compares levels under common noise.
    const TrialSampler sampler(cfg, clean, source, cfg.seed);
    const auto outcomes = draw_trials(sampler, cfg.trials);
    std::vector<double> err, abs_err;
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
      const auto& o = outcomes[t];
      err.push_back(o.umse - o.true_mse);
      abs_err.push_back(std::abs(o.umse - o.true_mse));
      r.trials.add_row({level, static_cast<double>(t), o.true_mse, o.umse, abs_err.back()});
    }
    const double rr = reference_relative_rmse(clean);
    const double md = median(abs_err);
    const double mean_err = compensated_mean(err);
    const double se = standard_error(err);
    r.points.add_row({level, rr, md, mean_err, se, se > 0.0 ? mean_err / se : kNaN});
    rel.push_back(rr);
    med.push_back(md);
  }

  auto non_increasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i] > v[i - 1]) return 0.0;
    }
    return 1.0;
  };
  r.set("trials", static_cast<double>(cfg.trials));
  r.set("sweep_points", static_cast<double>(cfg.smoothing_levels.size()));
  r.set("relative_rmse_non_increasing", non_increasing(rel));
  r.set("median_abs_error_non_increasing", non_increasing(med));
  return r;
}

ExperimentReport run_lag_correlation(const ExperimentConfig& cfg) {
  cfg.validate();
  const ImageGrid clean = load_clean(cfg, cfg.width, cfg.height);
  auto frames = make_noisy_frames(clean, cfg.noise, cfg.frames, cfg.seed);
  for (auto& f : frames) f = cfg.denoiser.apply(f);
  const auto corr = lag_correlation(frames, cfg.max_lag, cfg.axis);

  ExperimentReport r;
  r.kind = ExperimentKind::LagCorrelation;
  r.trials.columns = {"lag", "correlation", "pairs", "band"};
  const std::size_t w = clean.width();
  const std::size_t h = clean.height();
  for (std::size_t j = 1; j <= corr.size(); ++j) {
    const std::size_t pairs =
        cfg.frames * (cfg.axis == Axis::Horizontal ? h * (w - j) : (h - j) * w);
    r.trials.add_row({static_cast<double>(j), corr[j - 1], static_cast<double>(pairs),
                      4.0 / std::sqrt(static_cast<double>(pairs))});
  }
  r.set("frames", static_cast<double>(cfg.frames));
  r.set("max_lag", static_cast<double>(cfg.max_lag));
  r.set("lag1_correlation", corr.front());
  return r;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::Unbiasedness: return run_unbiasedness(cfg);
    case ExperimentKind::ConsistencySlope: return run_consistency_slope(cfg);
    case ExperimentKind::Normality: return run_normality(cfg);
    case ExperimentKind::Coverage: return run_coverage(cfg);
    case ExperimentKind::AvgBaselineBias: return run_avg_baseline_bias(cfg);
    case ExperimentKind::SubsamplingBiasSweep: return run_subsampling_bias_sweep(cfg);
    case ExperimentKind::LagCorrelation: return run_lag_correlation(cfg);
  }
  throw InvalidArgument("unknown experiment kind");
}

}  // namespace umse
