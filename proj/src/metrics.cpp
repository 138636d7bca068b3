#include "umse/metrics.hpp"

#include <cmath>
#include <string>

#include "umse/detail/summation.hpp"
#include "umse/errors.hpp"

namespace umse {

namespace {

inline double use_term(double a, double b, double c, double f) noexcept {
  const double fit = a - f;
  const double diff = b - c;
  return fit * fit - diff * diff / 2.0;
}

void require_matching(const ReferenceSet& refs, const ImageGrid& denoised) {
  require_same_shape(refs.input_y, denoised, "denoised vs references");
}

void require_positive_peak(double peak) {
  if (!(peak > 0.0) || !std::isfinite(peak)) {
    throw InvalidArgument("peak must be a positive finite value, got " + std::to_string(peak));
  }
}

}  // namespace

const char* to_string(MetricKind kind) noexcept {
  switch (kind) {
    case MetricKind::Mse: return "mse";
    case MetricKind::Umse: return "umse";
    case MetricKind::Psnr: return "psnr";
    case MetricKind::Upsnr: return "upsnr";
    case MetricKind::MseAvg: return "mse_avg";
  }
  return "unknown";
}

double mean(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("mean of an empty sequence");
  const double* v = values.data();
  return detail::blocked_sum(values.size(), [v](std::size_t i) { return v[i]; }) /
         static_cast<double>(values.size());
}

double mse(const ImageGrid& clean, const ImageGrid& denoised) {
  require_same_shape(clean, denoised, "mse");
  const double* x = clean.pixels().data();
  const double* f = denoised.pixels().data();
  const std::size_t n = clean.size();
  return detail::blocked_sum(n, [x, f](std::size_t i) {
           const double d = x[i] - f[i];
           return d * d;
         }) /
         static_cast<double>(n);
}

std::vector<double> se_per_pixel(const ImageGrid& clean, const ImageGrid& denoised) {
  require_same_shape(clean, denoised, "se_per_pixel");
  const auto x = clean.pixels();
  const auto f = denoised.pixels();
  std::vector<double> out(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(out.size()); ++i) {
    const double d = x[i] - f[i];
    out[i] = d * d;
  }
  return out;
}

double umse(const ReferenceSet& refs, const ImageGrid& denoised) {
  require_matching(refs, denoised);
  const double* a = refs.ref_a.pixels().data();
  const double* b = refs.ref_b.pixels().data();
  const double* c = refs.ref_c.pixels().data();
  const double* f = denoised.pixels().data();
  const std::size_t n = denoised.size();
  return detail::blocked_sum(n, [=](std::size_t i) { return use_term(a[i], b[i], c[i], f[i]); }) /
         static_cast<double>(n);
}

std::vector<double> use_per_pixel(const ReferenceSet& refs, const ImageGrid& denoised) {
  require_matching(refs, denoised);
  const auto a = refs.ref_a.pixels();
  const auto b = refs.ref_b.pixels();
  const auto c = refs.ref_c.pixels();
  const auto f = denoised.pixels();
  std::vector<double> out(f.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(out.size()); ++i) {
    out[i] = use_term(a[i], b[i], c[i], f[i]);
  }
  return out;
}

double noise_variance_estimate(const ImageGrid& ref_b, const ImageGrid& ref_c) {
  require_same_shape(ref_b, ref_c, "noise_variance_estimate");
  const double* b = ref_b.pixels().data();
  const double* c = ref_c.pixels().data();
  const std::size_t n = ref_b.size();
  return detail::blocked_sum(n, [b, c](std::size_t i) {
           const double d = b[i] - c[i];
           return d * d / 2.0;
         }) /
         static_cast<double>(n);
}

std::optional<double> psnr(double mse_value, double peak) {
  require_positive_peak(peak);
  if (!(mse_value > 0.0)) return std::nullopt;
  return 10.0 * std::log10(peak * peak / mse_value);
}

MetricReport mse_report(const ImageGrid& clean, const ImageGrid& denoised) {
  MetricReport r;
  r.kind = MetricKind::Mse;
  r.value = mse(clean, denoised);
  r.n = clean.size();
  r.valid = true;
  return r;
}

MetricReport psnr_report(const ImageGrid& clean, const ImageGrid& denoised, double peak) {
  require_positive_peak(peak);
  MetricReport r;
  r.kind = MetricKind::Psnr;
  r.value = psnr(mse(clean, denoised), peak);
  r.n = clean.size();
  r.peak = peak;
  r.valid = r.value.has_value();
  return r;
}

MetricReport umse_report(const ReferenceSet& refs, const ImageGrid& denoised) {
  MetricReport r;
  r.kind = MetricKind::Umse;
  r.value = umse(refs, denoised);
  r.n = denoised.size();
  r.valid = true;
  return r;
}

MetricReport upsnr(const ReferenceSet& refs, const ImageGrid& denoised, double peak) {
  require_positive_peak(peak);
  MetricReport r;
  r.kind = MetricKind::Upsnr;
  r.value = psnr(umse(refs, denoised), peak);
  r.n = denoised.size();
  r.peak = peak;
  r.valid = r.value.has_value();
  return r;
}

double mse_avg(std::span<const ImageGrid> references, const ImageGrid& denoised) {
  if (references.empty()) throw InvalidArgument("mse_avg needs at least one reference");
  for (const auto& r : references) require_same_shape(r, denoised, "mse_avg");
  const std::size_t m = references.size();
  const std::size_t n = denoised.size();
  std::vector<const double*> refs(m);
  for (std::size_t j = 0; j < m; ++j) refs[j] = references[j].pixels().data();
  const double* f = denoised.pixels().data();
  const double inv_m = 1.0 / static_cast<double>(m);
  return detail::blocked_sum(n, [&refs, f, inv_m](std::size_t i) {
           detail::CompensatedSum avg;
           for (const double* r : refs) avg.add(r[i]);
           const double d = avg.value() * inv_m - f[i];
           return d * d;
         }) /
         static_cast<double>(n);
}

DatasetEvaluation evaluate_dataset(std::span<const ReferenceSet> refs,
                                   std::span<const ImageGrid> denoised, double peak) {
  if (refs.empty()) throw InvalidArgument("dataset evaluation needs at least one image");
  if (refs.size() != denoised.size()) {
    throw InvalidArgument("dataset has " + std::to_string(refs.size()) + " reference sets but " +
                          std::to_string(denoised.size()) + " denoised images");
  }
  require_positive_peak(peak);

  DatasetEvaluation out;
  bool all_valid = true;
  detail::CompensatedSum db_sum;
  for (std::size_t k = 0; k < refs.size(); ++k) {
    auto use = use_per_pixel(refs[k], denoised[k]);
    MetricReport u;
    u.kind = MetricKind::Umse;
    u.value = mean(use);
    u.n = use.size();
    u.valid = true;
    MetricReport p;
    p.kind = MetricKind::Upsnr;
    p.value = psnr(*u.value, peak);
    p.n = use.size();
    p.peak = peak;
    p.valid = p.value.has_value();
    if (p.valid) {
      db_sum.add(*p.value);
    } else {
      all_valid = false;
    }
    out.pooled_use.insert(out.pooled_use.end(), use.begin(), use.end());
    out.per_image_umse.push_back(u);
    out.per_image_upsnr.push_back(p);
  }

  out.pooled_umse.kind = MetricKind::Umse;
  out.pooled_umse.value = mean(out.pooled_use);
  out.pooled_umse.n = out.pooled_use.size();
  out.pooled_umse.valid = true;

  out.pooled_upsnr.kind = MetricKind::Upsnr;
  out.pooled_upsnr.value = psnr(*out.pooled_umse.value, peak);
  out.pooled_upsnr.n = out.pooled_use.size();
  out.pooled_upsnr.peak = peak;
  out.pooled_upsnr.valid = out.pooled_upsnr.value.has_value();

  if (all_valid) out.mean_upsnr_db = db_sum.value() / static_cast<double>(refs.size());
  return out;
}

}  // namespace umse
