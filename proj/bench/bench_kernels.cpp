// Serial reference kernels against the OpenMP versions. Thread count follows
// OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "umse/bootstrap.hpp"
#include "umse/metrics.hpp"
#include "umse/patterns.hpp"
#include "umse/reference.hpp"
#include "umse/subsample.hpp"
#include "umse/synth.hpp"

namespace {

using namespace umse;

ImageGrid clean_image(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  return make_pattern("texture", side, side, 1);
}

ReferenceSet noisy_refs(const ImageGrid& clean) {
  return make_reference_set(clean, NoiseModel::gaussian(25.0), 2);
}

void set_pixels(benchmark::State& state, std::size_t per_iteration) {
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * per_iteration));
}

void BM_Umse_Parallel(benchmark::State& state) {
  const ImageGrid clean = clean_image(state);
  const ReferenceSet refs = noisy_refs(clean);
  for (auto _ : state) benchmark::DoNotOptimize(umse::umse(refs, clean));
  set_pixels(state, clean.size());
}

void BM_Umse_Serial(benchmark::State& state) {
  const ImageGrid clean = clean_image(state);
  const ReferenceSet refs = noisy_refs(clean);
  for (auto _ : state) benchmark::DoNotOptimize(reference::umse(refs, clean));
  set_pixels(state, clean.size());
}

void BM_GaussianSmooth_Parallel(benchmark::State& state) {
  const ImageGrid clean = clean_image(state);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_smooth(clean, 2.0));
  set_pixels(state, clean.size());
}

void BM_GaussianSmooth_Serial(benchmark::State& state) {
  const ImageGrid clean = clean_image(state);
  for (auto _ : state) benchmark::DoNotOptimize(reference::gaussian_smooth(clean, 2.0));
  set_pixels(state, clean.size());
}

void BM_AddNoise_Parallel(benchmark::State& state) {
  const ImageGrid clean = clean_image(state);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(add_noise(clean, NoiseModel::gaussian(25.0), ++seed));
  set_pixels(state, clean.size());
}

void BM_AddNoise_Serial(benchmark::State& state) {
  const ImageGrid clean = clean_image(state);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::add_noise(clean, NoiseModel::gaussian(25.0), ++seed));
  }
  set_pixels(state, clean.size());
}

void BM_Subsample_Parallel(benchmark::State& state) {
  const ImageGrid clean = clean_image(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spatial_subsample(clean, SubsampleMode::Deterministic, 0));
  }
  set_pixels(state, clean.size());
}

void BM_Subsample_Serial(benchmark::State& state) {
  const ImageGrid clean = clean_image(state);
  for (auto _ : state) benchmark::DoNotOptimize(reference::spatial_subsample_deterministic(clean));
  set_pixels(state, clean.size());
}

std::vector<double> use_values(benchmark::State& state) {
  const ImageGrid clean = clean_image(state);
  return use_per_pixel(noisy_refs(clean), clean);
}

void BM_Bootstrap_Parallel(benchmark::State& state) {
  const auto use = use_values(state);
  const BootstrapConfig cfg{200, 0.05, 3};
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_resample_means(use, cfg));
  set_pixels(state, use.size() * cfg.resamples);
}

void BM_Bootstrap_Serial(benchmark::State& state) {
  const auto use = use_values(state);
  const BootstrapConfig cfg{200, 0.05, 3};
  for (auto _ : state) benchmark::DoNotOptimize(reference::bootstrap_resample_means(use, cfg));
  set_pixels(state, use.size() * cfg.resamples);
}

}  // namespace

BENCHMARK(BM_Umse_Parallel)->Arg(256)->Arg(1024);
BENCHMARK(BM_Umse_Serial)->Arg(256)->Arg(1024);
BENCHMARK(BM_GaussianSmooth_Parallel)->Arg(256)->Arg(1024);
BENCHMARK(BM_GaussianSmooth_Serial)->Arg(256)->Arg(1024);
BENCHMARK(BM_AddNoise_Parallel)->Arg(256)->Arg(1024);
BENCHMARK(BM_AddNoise_Serial)->Arg(256)->Arg(1024);
BENCHMARK(BM_Subsample_Parallel)->Arg(256)->Arg(1024);
BENCHMARK(BM_Subsample_Serial)->Arg(256)->Arg(1024);
BENCHMARK(BM_Bootstrap_Parallel)->Arg(64);
BENCHMARK(BM_Bootstrap_Serial)->Arg(64);

BENCHMARK_MAIN();
