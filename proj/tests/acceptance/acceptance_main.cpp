// Acceptance suite: one PASS/FAIL line per criterion. Optional arguments
// select a subset of criteria by number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "umse/bootstrap.hpp"
#include "umse/cli.hpp"
#include "umse/experiments.hpp"
#include "umse/metrics.hpp"
#include "umse/patterns.hpp"
#include "umse/random.hpp"
#include "umse/subsample.hpp"
#include "umse/synth.hpp"

namespace umse {
namespace {

namespace fs = std::filesystem;

// Accumulates named checks; the criterion passes iff all of them do.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
    ++count_;
  }
  void near_rel(double got, double want, double tol, const std::string& what) {
    const double scale = std::max(std::abs(want), 1.0);
    std::ostringstream s;
    s.precision(17);
    s << what << " got " << got << " want " << want;
    expect(std::abs(got - want) <= tol * scale, s.str());
  }
  void note(const std::string& text) { notes_.push_back(text); }

  bool passed() const { return failures_.empty(); }
  std::string detail() const {
    std::string d = std::to_string(count_ - failures_.size()) + "/" + std::to_string(count_) +
                    " checks";
    for (const auto& n : notes_) d += "; " + n;
    for (const auto& f : failures_) d += "; FAILED " + f;
    return d;
  }

 private:
  std::size_t count_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

ImageGrid row(std::vector<double> v) {
  const std::size_t w = v.size();
  return ImageGrid(w, 1, std::move(v));
}

void criterion_exact(Checks& c) {
  constexpr double tol = 1e-12;
  c.near_rel(mse(row({1, 3}), row({2, 1})), 2.5, tol, "mse example");
  const auto se = se_per_pixel(row({1, 3}), row({2, 1}));
  c.expect(se.size() == 2, "se size");
  c.near_rel(se[0], 1.0, tol, "se[0]");
  c.near_rel(se[1], 4.0, tol, "se[1]");
  c.near_rel(se_per_pixel(row({0}), row({3}))[0], 9.0, tol, "single pixel se");

  const ImageGrid y = row({1, 1});
  const ReferenceSet refs(y, row({4, 0}), row({2, 2}), row({0, 0}));
  c.near_rel(umse(refs, row({1, 1})), 3.0, tol, "umse example");
  const auto use = use_per_pixel(refs, row({1, 1}));
  c.near_rel(use[0], 7.0, tol, "use[0]");
  c.near_rel(use[1], -1.0, tol, "use[1]");
  const ReferenceSet single(row({0}), row({0}), row({0}), row({2}));
  c.near_rel(use_per_pixel(single, row({0}))[0], -2.0, tol, "negative use");
  c.near_rel(noise_variance_estimate(row({2, 2}), row({0, 0})), 2.0, tol, "correction term");

  c.near_rel(psnr(65.025, 255.0).value_or(NAN), 30.0, tol, "psnr example");
  const auto up = upsnr(refs, row({1, 1}), 255.0);
  c.expect(up.valid && up.value, "upsnr valid");
  c.near_rel(up.value.value_or(NAN), 10.0 * std::log10(255.0 * 255.0 / 3.0), tol, "upsnr example");
  const auto degenerate = upsnr(ReferenceSet(y, y, y, y), y, 255.0);
  c.expect(!degenerate.valid && !degenerate.value, "upsnr absent at zero umse");

  const std::vector<ImageGrid> two{row({2}), row({4})};
  c.near_rel(mse_avg(two, row({0})), 9.0, tol, "mse_avg m=2");

  const auto sub = spatial_subsample(ImageGrid(2, 2, {1, 2, 3, 4}), SubsampleMode::Deterministic, 0);
  c.expect(sub.sub_y.pixels()[0] == 1 && sub.sub_a.pixels()[0] == 3 && sub.sub_b.pixels()[0] == 2 &&
               sub.sub_c.pixels()[0] == 4,
           "2x2 subsample");

  const std::vector<double> sorted{1, 2, 3, 4};
  c.near_rel(empirical_quantile(sorted, 0.25), 1.75, tol, "type-7 quantile");
  const std::vector<double> zero_two{0, 2};
  const auto ci = bootstrap_ci(zero_two, 255.0, {20000, 0.5, 1});
  c.expect(ci.umse.low >= 0 && ci.umse.high <= 2 && ci.umse.low <= 1 && ci.umse.high >= 1,
           "bootstrap interquartile interval of {0, 2}");
}

void criterion_unbiasedness(Checks& c) {
  ExperimentConfig g;
  g.kind = ExperimentKind::Unbiasedness;
  g.clean_source = "texture";
  g.width = g.height = 128;
  g.noise = NoiseModel::gaussian(55.0);
  g.denoiser = DenoiserSpec::parse("gaussian:2");
  g.trials = 10000;
  g.seed = 1;
  const auto rg = run_unbiasedness(g);
  const double zg = rg.get("z").value_or(NAN);
  c.expect(std::abs(zg) <= 4.0, "gaussian |z| <= 4");
  c.note("gaussian MSE " + fmt("%.3f", *rg.get("true_mse")) + " mean uMSE " +
         fmt("%.3f", *rg.get("mean_umse")) + " z " + fmt("%.3f", zg));

  ExperimentConfig p = g;
  p.clean_source = "constant:100";
  p.width = p.height = 64;
  p.noise = NoiseModel::poisson();
  const auto rp = run_unbiasedness(p);
  const double zp = rp.get("z").value_or(NAN);
  c.expect(std::abs(zp) <= 4.0, "poisson |z| <= 4");
  c.note("poisson z " + fmt("%.3f", zp));
}

void criterion_slope(Checks& c) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::ConsistencySlope;
  cfg.clean_source = "texture";
  cfg.noise = NoiseModel::gaussian(55.0);
  cfg.denoiser = DenoiserSpec::parse("gaussian:2");
  cfg.pixel_counts = {100, 1000, 10000, 100000};
  cfg.trials = 2000;
  cfg.seed = 2;
  const auto r = run_consistency_slope(cfg);
  const double slope = r.get("slope").value_or(NAN);
  c.expect(slope >= -0.55 && slope <= -0.45, "slope in [-0.55, -0.45]");
  c.note("slope " + fmt("%.4f", slope));
}

void criterion_normality(Checks& c) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Normality;
  cfg.clean_source = "texture";
  cfg.noise = NoiseModel::gaussian(55.0);
  cfg.trials = 10000;
  cfg.seed = 3;
  cfg.pixel_counts = {1000};
  const double ks_large = run_normality(cfg).get("ks_distance").value_or(NAN);
  cfg.pixel_counts = {20};
  const double ks_small = run_normality(cfg).get("ks_distance").value_or(NAN);
  c.expect(ks_large < 0.02, "KS(n=1000) < 0.02");
  c.expect(ks_small > ks_large, "KS(n=20) > KS(n=1000)");
  c.note("KS n=1000 " + fmt("%.4f", ks_large) + ", n=20 " + fmt("%.4f", ks_small));
}

void criterion_coverage(Checks& c) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Coverage;
  cfg.clean_source = "texture";
  cfg.width = cfg.height = 64;
  cfg.noise = NoiseModel::gaussian(55.0);
  cfg.denoiser = DenoiserSpec::parse("gaussian:2");
  cfg.trials = 1000;
  cfg.bootstrap = BootstrapConfig{1000, 0.05, 0};
  cfg.seed = 4;
  const auto r = run_coverage(cfg);
  const double cov = r.get("coverage").value_or(NAN);
  c.expect(cov >= 0.93 && cov <= 0.97, "coverage in [0.93, 0.97]");
  c.note("coverage " + fmt("%.3f", cov) + " uPSNR coverage " +
         fmt("%.3f", r.get("psnr_coverage").value_or(NAN)));
}

void criterion_avg_bias(Checks& c) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::AvgBaselineBias;
  cfg.clean_source = "texture";
  cfg.width = cfg.height = 64;
  cfg.noise = NoiseModel::gaussian(15.0);
  cfg.denoiser = DenoiserSpec::parse("gaussian:1");
  cfg.m_values = {1, 3, 10, 100};
  cfg.trials = 400;
  cfg.seed = 5;
  const auto r = run_avg_baseline_bias(cfg);
  const double expected[] = {225.0, 75.0, 22.5, 2.25};
  std::string zs = "z";
  for (std::size_t k = 0; k < r.points.rows.size(); ++k) {
    const auto& p = r.points.rows[k];
    c.near_rel(p[3], expected[k], 1e-12, "analytic bias m=" + fmt("%.0f", p[0]));
    c.expect(std::abs(p[4]) <= 3.0, "bias within 3 SE at m=" + fmt("%.0f", p[0]));
    zs += " " + fmt("%.2f", p[4]);
  }
  c.expect(r.points.rows.size() == 4, "four m values");
  c.note(zs);
}

void criterion_correction(Checks& c) {
  const std::size_t side = 1000;  // n = 10^6
  const ImageGrid tex = make_pattern("texture", side, side, 6);
  const auto g = make_reference_set(tex, NoiseModel::gaussian(55.0), 7);
  const double vg = noise_variance_estimate(g.ref_b, g.ref_c);
  c.expect(std::abs(vg / 3025.0 - 1.0) <= 0.01, "gaussian within 1% of sigma^2");
  const auto p = make_reference_set(ImageGrid(side, side, 100.0), NoiseModel::poisson(), 8);
  const double vp = noise_variance_estimate(p.ref_b, p.ref_c);
  c.expect(std::abs(vp / 100.0 - 1.0) <= 0.01, "poisson within 1% of lambda");
  c.note("gaussian " + fmt("%.2f", vg) + " poisson " + fmt("%.3f", vp));
}

void criterion_sweep(Checks& c) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::SubsamplingBiasSweep;
  cfg.clean_source = "texture:1:128:40";
  cfg.width = cfg.height = 128;
  cfg.noise = NoiseModel::gaussian(20.0);
  cfg.smoothing_levels = {0.0, 1.0, 2.0, 4.0};
  cfg.trials = 1000;
  cfg.seed = 9;
  const auto tex = run_subsampling_bias_sweep(cfg);
  c.expect(tex.get("relative_rmse_non_increasing") == 1.0, "texture relative RMSE non-increasing");
  c.expect(tex.get("median_abs_error_non_increasing") == 1.0,
           "texture median |error| non-increasing");
  std::string rel = "texture rel RMSE", med = "median |err|";
  for (const auto& p : tex.points.rows) {
    rel += " " + fmt("%.4g", p[1]);
    med += " " + fmt("%.4g", p[2]);
  }
  c.note(rel);
  c.note(med);

  cfg.clean_source = "constant:128";
  const auto flat = run_subsampling_bias_sweep(cfg);
  std::string zs = "constant z";
  for (const auto& p : flat.points.rows) {
    c.expect(p[1] == 0.0, "constant relative RMSE is 0");
    c.expect(std::abs(p[5]) <= 4.0, "constant |z| <= 4 at sigma_s=" + fmt("%g", p[0]));
    zs += " " + fmt("%.2f", p[5]);
  }
  c.note(zs);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void criterion_invariants(Checks& c) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> value(-100.0, 100.0);
  std::size_t partition_failures = 0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t w = 2 * (1 + rng() % 8), h = 2 * (1 + rng() % 8);
    std::vector<double> px(w * h);
    for (double& v : px) v = value(rng);
    const ImageGrid img(w, h, px);
    const auto mode = t % 2 ? SubsampleMode::Randomized : SubsampleMode::Deterministic;
    const auto dec = spatial_subsample(img, mode, rng());
    // Every pixel appears in exactly one sub-image, once, at its own block.
    std::vector<int> hits(w * h, 0);
    bool ok = true;
    for (std::size_t b = 0; b < dec.assignment.size(); ++b) {
      const std::size_t br = b / (w / 2), bc = b % (w / 2);
      const auto& pos = dec.assignment[b].position;
      for (int role = 0; role < 4; ++role) {
        const std::size_t r = 2 * br + block_row_offset(pos[role]);
        const std::size_t col = 2 * bc + block_col_offset(pos[role]);
        ++hits[r * w + col];
        ok &= dec.sub(static_cast<SubRole>(role)).pixels()[b] == img(r, col);
      }
    }
    ok &= std::all_of(hits.begin(), hits.end(), [](int n) { return n == 1; });
    partition_failures += !ok;
  }
  c.expect(partition_failures == 0, "partition property on 10^4 images");

  std::size_t symmetry_failures = 0, identity_failures = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t w = 1 + rng() % 40, h = 1 + rng() % 40;
    auto grid = [&] {
      std::vector<double> px(w * h);
      for (double& v : px) v = value(rng);
      return ImageGrid(w, h, std::move(px));
    };
    const ImageGrid y = grid(), a = grid(), b = grid(), cc = grid(), f = grid();
    const ReferenceSet refs(y, a, b, cc), swapped(y, a, cc, b);
    symmetry_failures += umse(refs, f) != umse(swapped, f);
    identity_failures += umse(refs, f) != mean(use_per_pixel(refs, f));
  }
  c.expect(symmetry_failures == 0, "b<->c symmetry");
  c.expect(identity_failures == 0, "uMSE == mean(uSE)");

  std::size_t map_failures = 0;
  for (int t = 0; t < 50; ++t) {
    std::vector<double> use(2000);
    std::normal_distribution<double> d(50.0, 20.0);
    for (double& v : use) v = d(rng);
    const auto r = bootstrap_ci(use, 255.0, {1601, 0.125, rng()});
    map_failures += !r.upsnr || r.upsnr->low != psnr(r.umse.high, 255.0) ||
                    r.upsnr->high != psnr(r.umse.low, 255.0);
  }
  c.expect(map_failures == 0, "uPSNR endpoints are the mapped uMSE endpoints");

  const fs::path dir = fs::temp_directory_path() / "umse_acceptance_cli";
  fs::remove_all(dir);
  bool cli_ok = true;
  for (const char* run : {"one", "two"}) {
    std::ostringstream out, err;
    cli_ok &= run_cli({"simulate", "--pattern", "texture", "--width", "32", "--height", "32",
                       "--model", "gaussian:55", "--seed", "7", "--out-dir", (dir / run).string()},
                      out, err) == 0;
    cli_ok &= run_cli({"subsample", "--input", (dir / run / "y.umf").string(), "--mode", "rand",
                       "--seed", "3", "--out-dir", (dir / run / "sub").string()},
                      out, err) == 0;
  }
  for (const char* name : {"clean.umf", "y.umf", "a.umf", "b.umf", "c.umf", "sub/sub_y.umf",
                           "sub/sub_a.umf", "sub/sub_b.umf", "sub/sub_c.umf", "sub/assignment.csv"}) {
    const auto one = slurp(dir / "one" / name);
    cli_ok &= !one.empty() && one == slurp(dir / "two" / name);
  }
  fs::remove_all(dir);
  c.expect(cli_ok, "CLI byte-determinism under fixed seeds");
}

struct Criterion {
  int number;
  const char* name;
  std::function<void(Checks&)> run;
};

int run(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "exact worked examples", criterion_exact},
      {2, "unbiasedness", criterion_unbiasedness},
      {3, "consistency rate", criterion_slope},
      {4, "asymptotic normality", criterion_normality},
      {5, "bootstrap coverage", criterion_coverage},
      {6, "averaging-baseline bias", criterion_avg_bias},
      {7, "correction-term calibration", criterion_correction},
      {8, "subsampling bias trend", criterion_sweep},
      {9, "structural invariants", criterion_invariants},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& crit : criteria) {
    if (!selected.empty() && !selected.count(crit.number)) continue;
    Checks checks;
    const auto start = std::chrono::steady_clock::now();
    try {
      crit.run(checks);
    } catch (const std::exception& e) {
      checks.expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d %s: %s (%.1f s) %s\n", crit.number, crit.name,
                checks.passed() ? "PASS" : "FAIL", secs, checks.detail().c_str());
    std::fflush(stdout);
    failed += !checks.passed();
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace umse

int main(int argc, char** argv) { return umse::run(argc, argv); }
