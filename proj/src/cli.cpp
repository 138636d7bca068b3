#include "umse/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>

#include "umse/bootstrap.hpp"
#include "umse/csv.hpp"
#include "umse/errors.hpp"
#include "umse/experiments.hpp"
#include "umse/metrics.hpp"
#include "umse/patterns.hpp"
#include "umse/raster_io.hpp"
#include "umse/subsample.hpp"
#include "umse/synth.hpp"

namespace umse {

namespace {

namespace fs = std::filesystem;

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message) : Error("usage", message) {}
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<ImageGrid> read_list(const std::string& text) {
  std::vector<ImageGrid> out;
  for (const auto& p : split_list(text)) out.push_back(read_image(p));
  return out;
}

const char* extension(RasterFormat f) { return f == RasterFormat::F32 ? ".umf" : ".pgm"; }

// ---------------------------------------------------------------- metrics

struct MetricsArgs {
  std::string denoised, ref_a, ref_b, ref_c, input, noisy, clean, avg_refs, subsample;
  std::optional<double> peak;
  std::optional<std::size_t> bootstrap;
  double alpha = 0.05;
  std::uint64_t seed = 0;
};

const std::vector<std::string> kUnsupervisedHeader = {
    "image",       "n",           "peak",          "umse",        "upsnr",
    "valid",       "ci_umse_low", "ci_umse_high",  "ci_upsnr_low", "ci_upsnr_high",
    "bootstrap_k", "alpha",       "upsnr_excluded"};

void write_unsupervised_row(std::ostream& out, const std::string& label, std::size_t n,
                            double peak, std::optional<double> u, std::optional<double> p,
                            const std::vector<double>* use, const MetricsArgs& a) {
  std::vector<std::string> row{label,
                               std::to_string(n),
                               format_number(peak),
                               format_number(u),
                               format_number(p),
                               p ? "true" : "false"};
  if (a.bootstrap && use) {
    BootstrapConfig cfg{*a.bootstrap, a.alpha, a.seed};
    const BootstrapResult b = bootstrap_ci(*use, peak, cfg);
    row.push_back(format_number(b.umse.low));
    row.push_back(format_number(b.umse.high));
    row.push_back(b.upsnr ? format_number(b.upsnr->low) : "");
    row.push_back(b.upsnr ? format_number(b.upsnr->high) : "");
    row.push_back(std::to_string(*a.bootstrap));
    row.push_back(format_number(a.alpha));
    row.push_back(std::to_string(b.upsnr_excluded));
  } else {
    row.insert(row.end(), 7, "");
  }
  write_csv_row(out, row);
}

void emit_dataset(std::ostream& out, const std::vector<ReferenceSet>& refs,
                  const std::vector<ImageGrid>& denoised, const MetricsArgs& a) {
  const double peak = *a.peak;
  const DatasetEvaluation ev = evaluate_dataset(refs, denoised, peak);
  write_csv_row(out, kUnsupervisedHeader);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < refs.size(); ++k) {
    const std::size_t n = ev.per_image_umse[k].n;
    const std::vector<double> use(ev.pooled_use.begin() + static_cast<std::ptrdiff_t>(offset),
                                  ev.pooled_use.begin() + static_cast<std::ptrdiff_t>(offset + n));
    offset += n;
    write_unsupervised_row(out, std::to_string(k), n, peak, ev.per_image_umse[k].value,
                           ev.per_image_upsnr[k].value, &use, a);
  }
  if (refs.size() > 1) {
    write_unsupervised_row(out, "pooled", ev.pooled_umse.n, peak, ev.pooled_umse.value,
                           ev.pooled_upsnr.value, &ev.pooled_use, a);
    write_unsupervised_row(out, "mean_db", ev.pooled_umse.n, peak, std::nullopt, ev.mean_upsnr_db,
                           nullptr, a);
  }
}

int cmd_metrics(const MetricsArgs& a, std::ostream& out) {
  if (a.denoised.empty()) throw UsageError("metrics requires --denoised");

  if (!a.avg_refs.empty()) {
    const auto refs = read_list(a.avg_refs);
    const ImageGrid f = read_image(a.denoised);
    const double value = mse_avg(refs, f);
    const auto p = a.peak ? psnr(value, *a.peak) : std::nullopt;
    write_csv_row(out, {"n", "m", "mse_avg", "peak", "psnr_avg", "valid"});
    write_csv_row(out, {std::to_string(f.size()), std::to_string(refs.size()), format_number(value),
                        format_number(a.peak), format_number(p),
                        a.peak ? (p ? "true" : "false") : ""});
    return 0;
  }

  if (!a.peak) throw UsageError("missing --peak (required for PSNR-family metrics)");

  if (!a.clean.empty()) {
    const auto clean = read_list(a.clean);
    const auto den = read_list(a.denoised);
    if (clean.size() != den.size()) throw UsageError("--clean and --denoised list lengths differ");
    write_csv_row(out, {"image", "n", "peak", "mse", "psnr", "valid"});
    std::vector<double> pooled;
    for (std::size_t k = 0; k < clean.size(); ++k) {
      const auto se = se_per_pixel(clean[k], den[k]);
      pooled.insert(pooled.end(), se.begin(), se.end());
      const double m = mean(se);
      const auto p = psnr(m, *a.peak);
      write_csv_row(out, {std::to_string(k), std::to_string(se.size()), format_number(*a.peak),
                          format_number(m), format_number(p), p ? "true" : "false"});
    }
    if (clean.size() > 1) {
      const double m = mean(pooled);
      const auto p = psnr(m, *a.peak);
      write_csv_row(out, {"pooled", std::to_string(pooled.size()), format_number(*a.peak),
                          format_number(m), format_number(p), p ? "true" : "false"});
    }
    return 0;
  }

  if (!a.noisy.empty()) {
    if (a.subsample.empty()) throw UsageError("--noisy requires --subsample det|rand");
    SubsampleMode mode;
    if (a.subsample == "det") mode = SubsampleMode::Deterministic;
    else if (a.subsample == "rand") mode = SubsampleMode::Randomized;
    else throw UsageError("--subsample must be det or rand");
    const ImageGrid noisy = read_image(a.noisy);
    const SubsampleOutput dec = spatial_subsample(crop_to_even(noisy), mode, a.seed);
    // A full-resolution denoised image is sampled at the Y sites; a
    // half-resolution one is taken to be the denoised Y sub-image.
    ImageGrid f = read_image(a.denoised);
    if (f.same_shape(noisy)) f = gather_by_assignment(crop_to_even(f), dec.assignment, SubRole::Y);
    emit_dataset(out, {dec.as_reference_set()}, {f}, a);
    return 0;
  }

  if (a.ref_a.empty() || a.ref_b.empty() || a.ref_c.empty()) {
    throw UsageError("metrics needs --ref-a/--ref-b/--ref-c, --noisy, --clean or --avg-refs");
  }
  const auto den = read_list(a.denoised);
  const auto ra = read_list(a.ref_a);
  const auto rb = read_list(a.ref_b);
  const auto rc = read_list(a.ref_c);
  const auto ry = a.input.empty() ? den : read_list(a.input);
  if (ra.size() != den.size() || rb.size() != den.size() || rc.size() != den.size() ||
      ry.size() != den.size()) {
    throw UsageError("reference and denoised lists must have equal lengths");
  }
  std::vector<ReferenceSet> refs;
  for (std::size_t k = 0; k < den.size(); ++k) refs.emplace_back(ry[k], ra[k], rb[k], rc[k]);
  emit_dataset(out, refs, den, a);
  return 0;
}

// --------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string clean, pattern, model, out_dir, format = "f32";
  std::size_t width = 128, height = 128, frames = 0;
  std::uint64_t seed = 0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  if (a.clean.empty() == a.pattern.empty()) throw UsageError("give exactly one of --clean or --pattern");
  const NoiseModel model = NoiseModel::parse(a.model);
  const RasterFormat fmt = parse_raster_format(a.format);
  const ImageGrid clean =
      a.clean.empty() ? make_pattern(a.pattern, a.width, a.height, a.seed) : read_image(a.clean);

  std::vector<std::pair<std::string, const ImageGrid*>> files;
  std::vector<ImageGrid> frames;
  std::optional<ReferenceSet> refs;
  if (!a.pattern.empty()) files.emplace_back("clean", &clean);
  if (a.frames > 0) {
    frames = make_noisy_frames(clean, model, a.frames, a.seed);
    for (std::size_t j = 0; j < frames.size(); ++j) {
      char name[32];
      std::snprintf(name, sizeof name, "frame_%03zu", j);
      files.emplace_back(name, &frames[j]);
    }
  } else {
    refs.emplace(make_reference_set(clean, model, a.seed));
    files.emplace_back("y", &refs->input_y);
    files.emplace_back("a", &refs->ref_a);
    files.emplace_back("b", &refs->ref_b);
    files.emplace_back("c", &refs->ref_c);
  }

  // Encode everything before touching the filesystem so a format rejection
  // leaves no partial output.
  std::vector<std::string> blobs;
  for (const auto& [role, grid] : files) blobs.push_back(encode_image(*grid, fmt));
  fs::create_directories(a.out_dir);
  write_csv_row(out, {"role", "path"});
  for (std::size_t k = 0; k < files.size(); ++k) {
    const fs::path p = fs::path(a.out_dir) / (files[k].first + extension(fmt));
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write '" + p.string() + "'");
    f.write(blobs[k].data(), static_cast<std::streamsize>(blobs[k].size()));
    if (!f) throw IoError("short write to '" + p.string() + "'");
    write_csv_row(out, {files[k].first, p.string()});
  }
  return 0;
}

// -------------------------------------------------------------- subsample

struct SubsampleArgs {
  std::string input, mode = "det", out_dir, format = "f32";
  std::uint64_t seed = 0;
  bool crop = false;
};

int cmd_subsample(const SubsampleArgs& a, std::ostream& out) {
  SubsampleMode mode;
  if (a.mode == "det") mode = SubsampleMode::Deterministic;
  else if (a.mode == "rand") mode = SubsampleMode::Randomized;
  else throw UsageError("--mode must be det or rand");
  const RasterFormat fmt = parse_raster_format(a.format);
  ImageGrid img = read_image(a.input);
  if (a.crop) img = crop_to_even(img);
  const SubsampleOutput dec = spatial_subsample(img, mode, a.seed);

  const std::pair<const char*, SubRole> roles[] = {
      {"sub_y", SubRole::Y}, {"sub_a", SubRole::A}, {"sub_b", SubRole::B}, {"sub_c", SubRole::C}};
  std::vector<std::string> blobs;
  for (const auto& [name, role] : roles) blobs.push_back(encode_image(dec.sub(role), fmt));

  fs::create_directories(a.out_dir);
  write_csv_row(out, {"role", "path"});
  for (std::size_t k = 0; k < 4; ++k) {
    const fs::path p = fs::path(a.out_dir) / (std::string(roles[k].first) + extension(fmt));
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write '" + p.string() + "'");
    f.write(blobs[k].data(), static_cast<std::streamsize>(blobs[k].size()));
    write_csv_row(out, {roles[k].first, p.string()});
  }
  const fs::path csv = fs::path(a.out_dir) / "assignment.csv";
  std::ofstream f(csv, std::ios::trunc);
  if (!f) throw IoError("cannot write '" + csv.string() + "'");
  write_csv_row(f, {"block", "block_row", "block_col", "y", "a", "b", "c"});
  const std::size_t bw = dec.sub_y.width();
  for (std::size_t i = 0; i < dec.assignment.size(); ++i) {
    const auto& p = dec.assignment[i].position;
    write_csv_row(f, {std::to_string(i), std::to_string(i / bw), std::to_string(i % bw),
                      std::to_string(p[0]), std::to_string(p[1]), std::to_string(p[2]),
                      std::to_string(p[3])});
  }
  write_csv_row(out, {"assignment", csv.string()});
  return 0;
}

// ------------------------------------------------------------- experiment

int cmd_experiment(const std::string& config, const std::string& out_dir, std::ostream& out) {
  const ExperimentConfig cfg = ExperimentConfig::load(config);
  const ExperimentReport report = run_experiment(cfg);
  write_report(report, out_dir);
  std::ifstream summary(fs::path(out_dir) / "summary.csv");
  out << summary.rdbuf();
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unsupervised denoising metrics (uMSE / uPSNR) toolkit", "umse"};
  app.require_subcommand(1);

  MetricsArgs m;
  auto* metrics = app.add_subcommand("metrics", "Compute uMSE/uPSNR, MSE/PSNR or MSE_avg as CSV");
  metrics->add_option("--denoised", m.denoised, "Denoised image(s), comma separated");
  metrics->add_option("--ref-a", m.ref_a, "Reference a image(s)");
  metrics->add_option("--ref-b", m.ref_b, "Reference b image(s)");
  metrics->add_option("--ref-c", m.ref_c, "Reference c image(s)");
  metrics->add_option("--input", m.input, "Noisy input y image(s) (informational)");
  metrics->add_option("--noisy", m.noisy, "Noisy image to decompose by spatial subsampling");
  metrics->add_option("--subsample", m.subsample, "Subsampling mode: det or rand");
  metrics->add_option("--clean", m.clean, "Clean image(s) for supervised MSE/PSNR");
  metrics->add_option("--avg-refs", m.avg_refs, "Comma separated references for MSE_avg");
  metrics->add_option("--peak", m.peak, "Peak value M for PSNR-family metrics");
  metrics->add_option("--bootstrap", m.bootstrap, "Bootstrap resamples K")->check(CLI::Range(2, 100000000));
  metrics->add_option("--alpha", m.alpha, "Bootstrap alpha")->check(CLI::Range(0.0, 1.0));
  metrics->add_option("--seed", m.seed, "Seed for bootstrap and randomized subsampling");

  SimulateArgs s;
  auto* simulate = app.add_subcommand("simulate", "Write a simulated reference set or noisy frames");
  simulate->add_option("--clean", s.clean, "Clean image file");
  simulate->add_option("--pattern", s.pattern, "Builtin clean pattern id");
  simulate->add_option("--width", s.width, "Pattern width");
  simulate->add_option("--height", s.height, "Pattern height");
  simulate->add_option("--model", s.model, "gaussian:<sigma> or poisson")->required();
  simulate->add_option("--seed", s.seed, "Master seed");
  simulate->add_option("--frames", s.frames, "Write this many noisy frames instead of y/a/b/c");
  simulate->add_option("--format", s.format, "f32, pgm8 or pgm16");
  simulate->add_option("--out-dir", s.out_dir, "Output directory")->required();

  SubsampleArgs ss;
  auto* subsample = app.add_subcommand("subsample", "Spatially decompose an image into four sub-images");
  subsample->add_option("--input", ss.input, "Input image")->required();
  subsample->add_option("--mode", ss.mode, "det or rand");
  subsample->add_option("--seed", ss.seed, "Seed for rand mode");
  subsample->add_option("--format", ss.format, "f32, pgm8 or pgm16");
  subsample->add_flag("--crop", ss.crop, "Crop odd dimensions instead of failing");
  subsample->add_option("--out-dir", ss.out_dir, "Output directory")->required();

  std::string config, exp_out;
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment from a config file");
  experiment->add_option("--config", config, "Experiment config file")->required();
  experiment->add_option("--out-dir", exp_out, "Report directory")->required();

  std::vector<std::string> argv_store{"umse"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << '\n';
    return 2;
  }

  try {
    if (metrics->parsed()) return cmd_metrics(m, out);
    if (simulate->parsed()) return cmd_simulate(s, out);
    if (subsample->parsed()) return cmd_subsample(ss, out);
    if (experiment->parsed()) return cmd_experiment(config, exp_out, out);
  } catch (const UsageError& e) {
    err << "error: usage: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace umse
