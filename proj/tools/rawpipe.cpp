// rawpipe: synthetic camera-pipeline degradations for restoration training data.

#include "rawpipe/color.hpp"
#include "rawpipe/config_json.hpp"
#include "rawpipe/dataset.hpp"
#include "rawpipe/error.hpp"
#include "rawpipe/fit.hpp"
#include "rawpipe/io.hpp"
#include "rawpipe/metrics.hpp"
#include "rawpipe/parallel.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace rawpipe;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

std::optional<std::int64_t> source_date_epoch() {
  const char* v = std::getenv("SOURCE_DATE_EPOCH");
  if (v == nullptr || *v == '\0') return std::nullopt;
  try {
    return std::stoll(v);
  } catch (const std::exception&) {
    throw ValidationError(std::string("SOURCE_DATE_EPOCH is not an integer: ") + v);
  }
}

Json moments_json(const ChannelMoments& m) {
  return {{"mean", m.mean}, {"std", m.stddev}};
}

Json read_json_file(const fs::path& p) {
  const auto bytes = read_file_bytes(p);
  try {
    return Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error& e) {
    throw ValidationError(p.string() + ": " + e.what());
  }
}

// [pipeline output | target | 4x absolute difference], sRGB 8-bit.
void write_diff(const fs::path& path, const LinearImage& out, const LinearImage& target) {
  const Index h = out.rows(), w = out.cols();
  LinearImage strip(h, 3 * w);
  for (int ch = 0; ch < 3; ++ch) {
    strip[ch].block(0, 0, h, w) = out[ch];
    strip[ch].block(0, w, h, w) = target[ch];
    strip[ch].block(0, 2 * w, h, w) = ((out[ch] - target[ch]).abs() * 4.0f).min(1.0f);
  }
  write_png8(path, linear_to_srgb(strip));
}

int cmd_generate(const GenerateOptions& opts) {
  const auto m = generate_dataset(opts);
  for (const auto& w : m.header.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << m.records.size() << " pairs written to " << opts.out_dir.string() << "\n";
  return 0;
}

int cmd_fit(const fs::path& input_path, const fs::path& target_path, const fs::path& space_path,
            const std::optional<fs::path>& out_path, const std::optional<fs::path>& diff_path, int refine,
            double shrink, bool table, int threads) {
  const LinearImage input = read_linear_image(input_path);
  const LinearImage target = read_linear_image(target_path);
  FitSpace space = fit_space_from_json(read_json_file(space_path));
  FitOptions opts;
  opts.keep_table = table;
  opts.threads = threads;
  FitResult res = grid_search_fit(input, target, space, opts);
  for (int i = 0; i < refine; ++i) {
    space = refined_space(res, space, shrink);
    res = grid_search_fit(input, target, space, opts);
  }
  const std::string text = fit_result_to_json(res, space).dump(2) + "\n";
  if (out_path) {
    write_file_bytes(*out_path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  } else {
    std::cout << text;
  }
  if (diff_path) write_diff(*diff_path, run_pipeline(input, res.best_config), target);
  return 0;
}

int cmd_metrics(const fs::path& a_path, const fs::path& b_path, double peak, bool no_normalize,
                bool normalize_output) {
  const LinearImage out = read_linear_image(a_path);
  const LinearImage ref = read_linear_image(b_path);
  MetricReport rep;
  rep.output_moments = channel_moments(out);
  rep.reference_moments = channel_moments(ref);
  LinearImage x = out;
  LinearImage y = ref;
  if (!no_normalize) {
    if (normalize_output) {
      x = tone_normalize(out, ref);
    } else {
      y = tone_normalize(ref, out);
    }
    rep.normalized = true;
  }
  rep.psnr = psnr(x, y, peak);
  rep.ssim = ssim(x, y);
  Json j = {
      {"psnr", rep.psnr.infinite ? Json(nullptr) : Json(rep.psnr.db)},
      {"psnr_infinite", rep.psnr.infinite},
      {"ssim", rep.ssim},
      {"normalized", rep.normalized},
      {"normalization", no_normalize ? "none" : (normalize_output ? "output-to-reference" : "reference-to-output")},
      {"output_moments", moments_json(rep.output_moments)},
      {"reference_moments", moments_json(rep.reference_moments)},
  };
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_bench(const std::string& preset_name, Index patch_size, int count, int threads) {
  const auto r = benchmark_throughput(preset_name, patch_size, count, threads);
  Json j = {
      {"preset", preset_name},
      {"patch_size", r.patch_size},
      {"count", r.count},
      {"threads", r.threads},
      {"single_thread_patches_per_second", r.single_thread_patches_per_second},
      {"all_cores_patches_per_second", r.all_cores_patches_per_second},
      {"single_thread_ms_per_patch", r.single_thread_ms_per_patch},
  };
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rawpipe: camera-pipeline degradation toolkit"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  GenerateOptions gen;
  std::string src, out;
  auto* generate = app.add_subcommand("generate", "Build a paired clean/degraded patch dataset");
  generate->add_option("--src", src, "Directory of clean source photographs")->required();
  generate->add_option("--preset", gen.preset, "awgn, amwgn, full or s7-iso800")->capture_default_str();
  generate->add_option("--patches-per-image", gen.patches_per_image)->capture_default_str();
  generate->add_option("--patch-size", gen.patch_size)->capture_default_str();
  generate->add_option("--seed", gen.seed)->required();
  generate->add_option("--out", out, "Output directory")->required();
  generate->add_option("--epochs", gen.epochs)->capture_default_str();
  generate->add_option("--downsample", gen.downsample)->capture_default_str();
  generate->add_option("--threads", gen.threads, "Worker count, 0 = all cores")->capture_default_str();

  std::string manifest, regen_out;
  int regen_threads = 0;
  auto* regen = app.add_subcommand("regen", "Rewrite every pair listed in a manifest");
  regen->add_option("--manifest", manifest)->required();
  regen->add_option("--out", regen_out, "Output directory (default: next to the manifest)");
  regen->add_option("--threads", regen_threads)->capture_default_str();

  std::string bench_preset = "full";
  Index bench_size = 80;
  int bench_count = 64;
  int bench_threads = 0;
  auto* bench = app.add_subcommand("bench", "Measure patch generation throughput");
  bench->add_option("--preset", bench_preset)->capture_default_str();
  bench->add_option("--patch-size", bench_size)->capture_default_str();
  bench->add_option("--count", bench_count)->capture_default_str();
  bench->add_option("--threads", bench_threads)->capture_default_str();

  std::string fit_input, fit_target, fit_space, fit_out, fit_diff;
  int fit_refine = 0;
  double fit_shrink = 0.5;
  bool fit_table = false;
  int fit_threads = 0;
  auto* fit = app.add_subcommand("fit", "Grid-search tone/color parameters against a target image");
  fit->add_option("--input", fit_input, "Linear input (.rpf) or sRGB image")->required();
  fit->add_option("--target", fit_target, "Target camera JPEG")->required();
  fit->add_option("--space", fit_space, "Fit space JSON")->required();
  fit->add_option("--out", fit_out, "Write the result JSON here instead of stdout");
  fit->add_option("--diff", fit_diff, "Write a side-by-side diff PNG");
  fit->add_option("--refine", fit_refine, "Refinement rounds")->capture_default_str();
  fit->add_option("--shrink", fit_shrink, "Refinement shrink factor")->capture_default_str();
  fit->add_flag("--table", fit_table, "Include the per-candidate loss table");
  fit->add_option("--threads", fit_threads)->capture_default_str();

  std::string met_a, met_b;
  double peak = 1.0;
  bool no_normalize = false;
  bool normalize_output = false;
  auto* metrics = app.add_subcommand("metrics", "PSNR/SSIM of output A against reference B");
  metrics->add_option("A", met_a, "Output image")->required();
  metrics->add_option("B", met_b, "Reference image")->required();
  metrics->add_option("--peak", peak)->capture_default_str();
  metrics->add_flag("--no-normalize", no_normalize, "Compare without moment matching");
  metrics->add_flag("--normalize-output", normalize_output,
                    "Match the output to the reference instead of the reference to the output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*generate) {
      gen.src_dir = src;
      gen.out_dir = out;
      gen.creation_time = source_date_epoch();
      return cmd_generate(gen);
    }
    if (*regen) {
      std::optional<fs::path> dir;
      if (!regen_out.empty()) dir = regen_out;
      regenerate_from_manifest(manifest, dir, regen_threads);
      return 0;
    }
    if (*bench) return cmd_bench(bench_preset, bench_size, bench_count, bench_threads);
    if (*fit) {
      require(fit_refine >= 0, "fit: refine rounds must be non-negative");
      return cmd_fit(fit_input, fit_target, fit_space, fit_out.empty() ? std::nullopt : std::optional<fs::path>(fit_out),
                     fit_diff.empty() ? std::nullopt : std::optional<fs::path>(fit_diff), fit_refine, fit_shrink,
                     fit_table, fit_threads);
    }
    if (*metrics) return cmd_metrics(met_a, met_b, peak, no_normalize, normalize_output);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
