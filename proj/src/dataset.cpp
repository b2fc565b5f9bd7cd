#include "rawpipe/dataset.hpp"

#include "rawpipe/color.hpp"
#include "rawpipe/config_json.hpp"
#include "rawpipe/error.hpp"
#include "rawpipe/io.hpp"
#include "rawpipe/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace rawpipe {

std::uint64_t patch_seed(std::uint64_t master, std::uint64_t source_index, std::uint64_t patch_index,
                         std::uint64_t epoch) {
  return derive_seed(master, {source_index, patch_index, epoch});
}

namespace {

// Crop placement for a source draws from its own stream, apart from the
// per-patch parameter seeds.
constexpr std::uint64_t kPlacementKey = 0x706c6163656d656eULL;

std::uint64_t placement_seed(std::uint64_t master, std::uint64_t source_index) {
  return derive_seed(master, {kPlacementKey, source_index});
}

std::string iso_time(std::int64_t secs) {
  const std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string clean_name(int src, int patch) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "clean/%04d_%02d.rpf", src, patch);
  return buf;
}

std::string degraded_stem(int src, int patch, int epoch) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "degraded/%04d_%02d_e%d", src, patch, epoch);
  return buf;
}

LinearImage load_linear(const fs::path& path, int factor) {
  return downsample(srgb_to_linear(read_image(path)), factor);
}

void write_degraded(const fs::path& root, const ManifestRecord& rec, const LinearImage& out) {
  write_raw_float(root / rec.degraded_path, out);
  write_png8(root / rec.degraded_png_path, linear_to_srgb(out));
}

struct SourceOutcome {
  std::vector<ManifestRecord> records;
  std::optional<std::string> warning;
};

}  // namespace

std::vector<fs::path> list_source_images(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("source directory not found: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") out.push_back(fs::absolute(e.path()).lexically_normal());
  }
  std::sort(out.begin(), out.end());
  return out;
}

DatasetManifest generate_dataset(const GenerateOptions& opts) {
  require(opts.patch_size >= 16, "generate: patch size must be at least 16");
  require(opts.patch_size % 2 == 0, "generate: patch size must be even");
  require(opts.patches_per_image >= 1, "generate: patches per image must be positive");
  require(opts.epochs >= 1, "generate: epochs must be positive");
  require(opts.downsample >= 1, "generate: downsample factor must be positive");
  require(!opts.out_dir.empty(), "generate: output directory required");
  const ParamRanges ranges = preset(opts.preset);

  const auto sources = list_source_images(opts.src_dir);
  require(!sources.empty(), "generate: no images in " + opts.src_dir.string());

  const fs::path root = opts.out_dir;
  std::vector<SourceOutcome> outcomes(sources.size());
  parallel_for(sources.size(), resolve_thread_count(opts.threads), [&](std::size_t s) {
    const fs::path& path = sources[s];
    LinearImage img;
    try {
      img = load_linear(path, opts.downsample);
    } catch (const std::exception& e) {
      outcomes[s].warning = "skipped " + path.filename().string() + ": " + e.what();
      return;
    }
    if (img.rows() < opts.patch_size || img.cols() < opts.patch_size) {
      outcomes[s].warning = "skipped " + path.filename().string() + ": smaller than one patch after downsampling";
      return;
    }
    Rng placement(placement_seed(opts.seed, s));
    const auto patches = extract_patches(img, opts.patches_per_image, opts.patch_size, placement,
                                         path.filename().string());
    for (int p = 0; p < int(patches.size()); ++p) {
      const auto& [spec, clean] = patches[p];
      const std::string clean_path = clean_name(int(s), p);
      write_raw_float(root / clean_path, clean);
      for (int e = 0; e < opts.epochs; ++e) {
        ManifestRecord rec;
        rec.source = path.string();
        rec.source_index = int(s);
        rec.patch_index = p;
        rec.epoch = e;
        rec.patch = spec;
        rec.patch_seed = patch_seed(opts.seed, s, std::uint64_t(p), std::uint64_t(e));
        Rng rng(rec.patch_seed);
        rec.config = sample_params(ranges, rng);
        rec.clean_path = clean_path;
        const std::string stem = degraded_stem(int(s), p, e);
        rec.degraded_path = stem + ".rpf";
        rec.degraded_png_path = stem + ".png";
        write_degraded(root, rec, run_pipeline(clean, rec.config));
        outcomes[s].records.push_back(std::move(rec));
      }
    }
  });

  DatasetManifest m;
  auto& h = m.header;
  h.preset = opts.preset;
  h.master_seed = opts.seed;
  h.patches_per_image = opts.patches_per_image;
  h.patch_size = opts.patch_size;
  h.downsample = opts.downsample;
  h.epochs = opts.epochs;
  h.src_dir = fs::absolute(opts.src_dir).lexically_normal().string();
  const std::int64_t now = opts.creation_time.value_or(
      std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
          .count());
  h.creation_time = iso_time(now);
  for (auto& o : outcomes) {
    if (o.warning) h.warnings.push_back(*o.warning);
    for (auto& r : o.records) m.records.push_back(std::move(r));
  }
  require(!m.records.empty(), "generate: no usable source images in " + opts.src_dir.string());
  h.record_count = m.records.size();
  write_manifest(root / kManifestFileName, m);
  return m;
}

// ---------------------------------------------------------------------------
// Manifest serialization

std::string serialize_manifest(const DatasetManifest& m) {
  const auto& h = m.header;
  Json head = {
      {"type", "header"},
      {"preset", h.preset},
      {"tool_version", h.tool_version},
      {"creation_time", h.creation_time},
      {"master_seed", h.master_seed},
      {"patches_per_image", h.patches_per_image},
      {"patch_size", h.patch_size},
      {"downsample", h.downsample},
      {"epochs", h.epochs},
      {"src_dir", h.src_dir},
      {"record_count", m.records.size()},
      {"warnings", h.warnings},
  };
  std::string out = head.dump() + "\n";
  for (const auto& r : m.records) {
    Json j = {
        {"type", "patch"},
        {"source", r.source},
        {"source_index", r.source_index},
        {"patch_index", r.patch_index},
        {"epoch", r.epoch},
        {"patch", {{"source_id", r.patch.source_id}, {"top", r.patch.top}, {"left", r.patch.left}, {"size", r.patch.size}}},
        {"patch_seed", r.patch_seed},
        {"config", config_to_json(r.config)},
        {"clean", r.clean_path},
        {"degraded", r.degraded_path},
        {"degraded_png", r.degraded_png_path},
    };
    out += j.dump() + "\n";
  }
  return out;
}

namespace {

template <typename T>
T field(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  require(it != j.end(), where + ": missing '" + key + "'");
  try {
    return it->get<T>();
  } catch (const Json::exception&) {
    throw ValidationError(where + ": field '" + key + "' has the wrong type");
  }
}

void check_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    require(known, where + ": unknown key '" + it.key() + "'");
  }
}

void check_relative(const std::string& p, const std::string& where) {
  const fs::path path(p);
  require(!p.empty() && path.is_relative(), where + ": output path must be relative: '" + p + "'");
  for (const auto& part : path) require(part != "..", where + ": output path leaves the dataset: '" + p + "'");
}

}  // namespace

DatasetManifest parse_manifest(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) lines.push_back(line);
    }
  }
  require(!text.empty() && text.back() == '\n', "manifest: truncated (no final newline)");
  require(!lines.empty(), "manifest: empty");

  auto parse_line = [&](std::size_t i) {
    try {
      Json j = Json::parse(lines[i]);
      require(j.is_object(), "manifest line " + std::to_string(i + 1) + ": expected an object");
      return j;
    } catch (const Json::parse_error& e) {
      throw ValidationError("manifest line " + std::to_string(i + 1) + ": " + e.what());
    }
  };

  DatasetManifest m;
  {
    const Json j = parse_line(0);
    const std::string where = "manifest header";
    require(field<std::string>(j, "type", where) == "header", "manifest: first record is not a header");
    check_keys(j,
               {"type", "preset", "tool_version", "creation_time", "master_seed", "patches_per_image",
                "patch_size", "downsample", "epochs", "src_dir", "record_count", "warnings"},
               where);
    auto& h = m.header;
    h.preset = field<std::string>(j, "preset", where);
    h.tool_version = field<std::string>(j, "tool_version", where);
    h.creation_time = field<std::string>(j, "creation_time", where);
    h.master_seed = field<std::uint64_t>(j, "master_seed", where);
    h.patches_per_image = field<int>(j, "patches_per_image", where);
    h.patch_size = field<Index>(j, "patch_size", where);
    h.downsample = field<int>(j, "downsample", where);
    h.epochs = field<int>(j, "epochs", where);
    h.src_dir = field<std::string>(j, "src_dir", where);
    h.record_count = field<std::size_t>(j, "record_count", where);
    h.warnings = field<std::vector<std::string>>(j, "warnings", where);
    require(h.downsample >= 1, where + ": downsample must be positive");
    require(h.patch_size >= 16, where + ": patch size must be at least 16");
  }
  require(lines.size() - 1 == m.header.record_count,
          "manifest: header announces " + std::to_string(m.header.record_count) + " records, found " +
              std::to_string(lines.size() - 1));

  std::set<std::uint64_t> seeds;
  std::set<std::string> outputs;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Json j = parse_line(i);
    const std::string where = "manifest line " + std::to_string(i + 1);
    require(field<std::string>(j, "type", where) == "patch", where + ": expected a patch record");
    check_keys(j,
               {"type", "source", "source_index", "patch_index", "epoch", "patch", "patch_seed", "config", "clean",
                "degraded", "degraded_png"},
               where);
    ManifestRecord r;
    r.source = field<std::string>(j, "source", where);
    r.source_index = field<int>(j, "source_index", where);
    r.patch_index = field<int>(j, "patch_index", where);
    r.epoch = field<int>(j, "epoch", where);
    const Json p = field<Json>(j, "patch", where);
    require(p.is_object(), where + ": 'patch' must be an object");
    check_keys(p, {"source_id", "top", "left", "size"}, where + ".patch");
    r.patch.source_id = field<std::string>(p, "source_id", where);
    r.patch.top = field<Index>(p, "top", where);
    r.patch.left = field<Index>(p, "left", where);
    r.patch.size = field<Index>(p, "size", where);
    r.patch_seed = field<std::uint64_t>(j, "patch_seed", where);
    try {
      r.config = config_from_json(field<Json>(j, "config", where));
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    r.clean_path = field<std::string>(j, "clean", where);
    r.degraded_path = field<std::string>(j, "degraded", where);
    r.degraded_png_path = field<std::string>(j, "degraded_png", where);

    require(fs::path(r.source).is_absolute(), where + ": source path must be absolute");
    require(r.patch.top >= 0 && r.patch.left >= 0 && r.patch.size == m.header.patch_size,
            where + ": patch geometry does not match the header");
    require(seeds.insert(r.patch_seed).second, where + ": duplicate patch seed");
    check_relative(r.clean_path, where);
    check_relative(r.degraded_path, where);
    check_relative(r.degraded_png_path, where);
    require(outputs.insert(r.degraded_path).second && outputs.insert(r.degraded_png_path).second,
            where + ": output path used twice");
    m.records.push_back(std::move(r));
  }
  return m;
}

DatasetManifest read_manifest(const fs::path& path) {
  const auto bytes = read_file_bytes(path);
  return parse_manifest(std::string(bytes.begin(), bytes.end()));
}

void write_manifest(const fs::path& path, const DatasetManifest& m) {
  const std::string text = serialize_manifest(m);
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void regenerate_from_manifest(const fs::path& manifest_path, const std::optional<fs::path>& out_dir,
                              int threads) {
  const auto bytes = read_file_bytes(manifest_path);
  const DatasetManifest m = parse_manifest(std::string(bytes.begin(), bytes.end()));
  const fs::path root = out_dir.value_or(manifest_path.parent_path());

  // Everything is checked before the first write.
  std::map<std::string, std::vector<std::size_t>> by_source;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < m.records.size(); ++i) {
    auto [it, inserted] = by_source.try_emplace(m.records[i].source);
    if (inserted) order.push_back(m.records[i].source);
    it->second.push_back(i);
  }
  std::vector<std::string> missing;
  for (const auto& s : order) {
    std::error_code ec;
    if (!fs::is_regular_file(s, ec)) missing.push_back(s);
  }
  if (!missing.empty()) {
    std::string msg = "regen: missing source image(s):";
    for (const auto& s : missing) msg += " " + s;
    throw ValidationError(msg);
  }

  std::vector<LinearImage> images(order.size());
  parallel_for(order.size(), resolve_thread_count(threads),
               [&](std::size_t k) { images[k] = load_linear(order[k], m.header.downsample); });
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t i : by_source.at(order[k])) {
      const auto& p = m.records[i].patch;
      require(p.top + p.size <= images[k].rows() && p.left + p.size <= images[k].cols(),
              "regen: patch outside source " + order[k]);
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> jobs;  // (source slot, record)
  std::vector<bool> writes_clean(m.records.size(), false);  // one writer per clean file
  std::set<std::string> claimed;
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t i : by_source.at(order[k])) {
      jobs.emplace_back(k, i);
      writes_clean[i] = claimed.insert(m.records[i].clean_path).second;
    }
  }
  parallel_for(jobs.size(), resolve_thread_count(threads), [&](std::size_t j) {
    const auto& rec = m.records[jobs[j].second];
    const LinearImage clean = crop(images[jobs[j].first], rec.patch);
    if (writes_clean[jobs[j].second]) write_raw_float(root / rec.clean_path, clean);
    write_degraded(root, rec, run_pipeline(clean, rec.config));
  });
  if (fs::absolute(root / kManifestFileName) != fs::absolute(manifest_path)) {
    write_file_bytes(root / kManifestFileName, bytes);
  }
}

// ---------------------------------------------------------------------------
// Throughput

namespace {

LinearImage synthetic_source(Index size) {
  LinearImage img(size, size);
  Rng rng(0x5eed);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int ch = 0; ch < 3; ++ch) {
    const double f1 = 3.0 + ch, f2 = 7.0 + 2.0 * ch, f3 = 19.0;
    for (Index r = 0; r < size; ++r) {
      for (Index c = 0; c < size; ++c) {
        const double u = double(c) / double(size), v = double(r) / double(size);
        double x = 0.45 + 0.2 * std::sin(two_pi * f1 * u) * std::cos(two_pi * f2 * v) +
                   0.1 * std::sin(two_pi * f3 * (u + v)) + 0.05 * (rng.uniform() - 0.5);
        img[ch](r, c) = float(std::clamp(x, 0.0, 1.0));
      }
    }
  }
  return img;
}

}  // namespace

ThroughputReport benchmark_throughput(std::string_view preset_name, Index patch_size, int count, int threads) {
  require(count >= 1, "bench: count must be positive");
  require(patch_size >= 16 && patch_size % 2 == 0, "bench: patch size must be even and at least 16");
  const ParamRanges ranges = preset(preset_name);
  const LinearImage src = synthetic_source(std::max<Index>(4 * patch_size, 256));

  auto one = [&](std::size_t i) {
    Rng place(derive_seed(1, {i}));
    const auto patches = extract_patches(src, 1, patch_size, place);
    Rng rng(patch_seed(1, 0, i, 0));
    const auto cfg = sample_params(ranges, rng);
    const LinearImage out = run_pipeline(patches.front().second, cfg);
    // Encoding is part of generation cost.
    (void)encode_raw_float(out);
    (void)encode_png8(quantize_8bit(linear_to_srgb(out)));
  };

  using clock = std::chrono::steady_clock;
  ThroughputReport rep;
  rep.count = count;
  rep.patch_size = patch_size;
  rep.threads = resolve_thread_count(threads);

  auto t0 = clock::now();
  for (int i = 0; i < count; ++i) one(std::size_t(i));
  const double single = std::chrono::duration<double>(clock::now() - t0).count();

  t0 = clock::now();
  parallel_for(std::size_t(count), rep.threads, one);
  const double multi = std::chrono::duration<double>(clock::now() - t0).count();

  rep.single_thread_patches_per_second = double(count) / std::max(single, 1e-9);
  rep.all_cores_patches_per_second = double(count) / std::max(multi, 1e-9);
  rep.single_thread_ms_per_patch = 1000.0 * single / double(count);
  return rep;
}

}  // namespace rawpipe
