#pragma once

#include "rawpipe/pipeline.hpp"
#include "rawpipe/resample.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rawpipe {

inline constexpr std::string_view kToolVersion = "0.3.0";

/// Per-patch seed: chained SplitMix64 over (master, source, patch, epoch).
std::uint64_t patch_seed(std::uint64_t master, std::uint64_t source_index,
                         std::uint64_t patch_index, std::uint64_t epoch);

struct GenerateOptions {
  std::filesystem::path src_dir;
  std::string preset = "full";
  int patches_per_image = 5;
  Index patch_size = 80;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  int epochs = 1;
  int downsample = 4;
  int threads = 0;
  /// Seconds since the Unix epoch written into the header; wall clock if unset.
  std::optional<std::int64_t> creation_time;
};

struct ManifestHeader {
  std::string preset;
  std::string tool_version{kToolVersion};
  std::string creation_time;  // ISO-8601 UTC
  std::uint64_t master_seed = 0;
  int patches_per_image = 0;
  Index patch_size = 0;
  int downsample = 1;
  int epochs = 1;
  std::string src_dir;
  std::size_t record_count = 0;
  std::vector<std::string> warnings;
};

struct ManifestRecord {
  std::string source;  // absolute path of the source image
  int source_index = 0;
  int patch_index = 0;
  int epoch = 0;
  PatchSpec patch;
  std::uint64_t patch_seed = 0;
  PipelineConfig config;
  std::string clean_path;         // relative to the manifest directory
  std::string degraded_path;      // raw float container
  std::string degraded_png_path;  // 8-bit sRGB preview
};

struct DatasetManifest {
  ManifestHeader header;
  std::vector<ManifestRecord> records;
};

inline constexpr std::string_view kManifestFileName = "manifest.jsonl";

/// Lists readable image files (png, jpg, jpeg) in sorted order.
std::vector<std::filesystem::path> list_source_images(const std::filesystem::path& dir);

/// Linearize, downsample, crop, degrade; writes pairs plus manifest.jsonl.
DatasetManifest generate_dataset(const GenerateOptions& opts);

/// JSON Lines: header record first, then one record per patch.
std::string serialize_manifest(const DatasetManifest& m);

/// Parses and fully validates a manifest; throws ValidationError.
DatasetManifest parse_manifest(const std::string& text);
DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& m);

/// Rewrites every pair listed in the manifest below `out_dir` (default: the
/// manifest's directory). All records validate and all sources must exist
/// before anything is written.
void regenerate_from_manifest(const std::filesystem::path& manifest_path,
                              const std::optional<std::filesystem::path>& out_dir = {},
                              int threads = 0);

struct ThroughputReport {
  int count = 0;
  Index patch_size = 0;
  int threads = 1;
  double single_thread_patches_per_second = 0.0;
  double all_cores_patches_per_second = 0.0;
  double single_thread_ms_per_patch = 0.0;
};

/// Times full generation (sampling + pipeline) of `count` patches drawn from a
/// synthetic textured source, single-threaded and on all workers.
ThroughputReport benchmark_throughput(std::string_view preset_name, Index patch_size, int count,
                                      int threads = 0);

}  // namespace rawpipe
