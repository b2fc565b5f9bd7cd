#include "helpers.hpp"
#include "tree.hpp"

#include "rawpipe/config_json.hpp"
#include "rawpipe/dataset.hpp"
#include "rawpipe/error.hpp"
#include "rawpipe/io.hpp"

#include <doctest.h>

#include <fstream>
#include <set>

using namespace rawpipe;
namespace fs = std::filesystem;

namespace {

fs::path sample_sources(const std::string& name) {
  const auto dir = testutil::scratch_dir(name);
  for (const auto& e : fs::directory_iterator(testutil::data_dir())) fs::copy_file(e.path(), dir / e.path().filename());
  return dir;
}

GenerateOptions small_options(const fs::path& src, const fs::path& out) {
  GenerateOptions o;
  o.src_dir = src;
  o.out_dir = out;
  o.preset = "full";
  o.patches_per_image = 2;
  o.patch_size = 32;
  o.seed = 1234;
  o.epochs = 2;
  o.creation_time = 1700000000;
  return o;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

}  // namespace

TEST_CASE("patch seeds are distinct across sources, patches and epochs") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 30; ++s)
    for (std::uint64_t p = 0; p < 10; ++p)
      for (std::uint64_t e = 0; e < 5; ++e) seen.insert(patch_seed(42, s, p, e));
  CHECK(seen.size() == 1500);
  CHECK(patch_seed(1, 0, 0, 0) != patch_seed(2, 0, 0, 0));
}

TEST_CASE("generate writes aligned pairs and a manifest") {
  const auto src = sample_sources("gen_src");
  const auto out = testutil::scratch_dir("gen_out");
  const auto m = generate_dataset(small_options(src, out));
  CHECK(m.records.size() == 4 * 2 * 2);
  CHECK(m.header.record_count == m.records.size());
  CHECK(m.header.creation_time == "2023-11-14T22:13:20Z");
  CHECK(m.header.tool_version == kToolVersion);
  CHECK(fs::exists(out / kManifestFileName));

  std::set<std::uint64_t> seeds;
  for (const auto& r : m.records) {
    CHECK(fs::exists(out / r.clean_path));
    CHECK(fs::exists(out / r.degraded_path));
    CHECK(fs::exists(out / r.degraded_png_path));
    seeds.insert(r.patch_seed);
    CHECK(r.patch_seed == patch_seed(1234, r.source_index, r.patch_index, r.epoch));
    // Clean patch is the exact crop of the linearized, downsampled source.
    const auto full = downsample(srgb_to_linear(read_image(r.source)), 4);
    CHECK(read_raw_float(out / r.clean_path) == crop(full, r.patch));
    CHECK(read_raw_float(out / r.degraded_path) == run_pipeline(crop(full, r.patch), r.config));
  }
  CHECK(seeds.size() == m.records.size());
  // Epochs share the crop but not the parameters.
  CHECK(m.records[0].patch == m.records[1].patch);
  CHECK(!(m.records[0].config == m.records[1].config));

  CHECK(parse_manifest(read_text(out / kManifestFileName)).records.size() == m.records.size());
  CHECK(serialize_manifest(read_manifest(out / kManifestFileName)) == read_text(out / kManifestFileName));
}

TEST_CASE("generation is independent of the worker count") {
  const auto src = sample_sources("thr_src");
  const auto a = testutil::scratch_dir("thr_a");
  const auto b = testutil::scratch_dir("thr_b");
  auto oa = small_options(src, a);
  oa.threads = 1;
  auto ob = small_options(src, b);
  ob.threads = 4;
  generate_dataset(oa);
  generate_dataset(ob);
  CHECK(testutil::read_tree(a) == testutil::read_tree(b));
}

TEST_CASE("unreadable and undersized sources are skipped with warnings") {
  const auto src = sample_sources("warn_src");
  write_text(src / "broken.png", "garbage");
  const auto out = testutil::scratch_dir("warn_out");
  auto o = small_options(src, out);
  o.patch_size = 80;  // chelsea is 75 px tall after 4x downsampling
  o.epochs = 1;
  const auto m = generate_dataset(o);
  CHECK(m.header.warnings.size() == 2);
  CHECK(m.records.size() == 3 * 2);

  const auto empty = testutil::scratch_dir("warn_empty");
  write_text(empty / "bad.jpg", "garbage");
  CHECK_THROWS_AS(generate_dataset(small_options(empty, testutil::scratch_dir("warn_out2"))), ValidationError);
  auto tiny = small_options(src, out);
  tiny.patch_size = 8;
  CHECK_THROWS_AS(generate_dataset(tiny), ValidationError);
  CHECK_THROWS_AS(generate_dataset(small_options("/nonexistent/dir", out)), IoError);
}

TEST_CASE("regen reproduces the tree and validates first") {
  const auto src = sample_sources("regen_src");
  const auto out = testutil::scratch_dir("regen_out");
  generate_dataset(small_options(src, out));
  const auto before = testutil::read_tree(out);

  const auto copy = testutil::scratch_dir("regen_copy");
  regenerate_from_manifest(out / kManifestFileName, copy, 2);
  CHECK(testutil::read_tree(copy) == before);
  regenerate_from_manifest(copy / kManifestFileName, std::nullopt, 1);
  CHECK(testutil::read_tree(copy) == before);  // fixed point

  const std::string text = read_text(out / kManifestFileName);

  // Truncation is caught before anything is written.
  const auto trunc_dir = testutil::scratch_dir("regen_trunc");
  write_text(trunc_dir / "m.jsonl", text.substr(0, text.size() - 40));
  const auto trunc_out = testutil::scratch_dir("regen_trunc_out");
  CHECK_THROWS_AS(regenerate_from_manifest(trunc_dir / "m.jsonl", trunc_out), ValidationError);
  CHECK(fs::is_empty(trunc_out));
  // Whole-line truncation is caught by the record count.
  auto cut = text.substr(0, text.rfind('\n', text.size() - 2) + 1);
  write_text(trunc_dir / "m2.jsonl", cut);
  CHECK_THROWS_AS(regenerate_from_manifest(trunc_dir / "m2.jsonl", trunc_out), ValidationError);
  CHECK(fs::is_empty(trunc_out));

  // Missing sources are listed.
  fs::remove(src / "coffee.png");
  try {
    regenerate_from_manifest(out / kManifestFileName, trunc_out);
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("coffee.png") != std::string::npos);
  }
  CHECK(fs::is_empty(trunc_out));
}

TEST_CASE("editing one record only changes that pair") {
  const auto src = sample_sources("edit_src");
  const auto out = testutil::scratch_dir("edit_out");
  auto m = generate_dataset(small_options(src, out));
  const auto before = testutil::read_tree(out);
  m.records[3].config.artifacts.noise.gaussian_std = 0.09;
  const auto edited = testutil::scratch_dir("edit_manifest");
  write_manifest(edited / kManifestFileName, m);
  const auto regen = testutil::scratch_dir("edit_regen");
  regenerate_from_manifest(edited / kManifestFileName, regen);
  const auto after = testutil::read_tree(regen);
  std::set<std::string> changed;
  for (const auto& [k, v] : before) {
    if (k == kManifestFileName) continue;
    if (after.at(k) != v) changed.insert(k);
  }
  CHECK(changed == std::set<std::string>{m.records[3].degraded_path, m.records[3].degraded_png_path});
}

TEST_CASE("manifest validation") {
  DatasetManifest m;
  m.header.preset = "full";
  m.header.patch_size = 32;
  m.header.downsample = 4;
  ManifestRecord r;
  r.source = "/abs/a.png";
  r.patch = {"a.png", 0, 0, 32};
  r.clean_path = "clean/a.rpf";
  r.degraded_path = "degraded/a.rpf";
  r.degraded_png_path = "degraded/a.png";
  m.records = {r};
  CHECK(parse_manifest(serialize_manifest(m)).records.size() == 1);

  auto dup = m;
  dup.records.push_back(r);
  dup.records[1].degraded_path = "degraded/b.rpf";
  dup.records[1].degraded_png_path = "degraded/b.png";
  CHECK_THROWS_AS(parse_manifest(serialize_manifest(dup)), ValidationError);  // duplicate seed

  auto esc = m;
  esc.records[0].degraded_path = "../escape.rpf";
  CHECK_THROWS_AS(parse_manifest(serialize_manifest(esc)), ValidationError);

  std::string text = serialize_manifest(m);
  CHECK_THROWS_AS(parse_manifest(text.substr(0, text.size() - 1)), ValidationError);
  CHECK_THROWS_AS(parse_manifest(""), ValidationError);
  std::string extra = text;
  extra.insert(extra.find("\"preset\""), "\"colour\":1,");
  CHECK_THROWS_AS(parse_manifest(extra), ValidationError);
}

TEST_CASE("throughput benchmark") {
  const auto r = benchmark_throughput("full", 32, 3, 2);
  CHECK(r.count == 3);
  CHECK(r.single_thread_patches_per_second > 0);
  CHECK(r.all_cores_patches_per_second > 0);
  CHECK_THROWS_AS(benchmark_throughput("full", 32, 0), ValidationError);
}
