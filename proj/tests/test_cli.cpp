#include "helpers.hpp"
#include "tree.hpp"

#include "rawpipe/config_json.hpp"
#include "rawpipe/io.hpp"
#include "rawpipe/pipeline.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

using namespace rawpipe;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(RAWPIPE_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("cli exit codes") {
  CHECK(run("--help").code == 0);
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  const auto out = testutil::scratch_dir("cli_codes");
  CHECK(run("generate --src " + q(testutil::data_dir()) + " --seed 1 --out " + q(out) + " --preset bogus").code == 2);
  CHECK(run("generate --src /nonexistent --seed 1 --out " + q(out)).code == 3);
  CHECK(run("generate --src " + q(testutil::data_dir()) + " --seed 1 --out " + q(out) + " --patch-size 8").code == 2);
  CHECK(run("regen --manifest /nonexistent/manifest.jsonl").code == 3);
  CHECK(run("metrics /nonexistent/a.png /nonexistent/b.png").code == 3);
}

TEST_CASE("cli generate and regen") {
  const auto out = testutil::scratch_dir("cli_gen");
  const std::string args = "generate --src " + q(testutil::data_dir()) +
                           " --preset s7-iso800 --patches-per-image 1 --patch-size 32 --seed 5 --out " + q(out);
  REQUIRE(run(args).code == 0);
  REQUIRE(fs::exists(out / "manifest.jsonl"));
  const auto tree = testutil::read_tree(out);
  fs::remove_all(out / "degraded");
  CHECK(run("regen --manifest " + q(out / "manifest.jsonl")).code == 0);
  CHECK(testutil::read_tree(out) == tree);
}

TEST_CASE("cli metrics") {
  const auto dir = testutil::scratch_dir("cli_metrics");
  const auto a = testutil::random_image(24, 24, 1);
  const auto b = testutil::random_image(24, 24, 2);
  write_raw_float(dir / "a.rpf", a);
  write_raw_float(dir / "b.rpf", b);
  const auto same = run("metrics " + q(dir / "a.rpf") + " " + q(dir / "a.rpf"));
  REQUIRE(same.code == 0);
  const auto js = Json::parse(same.out);
  CHECK(js["psnr_infinite"] == true);
  CHECK(js["psnr"].is_null());
  CHECK(js["ssim"].get<double>() == doctest::Approx(1.0));
  const auto diff = Json::parse(run("metrics --no-normalize " + q(dir / "a.rpf") + " " + q(dir / "b.rpf")).out);
  CHECK(diff["normalized"] == false);
  CHECK(diff["psnr"].get<double>() > 0);
  const auto rev = Json::parse(run("metrics --normalize-output " + q(dir / "a.rpf") + " " + q(dir / "b.rpf")).out);
  CHECK(rev["normalization"] == "output-to-reference");
}

TEST_CASE("cli fit") {
  const auto dir = testutil::scratch_dir("cli_fit");
  const auto input = testutil::natural_crop("astronaut.png", 40, 60, 60, 4);
  write_raw_float(dir / "in.rpf", input);
  PipelineConfig truth;
  truth.stages.postprocess = true;
  truth.post.tone_curve = ToneCurve::gamma(2.2);
  truth.post.saturation = 1.2;
  write_raw_float(dir / "target.rpf", run_pipeline(input, truth));
  std::ofstream(dir / "space.json") << R"({"axes": [{"param": "tone_gamma", "values": [1.8, 2.2, 2.6]},
                                                    {"param": "saturation", "values": [1.0, 1.2]}]})";
  const auto r = run("fit --input " + q(dir / "in.rpf") + " --target " + q(dir / "target.rpf") + " --space " +
                     q(dir / "space.json") + " --diff " + q(dir / "diff.png") + " --table");
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["best_values"]["tone_gamma"] == 2.2);
  CHECK(j["best_values"]["saturation"] == 1.2);
  CHECK(j["objective"] == 0.0);
  CHECK(j["table"].size() == 6);
  CHECK(fs::exists(dir / "diff.png"));
  std::ofstream(dir / "bad.json") << R"({"axes": [{"param": "hue", "values": [1]}]})";
  CHECK(run("fit --input " + q(dir / "in.rpf") + " --target " + q(dir / "target.rpf") + " --space " +
            q(dir / "bad.json")).code == 2);
}

TEST_CASE("cli bench") {
  const auto r = run("bench --patch-size 32 --count 2 --threads 1");
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["single_thread_patches_per_second"].get<double>() > 0);
}
