#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "plurex/pipeline.hpp"
#include "plurex/schema.hpp"

using namespace plurex;
namespace fs = std::filesystem;

namespace {

// Coarse, fast configuration: same machinery, reduced budgets.
PipelineConfig small_config(const std::string& out) {
  PipelineConfig cfg;
  cfg.spacing_t = 0.1;
  cfg.spacing_w = 0.05;
  cfg.psh_points = 150;
  cfg.witness_points = 200;
  cfg.overlap_samples = 300;
  cfg.psh_circle_samples = 96;
  cfg.max_iters = 3000;
  cfg.output_dir = out;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json load(const fs::path& p) {
  std::ifstream in(p);
  nlohmann::json j;
  in >> j;
  return j;
}

const fs::path kSchemas = fs::path(PLUREX_SOURCE_DIR) / "schemas";

void check_schema(const fs::path& doc_path, const std::string& schema_name) {
  std::string err;
  const bool ok = validate_schema(load(doc_path), load(kSchemas / schema_name), &err);
  INFO(doc_path.string(), " vs ", schema_name, ": ", err);
  CHECK(ok);
}

}  // namespace

TEST_CASE("full pipeline on a coarse grid: exit 0, artifacts, schemas, idempotency") {
  const std::string out = "pipeline_test_out";
  fs::remove_all(out);
  PipelineConfig cfg = small_config(out);

  REQUIRE(run_pipeline(cfg) == 0);

  const char* files[] = {"config.json",  "certify.json", "psh.json",
                         "witness.json", "omega1.json",  "omega2.json",
                         "gap.json",     "omega1_slice_w0.csv", "omega2_slice_w0.csv"};
  for (const char* f : files) {
    INFO(f);
    CHECK(fs::exists(fs::path(out) / f));
  }

  check_schema(fs::path(out) / "config.json", "config.schema.json");
  check_schema(fs::path(out) / "certify.json", "certify.schema.json");
  check_schema(fs::path(out) / "psh.json", "psh.schema.json");
  check_schema(fs::path(out) / "witness.json", "witness.schema.json");
  check_schema(fs::path(out) / "omega1.json", "envelope_summary.schema.json");
  check_schema(fs::path(out) / "omega2.json", "envelope_summary.schema.json");
  check_schema(fs::path(out) / "gap.json", "gap.schema.json");
  check_schema(fs::path(out) / "omega1_proxy.meta.json", "field_meta.schema.json");
  check_schema(fs::path(out) / "omega2.meta.json", "field_meta.schema.json");

  // CSV slices carry a header comment line
  {
    std::ifstream in(fs::path(out) / "omega2_slice_w0.csv");
    std::string first;
    std::getline(in, first);
    CHECK(first.rfind("#", 0) == 0);
  }

  // the gap must separate on the coarse grid as well
  const auto gap = load(fs::path(out) / "gap.json");
  CHECK(gap.at("pass").get<bool>());
  CHECK(gap.at("min_gap").get<double>() >= 0.5);

  // snapshot every artifact, rerun, compare byte for byte
  std::map<std::string, std::string> snapshot;
  for (const auto& entry : fs::directory_iterator(out)) {
    snapshot[entry.path().filename().string()] = slurp(entry.path());
  }
  REQUIRE(run_pipeline(cfg) == 0);
  for (const auto& entry : fs::directory_iterator(out)) {
    INFO("file ", entry.path().filename().string());
    CHECK(snapshot.at(entry.path().filename().string()) == slurp(entry.path()));
  }

  // worker count must not influence any artifact
  setenv("PLUREX_THREADS", "3", 1);
  REQUIRE(run_pipeline(cfg) == 0);
  unsetenv("PLUREX_THREADS");
  for (const auto& entry : fs::directory_iterator(out)) {
    INFO("file ", entry.path().filename().string());
    CHECK(snapshot.at(entry.path().filename().string()) == slurp(entry.path()));
  }

  SUBCASE("export_slice round trip") {
    const std::string csv_path = export_slice(out, "omega2", "w0", "csv");
    CHECK(fs::exists(csv_path));
    const std::string json_path = export_slice(out, "omega1_proxy", "t:9", "json");
    CHECK(fs::exists(json_path));
    check_schema(json_path, "slice.schema.json");
    const auto slice = load(json_path);
    CHECK(slice.at("points").size() > 0);
    CHECK_THROWS_AS((void)export_slice(out, "nonexistent", "w0", "csv"), UnknownResult);
  }

  SUBCASE("summarize prints one row per stage") {
    const std::string table = summarize(out);
    for (const char* stage : {"certify", "psh", "witness", "omega2", "omega1", "gap"}) {
      INFO(stage, " in:\n", table);
      CHECK(table.find(stage) != std::string::npos);
    }
    CHECK(table.find("FAIL") == std::string::npos);
  }
}

TEST_CASE("corrupted profile exits with code 2") {
  const std::string out = "pipeline_test_corrupt";
  fs::remove_all(out);
  PipelineConfig cfg = small_config(out);
  cfg.stages = {"certify"};
  cfg.r_peak_scale = 0.9;
  CHECK(run_pipeline(cfg) == 2);
}

TEST_CASE("starved solver exits with code 3") {
  const std::string out = "pipeline_test_noconv";
  fs::remove_all(out);
  PipelineConfig cfg = small_config(out);
  cfg.stages = {"omega2"};
  cfg.max_iters = 1;
  CHECK(run_pipeline(cfg) == 3);
}

TEST_CASE("certify-only run and summarize") {
  const std::string out = "pipeline_test_certify";
  fs::remove_all(out);
  PipelineConfig cfg = small_config(out);
  cfg.stages = {"certify"};
  CHECK(run_pipeline(cfg) == 0);
  const std::string table = summarize(out);
  CHECK(table.find("certify") != std::string::npos);
  CHECK(table.find("omega1") == std::string::npos);
}

TEST_CASE("summarize on an empty directory") {
  const std::string out = "pipeline_test_empty";
  fs::remove_all(out);
  fs::create_directories(out);
  CHECK(summarize(out).find("no results") != std::string::npos);
}

TEST_CASE("config json round trip and validation") {
  PipelineConfig cfg = small_config("x");
  cfg.stages = {"certify", "gap"};
  const PipelineConfig back = PipelineConfig::from_json(cfg.to_json());
  CHECK(back.spacing_t == cfg.spacing_t);
  CHECK(back.stages == cfg.stages);
  CHECK(back.output_dir == cfg.output_dir);

  PipelineConfig bad = cfg;
  bad.epsilon = 0.7;  // >= 5/11
  CHECK_THROWS_AS(bad.validate(), InvalidRange);
  bad = cfg;
  bad.delta = 0.3;
  CHECK_THROWS_AS(bad.validate(), InvalidRange);
  bad = cfg;
  bad.stages = {"bogus"};
  CHECK_THROWS_AS(bad.validate(), InvalidRange);
}
