#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include <json.hpp>

#include "plurex/envelope.hpp"

namespace plurex {

// Configuration of the verification pipeline. Defaults reproduce the
// desk-scale run; everything is overridable from a JSON config file and
// from CLI flags.
struct PipelineConfig {
  double delta = 0.05;
  double epsilon = 0.1;
  double spacing_t = 0.05;
  double spacing_w = 0.025;
  double tol = 1e-7;
  int max_iters = 5000;
  int n_circle_samples = 16;     // solver circle quadrature
  int psh_circle_samples = 128;  // sub-mean test quadrature
  double eta_diagonals = 2.0;    // K-collar radius in grid diagonals
  double certify_step = 1e-3;
  int overlap_samples = 10000;
  int psh_points = 10000;
  int witness_points = 10000;
  double gap_threshold = 0.5;
  double r_peak_scale = 1.0;  // fault-injection knob for the certify stage
  uint64_t seed = 42;
  std::string output_dir = "out";
  std::set<std::string> stages = {"certify", "psh", "witness", "omega2", "omega1", "gap"};

  void validate() const;  // throws InvalidRange on bad values
  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig from_file(const std::string& path);
  nlohmann::json to_json() const;
};

// Exit codes: 0 all requested stages pass, 2 profile certification failed,
// 3 a solver did not converge, 4 the gap report failed, 1 any other stage
// failure. Stages run in the fixed order certify, psh, witness, omega2,
// omega1, gap; certify is always prepended and gap pulls in both solves.
// Wall-clock per stage is reported on the console only, so the output
// files are bit-identical across runs with the same config.
int run_pipeline(const PipelineConfig& config);

// Re-slices a stored envelope result. plane is "w0" or "t:<value>";
// format is "csv" or "json". Throws UnknownResult when the result id was
// not produced into output_dir.
std::string export_slice(const std::string& output_dir, const std::string& result_id,
                         const std::string& plane, const std::string& format);

// One text row per stage found in output_dir: pass/fail plus key numbers.
std::string summarize(const std::string& output_dir);

}  // namespace plurex
