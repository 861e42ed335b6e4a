#include "plurex/pipeline.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "plurex/profiles.hpp"
#include "plurex/psh.hpp"

namespace plurex {

namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UnknownResult("cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  return j;
}

std::string csv_slice_w0(const Grid3& grid, const GridField& field) {
  std::ostringstream out;
  out << "# slice w=0; columns: t,value\n";
  const auto& mask = *field.mask;
  const int iu = static_cast<int>(std::lround((0.0 - grid.u.min) / grid.u.spacing));
  const int iv = static_cast<int>(std::lround((0.0 - grid.v.min) / grid.v.spacing));
  char buf[64];
  for (int it = 0; it < grid.t.n; ++it) {
    const std::size_t id = grid.idx(it, iu, iv);
    if (!mask[id]) continue;
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", grid.t.coord(it), field.values[id]);
    out << buf;
  }
  return out.str();
}

// Compact store of an envelope result: meta JSON plus the masked node
// values as raw little-endian doubles in scan order.
void save_field(const fs::path& dir, const std::string& result_id, const PipelineConfig& cfg,
                const Grid3& grid, const EnvelopeResult& result, const std::string& mask_kind) {
  const auto& mask = *result.field.mask;
  std::vector<double> packed;
  packed.reserve(1 << 20);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (mask[i]) packed.push_back(result.field.values[i]);
  }
  nlohmann::json meta = {{"result_id", result_id},
                         {"mask_kind", mask_kind},
                         {"spacing_t", cfg.spacing_t},
                         {"spacing_w", cfg.spacing_w},
                         {"delta", cfg.delta},
                         {"n_values", packed.size()},
                         {"iterations", result.iterations},
                         {"residual", result.final_residual},
                         {"converged", result.converged}};
  write_json(dir / (result_id + ".meta.json"), meta);
  std::ofstream bin(dir / (result_id + ".field.bin"), std::ios::binary);
  bin.write(reinterpret_cast<const char*>(packed.data()),
            static_cast<std::streamsize>(packed.size() * sizeof(double)));
}

struct LoadedField {
  Grid3 grid;
  GridField field;
};

LoadedField load_field(const fs::path& dir, const std::string& result_id) {
  const fs::path meta_path = dir / (result_id + ".meta.json");
  if (!fs::exists(meta_path)) throw UnknownResult("no stored result named " + result_id);
  const nlohmann::json meta = read_json(meta_path);
  LoadedField out;
  out.grid = build_grid(0.0, 18.0, -2.6, 2.6, meta.at("spacing_t").get<double>(),
                        meta.at("spacing_w").get<double>(), meta.at("delta").get<double>());
  const std::string mask_kind = meta.at("mask_kind").get<std::string>();
  const auto& mask =
      mask_kind == "enlarged" ? out.grid.enlarged_mask : out.grid.interior_mask;
  std::ifstream bin(dir / (result_id + ".field.bin"), std::ios::binary);
  if (!bin) throw UnknownResult("missing field data for " + result_id);
  std::vector<double> packed(meta.at("n_values").get<std::size_t>());
  bin.read(reinterpret_cast<char*>(packed.data()),
           static_cast<std::streamsize>(packed.size() * sizeof(double)));
  out.field.values.assign(out.grid.size(), kInf);
  std::size_t k = 0;
  for (std::size_t i = 0; i < out.grid.size() && k < packed.size(); ++i) {
    if (mask[i]) out.field.values[i] = packed[k++];
  }
  if (k != packed.size()) throw UnknownResult("stored field does not match the grid masks");
  out.field.mask = mask_kind == "enlarged" ? &out.grid.enlarged_mask : &out.grid.interior_mask;
  return out;
}

double stage_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void PipelineConfig::validate() const {
  if (!(delta > 0.0 && delta <= 0.1)) throw InvalidRange("delta must be in (0, 0.1]");
  if (!(epsilon > 0.0 && epsilon < 5.0 / 11.0)) throw InvalidRange("epsilon must be in (0, 5/11)");
  if (!(spacing_t > 0.0 && spacing_w > 0.0)) throw InvalidRange("spacings must be positive");
  if (max_iters < 1) throw InvalidRange("max_iters must be positive");
  static const std::set<std::string> known = {"certify", "psh", "witness",
                                              "omega1",  "omega2", "gap"};
  for (const auto& s : stages) {
    if (!known.count(s)) throw InvalidRange("unknown stage: " + s);
  }
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j) {
  PipelineConfig c;
  auto get = [&j](const char* key, auto& slot) {
    if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
  };
  get("delta", c.delta);
  get("epsilon", c.epsilon);
  get("spacing_t", c.spacing_t);
  get("spacing_w", c.spacing_w);
  get("tol", c.tol);
  get("max_iters", c.max_iters);
  get("n_circle_samples", c.n_circle_samples);
  get("psh_circle_samples", c.psh_circle_samples);
  get("eta_diagonals", c.eta_diagonals);
  get("certify_step", c.certify_step);
  get("overlap_samples", c.overlap_samples);
  get("psh_points", c.psh_points);
  get("witness_points", c.witness_points);
  get("gap_threshold", c.gap_threshold);
  get("seed", c.seed);
  get("output_dir", c.output_dir);
  if (j.contains("profile") && j.at("profile").contains("r_peak_scale")) {
    c.r_peak_scale = j.at("profile").at("r_peak_scale").get<double>();
  }
  if (j.contains("stages")) {
    c.stages.clear();
    for (const auto& s : j.at("stages")) c.stages.insert(s.get<std::string>());
  }
  return c;
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  return from_json(read_json(path));
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json j = {{"delta", delta},
                      {"epsilon", epsilon},
                      {"spacing_t", spacing_t},
                      {"spacing_w", spacing_w},
                      {"tol", tol},
                      {"max_iters", max_iters},
                      {"n_circle_samples", n_circle_samples},
                      {"psh_circle_samples", psh_circle_samples},
                      {"eta_diagonals", eta_diagonals},
                      {"certify_step", certify_step},
                      {"overlap_samples", overlap_samples},
                      {"psh_points", psh_points},
                      {"witness_points", witness_points},
                      {"gap_threshold", gap_threshold},
                      {"seed", seed},
                      {"output_dir", output_dir},
                      {"profile", {{"r_peak_scale", r_peak_scale}}}};
  j["stages"] = nlohmann::json::array();
  for (const auto& s : {"certify", "psh", "witness", "omega2", "omega1", "gap"}) {
    if (stages.count(s)) j["stages"].push_back(s);
  }
  return j;
}

int run_pipeline(const PipelineConfig& config) {
  config.validate();
  fs::create_directories(config.output_dir);
  const fs::path out(config.output_dir);

  // Fixed dependency order; certify is always run, gap needs both solves.
  std::set<std::string> wanted = config.stages;
  wanted.insert("certify");
  if (wanted.count("gap")) {
    wanted.insert("omega1");
    wanted.insert("omega2");
  }

  write_json(out / "config.json", config.to_json());

  std::map<std::string, double> runtimes;
  EnvelopeResult omega1_result, omega2_result;
  bool have_omega1 = false, have_omega2 = false;
  Grid3 grid;
  bool have_grid = false;

  auto ensure_grid = [&]() {
    if (!have_grid) {
      grid = build_grid(0.0, 18.0, -2.6, 2.6, config.spacing_t, config.spacing_w, config.delta);
      have_grid = true;
    }
  };

  // certify
  {
    const auto t0 = std::chrono::steady_clock::now();
    const RadialProfile profile = RadialProfile::standard_with_peak_scale(config.r_peak_scale);
    const ConstraintReport report = certify_profiles(profile, config.certify_step);
    nlohmann::json j = {{"constraints", report.to_json()},
                        {"pass", report.all_pass()},
                        {"node_table", profile.node_table_json()}};
    write_json(out / "certify.json", j);
    runtimes["certify"] = stage_seconds(t0);
    if (!report.all_pass()) {
      std::fprintf(stderr, "certify: constraint certification FAILED\n");
      std::fputs(summarize(config.output_dir).c_str(), stdout);
      return 2;
    }
  }

  if (wanted.count("psh")) {
    const auto t0 = std::chrono::steady_clock::now();
    const ConstraintReport overlaps = overlap_consistency(config.overlap_samples, config.seed);
    const PshStageReport stage =
        run_psh_stage(config.psh_points, 0.025, config.psh_circle_samples, config.seed);
    nlohmann::json j = stage.to_json();
    j["overlaps"] = overlaps.to_json();
    j["overlaps_pass"] = overlaps.all_pass();
    j["pass"] = stage.pass && overlaps.all_pass();
    write_json(out / "psh.json", j);
    runtimes["psh"] = stage_seconds(t0);
    if (!j["pass"].get<bool>()) {
      std::fprintf(stderr, "psh: plurisubharmonicity checks FAILED\n");
      return 1;
    }
  }

  if (wanted.count("witness")) {
    const auto t0 = std::chrono::steady_clock::now();
    const WitnessReport rep = witness_report(config.delta, config.witness_points, config.seed);
    write_json(out / "witness.json", rep.to_json());
    runtimes["witness"] = stage_seconds(t0);
    if (!rep.pass) {
      std::fprintf(stderr, "witness: witness bound checks FAILED\n");
      return 1;
    }
  }

  SolverOptions opts;
  opts.n_circle_samples = config.n_circle_samples;
  opts.tol = config.tol;
  opts.max_iters = config.max_iters;

  if (wanted.count("omega2")) {
    const auto t0 = std::chrono::steady_clock::now();
    ensure_grid();
    const double eta = config.eta_diagonals * grid.grid_diagonal();
    omega2_result = solve_omega2(grid, eta, opts);
    have_omega2 = true;
    nlohmann::json j = omega2_result.summary_json(grid, config.delta);
    j["eta"] = eta;
    write_json(out / "omega2.json", j);
    write_text(out / "omega2_slice_w0.csv", csv_slice_w0(grid, omega2_result.field));
    save_field(out, "omega2", config, grid, omega2_result, "interior");
    runtimes["omega2"] = stage_seconds(t0);
    if (!omega2_result.converged) {
      std::fprintf(stderr, "omega2: solver did not converge (residual %.3e)\n",
                   omega2_result.final_residual);
      return 3;
    }
  }

  if (wanted.count("omega1")) {
    const auto t0 = std::chrono::steady_clock::now();
    ensure_grid();
    const double eta = config.eta_diagonals * grid.grid_diagonal();
    omega1_result = solve_omega1_proxy(grid, config.epsilon, eta, opts);
    have_omega1 = true;
    nlohmann::json j = omega1_result.summary_json(grid, config.delta);
    j["eta"] = eta;
    j["epsilon"] = config.epsilon;
    write_json(out / "omega1.json", j);
    write_text(out / "omega1_slice_w0.csv", csv_slice_w0(grid, omega1_result.field));
    save_field(out, "omega1_proxy", config, grid, omega1_result, "enlarged");
    runtimes["omega1"] = stage_seconds(t0);
    if (!omega1_result.converged) {
      std::fprintf(stderr, "omega1: solver did not converge (residual %.3e)\n",
                   omega1_result.final_residual);
      return 3;
    }
  }

  if (wanted.count("gap")) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!have_omega1 || !have_omega2) {
      std::fprintf(stderr, "gap: missing envelope results\n");
      return 1;
    }
    const GapReport rep = gap_report(omega1_result, omega2_result, grid, config.delta,
                                     config.epsilon, config.gap_threshold);
    write_json(out / "gap.json", rep.to_json());
    runtimes["gap"] = stage_seconds(t0);
    if (!rep.pass) {
      std::fprintf(stderr, "gap: separation check FAILED\n");
      return 4;
    }
  }

  // Console summary with runtimes; files stay free of timing data so
  // identical configs produce bit-identical artifacts.
  std::fputs(summarize(config.output_dir).c_str(), stdout);
  for (const auto& [stage, secs] : runtimes) {
    std::printf("runtime %-8s %8.2fs\n", stage.c_str(), secs);
  }
  return 0;
}

std::string export_slice(const std::string& output_dir, const std::string& result_id,
                         const std::string& plane, const std::string& format) {
  const LoadedField loaded = load_field(output_dir, result_id);
  const Grid3& grid = loaded.grid;
  const auto& mask = *loaded.field.mask;

  std::string stem = result_id + "_slice_";
  std::ostringstream body;
  nlohmann::json jout;

  if (plane == "w0" || plane == "w=0") {
    stem += "w0";
    if (format == "csv") {
      body << csv_slice_w0(grid, loaded.field);
    } else {
      nlohmann::json pts = nlohmann::json::array();
      const int iu = static_cast<int>(std::lround((0.0 - grid.u.min) / grid.u.spacing));
      const int iv = static_cast<int>(std::lround((0.0 - grid.v.min) / grid.v.spacing));
      for (int it = 0; it < grid.t.n; ++it) {
        const std::size_t id = grid.idx(it, iu, iv);
        if (!mask[id]) continue;
        pts.push_back({{"t", grid.t.coord(it)}, {"value", loaded.field.values[id]}});
      }
      jout = {{"plane", "w0"}, {"points", pts}};
    }
  } else if (plane.rfind("t:", 0) == 0 || plane.rfind("t=", 0) == 0) {
    const double t_value = std::stod(plane.substr(2));
    const int it = static_cast<int>(std::lround((t_value - grid.t.min) / grid.t.spacing));
    if (it < 0 || it >= grid.t.n) throw InvalidRange("t slice outside the grid");
    std::ostringstream tag;
    tag << "t" << t_value;
    stem += tag.str();
    if (format == "csv") {
      body << "# slice t=" << t_value << "; columns: re_w,im_w,value\n";
      char buf[96];
      for (int iu = 0; iu < grid.u.n; ++iu) {
        for (int iv = 0; iv < grid.v.n; ++iv) {
          const std::size_t id = grid.idx(it, iu, iv);
          if (!mask[id]) continue;
          std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", grid.u.coord(iu),
                        grid.v.coord(iv), loaded.field.values[id]);
          body << buf;
        }
      }
    } else {
      nlohmann::json pts = nlohmann::json::array();
      for (int iu = 0; iu < grid.u.n; ++iu) {
        for (int iv = 0; iv < grid.v.n; ++iv) {
          const std::size_t id = grid.idx(it, iu, iv);
          if (!mask[id]) continue;
          pts.push_back({{"re_w", grid.u.coord(iu)},
                         {"im_w", grid.v.coord(iv)},
                         {"value", loaded.field.values[id]}});
        }
      }
      jout = {{"plane", plane}, {"t", t_value}, {"points", pts}};
    }
  } else {
    throw InvalidRange("plane must be w0 or t:<value>");
  }

  const fs::path path = fs::path(output_dir) / (stem + "." + format);
  if (format == "csv") {
    write_text(path, body.str());
  } else if (format == "json") {
    write_json(path, jout);
  } else {
    throw InvalidRange("format must be csv or json");
  }
  return path.string();
}

std::string summarize(const std::string& output_dir) {
  const fs::path out(output_dir);
  std::ostringstream table;
  bool any = false;

  auto row = [&table, &any](const std::string& stage, bool pass, const std::string& detail) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-8s %-4s %s\n", stage.c_str(), pass ? "PASS" : "FAIL",
                  detail.c_str());
    table << buf;
    any = true;
  };

  if (fs::exists(out / "certify.json")) {
    const auto j = read_json(out / "certify.json");
    double min_margin = kInf;
    for (const auto& e : j.at("constraints")) {
      min_margin = std::min(min_margin, e.at("margin").get<double>());
    }
    std::ostringstream d;
    d << "min margin " << min_margin;
    row("certify", j.at("pass").get<bool>(), d.str());
  }
  if (fs::exists(out / "psh.json")) {
    const auto j = read_json(out / "psh.json");
    std::ostringstream d;
    d << "max defect " << std::max(j.at("max_defect_f").get<double>(),
                                   j.at("max_defect_g").get<double>())
      << ", min levi " << std::min(j.at("min_levi_f").get<double>(),
                                   j.at("min_levi_g").get<double>());
    row("psh", j.at("pass").get<bool>(), d.str());
  }
  if (fs::exists(out / "witness.json")) {
    const auto j = read_json(out / "witness.json");
    std::ostringstream d;
    d << "g_on_V " << j.at("g_on_V").get<double>() << " (stated "
      << j.at("stated_alternative_g_on_V").get<double>() << "), max defect "
      << j.at("max_submean_defect").get<double>();
    row("witness", j.at("pass").get<bool>(), d.str());
  }
  for (const std::string stage : {"omega2", "omega1"}) {
    if (!fs::exists(out / (stage + ".json"))) continue;
    const auto j = read_json(out / (stage + ".json"));
    std::ostringstream d;
    d << "value(9,0) ";
    if (j.at("value_at_t9_w0").is_null()) {
      d << "n/a";
    } else {
      d << j.at("value_at_t9_w0").get<double>();
    }
    d << ", iters " << j.at("iterations").get<int>() << ", residual "
      << j.at("residual").get<double>();
    row(stage, j.at("converged").get<bool>(), d.str());
  }
  if (fs::exists(out / "gap.json")) {
    const auto j = read_json(out / "gap.json");
    std::ostringstream d;
    d << "min gap over V " << j.at("min_gap").get<double>() << " (threshold "
      << j.at("separation_threshold").get<double>() << ", V nodes "
      << j.at("n_v_nodes").get<int>() << ")";
    row("gap", j.at("pass").get<bool>(), d.str());
  }

  if (!any) return "no results in " + output_dir + "\n";
  return table.str();
}

}  // namespace plurex
