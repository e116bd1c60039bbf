// Command-line front end. Talks to the library exclusively through the C API
// so it doubles as a reference client for embedders.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "waveframe/waveframe.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct StringOut {
  char* s = nullptr;
  ~StringOut() { wf_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

[[noreturn]] void die(int code) {
  std::cerr << "error: " << wf_last_error() << "\n";
  std::exit(code == WF_OK ? 1 : 2);
}

#define CHECK(call)                 \
  do {                              \
    int rc_ = (call);               \
    if (rc_ != WF_OK) die(rc_);     \
  } while (0)

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    std::exit(2);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_dir, const std::string& name) {
  if (out_dir.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(out_dir);
  std::ofstream(fs::path(out_dir) / name) << text;
  std::cout << (fs::path(out_dir) / name).string() << "\n";
}

struct EntryArgs {
  std::string entry;
  std::string spec_file;
  int j_min = -1000, j_max = 1000;
  std::vector<std::string> sets;

  void add_to(CLI::App* cmd, bool required) {
    auto* grp = cmd->add_option_group("system");
    grp->add_option("--entry", entry, "gallery entry name");
    grp->add_option("--spec", spec_file, "manifest.json of a previously built system");
    if (required) grp->require_option(1);
    cmd->add_option("--j-min", j_min, "scale range override");
    cmd->add_option("--j-max", j_max, "scale range override");
    cmd->add_option("--set", sets, "entry parameter override key=value (repeatable)")
        ->expected(-1);
  }

  wf_system* build(uint64_t global_seed) const {
    wf_system* sys = nullptr;
    if (!spec_file.empty()) {
      CHECK(wf_system_from_manifest_file(spec_file.c_str(), &sys));
      return sys;
    }
    json ov = json::object();
    if (j_min != -1000) ov["j_min"] = j_min;
    if (j_max != 1000) ov["j_max"] = j_max;
    if (global_seed) ov["seed"] = double(global_seed);
    for (const auto& kv : sets) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
        std::exit(2);
      }
      ov[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    CHECK(wf_system_build(entry.c_str(), ov.dump().c_str(), &sys));
    return sys;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"waveframe: frame systems on irregular grids"};
  app.require_subcommand(1);
  app.fallthrough(true);

  std::string out_dir;
  uint64_t seed = 0;
  double probe_step = 0.0;
  int ensemble = 0;
  app.add_option("--out", out_dir, "output directory (default: stdout)");
  app.add_option("--seed", seed, "random seed override");
  app.add_option("--probe-step", probe_step, "probe grid step override");
  app.add_option("--ensemble", ensemble, "ensemble size override");

  // density
  auto* density = app.add_subcommand("density", "point-set separation, densities and gap");
  std::string points_csv, gap_region;
  double density_r = 20.0, center_step = 0.0;
  density->add_option("--points", points_csv, "CSV of points")->required();
  density->add_option("--r", density_r, "window radius");
  density->add_option("--center-step", center_step, "window-center grid step");
  density->add_option("--gap-region", gap_region, "region JSON file for the gap probe");

  // covering
  auto* covering = app.add_subcommand("covering", "covering index over a probe region");
  std::string covering_file, probe_file;
  covering->add_option("--covering", covering_file, "covering JSON file")->required();
  covering->add_option("--probe", probe_file, "probe region JSON file")->required();

  // rpu-check
  auto* rpu = app.add_subcommand("rpu-check", "partition-of-unity bounds over a region");
  std::string rpu_file, rpu_region_file;
  rpu->add_option("--rpu", rpu_file, "RPU JSON file")->required();
  rpu->add_option("--region", rpu_region_file, "probe region JSON file")->required();

  // frame-bounds
  auto* fb = app.add_subcommand("frame-bounds", "exponential-frame bound estimates");
  std::string fb_points, fb_region, fb_method = "gram", dump_gram;
  bool fb_normalized = false;
  fb->add_option("--points", fb_points, "CSV of points")->required();
  fb->add_option("--region", fb_region, "region JSON file")->required();
  fb->add_option("--method", fb_method, "gram | empirical | empirical-span");
  fb->add_flag("--normalized", fb_normalized, "measure-normalize the atoms");
  fb->add_option("--dump-gram", dump_gram, "write the Gram matrix CSV here");

  // build / validate / analyze / reconstruct
  auto* build_cmd = app.add_subcommand("build", "build a gallery entry and emit artifacts");
  EntryArgs build_args;
  build_args.add_to(build_cmd, true);

  auto* validate = app.add_subcommand("validate", "consolidated certificate for a system");
  EntryArgs validate_args;
  validate_args.add_to(validate, true);

  auto* analyze = app.add_subcommand("analyze", "frame coefficients of a sampled signal");
  EntryArgs analyze_args;
  std::string signal_file;
  analyze_args.add_to(analyze, true);
  analyze->add_option("--signal", signal_file, "signal grid (.wfg or CSV grid dump)")
      ->required();

  auto* reconstruct = app.add_subcommand("reconstruct", "reconstruct from coefficients");
  EntryArgs recon_args;
  std::string coeffs_file, template_file, reference_file;
  recon_args.add_to(reconstruct, true);
  reconstruct->add_option("--coeffs", coeffs_file, "coefficients CSV")->required();
  reconstruct->add_option("--grid-like", template_file, "grid template (.wfg or CSV)")
      ->required();
  reconstruct->add_option("--reference", reference_file, "ground-truth grid for the report");

  CLI11_PARSE(app, argc, argv);

  if (*density) {
    wf_pointset* ps = nullptr;
    CHECK(wf_pointset_from_csv(points_csv.c_str(), &ps));
    StringOut report;
    std::string region_json = gap_region.empty() ? "" : read_file(gap_region);
    CHECK(wf_density_report(ps, density_r, center_step,
                            region_json.empty() ? nullptr : region_json.c_str(), probe_step,
                            &report.s));
    emit(report.str(), out_dir, "density.json");
    wf_pointset_free(ps);
    return 0;
  }

  if (*covering) {
    int index = 0;
    CHECK(wf_covering_index(read_file(covering_file).c_str(), read_file(probe_file).c_str(),
                            probe_step > 0 ? probe_step : 0.01, &index));
    json j;
    j["covering_index"] = index;
    emit(j.dump(2) + "\n", out_dir, "covering.json");
    return 0;
  }

  if (*rpu) {
    StringOut report;
    CHECK(wf_rpu_bounds(read_file(rpu_file).c_str(), read_file(rpu_region_file).c_str(),
                        probe_step, &report.s));
    emit(report.str(), out_dir, "rpu_report.json");
    return 0;
  }

  if (*fb) {
    wf_pointset* ps = nullptr;
    CHECK(wf_pointset_from_csv(fb_points.c_str(), &ps));
    std::string region_json = read_file(fb_region);
    StringOut report;
    CHECK(wf_frame_bounds(ps, region_json.c_str(), fb_method.c_str(), fb_normalized ? 1 : 0,
                          ensemble > 0 ? ensemble : 200, seed ? seed : 12345, &report.s));
    if (!dump_gram.empty())
      CHECK(wf_gram_csv(ps, region_json.c_str(), fb_normalized ? 1 : 0, dump_gram.c_str()));
    emit(report.str(), out_dir, "frame_bounds.json");
    wf_pointset_free(ps);
    return 0;
  }

  json options = json::object();
  if (ensemble > 0) options["ensemble"] = ensemble;
  if (seed) options["seed"] = double(seed);

  if (*build_cmd) {
    wf_system* sys = build_args.build(seed);
    StringOut summary;
    std::string dir = out_dir.empty() ? "waveframe_out" : out_dir;
    CHECK(wf_system_build_artifacts(sys, options.dump().c_str(), dir.c_str(), &summary.s));
    std::cout << summary.str();
    bool passed = json::parse(summary.str()).value("passed", false);
    wf_system_free(sys);
    return passed ? 0 : 1;
  }

  if (*validate) {
    wf_system* sys = validate_args.build(seed);
    StringOut report;
    CHECK(wf_system_validate(sys, options.dump().c_str(), &report.s));
    emit(report.str(), out_dir, "validation.json");
    bool passed = json::parse(report.str()).value("passed", false);
    wf_system_free(sys);
    return passed ? 0 : 1;
  }

  if (*analyze) {
    wf_system* sys = analyze_args.build(seed);
    wf_field* f = nullptr;
    CHECK(wf_field_read(signal_file.c_str(), &f));
    wf_coeffs* c = nullptr;
    CHECK(wf_analyze(sys, f, &c));
    std::string dir = out_dir.empty() ? "." : out_dir;
    fs::create_directories(dir);
    std::string path = (fs::path(dir) / "coefficients.csv").string();
    CHECK(wf_coeffs_write_csv(c, path.c_str()));
    std::cout << path << "\n";
    wf_coeffs_free(c);
    wf_field_free(f);
    wf_system_free(sys);
    return 0;
  }

  if (*reconstruct) {
    wf_system* sys = recon_args.build(seed);
    wf_field* tmpl = nullptr;
    CHECK(wf_field_read(template_file.c_str(), &tmpl));
    wf_field* ref = nullptr;
    if (!reference_file.empty()) CHECK(wf_field_read(reference_file.c_str(), &ref));
    wf_coeffs* c = nullptr;
    CHECK(wf_coeffs_read_csv(sys, tmpl, coeffs_file.c_str(), &c));
    wf_field* rec = nullptr;
    StringOut report;
    CHECK(wf_reconstruct(sys, c, tmpl, ref, &rec, &report.s));
    std::string dir = out_dir.empty() ? "." : out_dir;
    fs::create_directories(dir);
    CHECK(wf_field_write(rec, (fs::path(dir) / "reconstruction.wfg").string().c_str(), "wfg"));
    CHECK(wf_field_write(rec, (fs::path(dir) / "reconstruction.csv").string().c_str(), "csv"));
    emit(report.str(), dir, "reconstruction_report.json");
    wf_field_free(rec);
    wf_coeffs_free(c);
    if (ref) wf_field_free(ref);
    wf_field_free(tmpl);
    wf_system_free(sys);
    return 0;
  }

  return 0;
}
