#include "waveframe/waveframe.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "wf/covering.hpp"
#include "wf/gallery.hpp"
#include "wf/reconstruct.hpp"
#include "wf/serialize.hpp"

namespace {

thread_local std::string g_last_error;

int code_of(const wf::Error& e) {
  switch (e.code()) {
    case wf::ErrorCode::domain: return WF_EDOMAIN;
    case wf::ErrorCode::precondition: return WF_EPRECONDITION;
    case wf::ErrorCode::construction: return WF_ECONSTRUCTION;
    case wf::ErrorCode::numeric: return WF_ENUMERIC;
    case wf::ErrorCode::resolution: return WF_ERESOLUTION;
    case wf::ErrorCode::conditioning: return WF_ECONDITIONING;
    case wf::ErrorCode::evaluation: return WF_EEVALUATION;
    case wf::ErrorCode::config: return WF_ECONFIG;
    case wf::ErrorCode::io: return WF_EIO;
  }
  return WF_EUNKNOWN;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return WF_OK;
  } catch (const wf::Error& e) {
    g_last_error = e.what();
    return code_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return WF_EUNKNOWN;
  } catch (...) {
    g_last_error = "unknown failure";
    return WF_EUNKNOWN;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

wf::json parse_json(const char* text, const char* what) {
  if (!text) wf::fail(wf::ErrorCode::config, std::string(what) + ": null JSON");
  auto j = wf::json::parse(text, nullptr, false);
  if (j.is_discarded()) wf::fail(wf::ErrorCode::io, std::string(what) + ": malformed JSON");
  return j;
}

std::map<std::string, double> overrides_of(const char* text) {
  std::map<std::string, double> out;
  if (!text || !*text) return out;
  wf::json j = parse_json(text, "overrides");
  for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it.value().get<double>();
  return out;
}

}  // namespace

struct wf_pointset {
  wf::PointSet ps;
};
struct wf_system {
  wf::GalleryEntry entry;
  std::map<std::string, double> overrides;
};
struct wf_field {
  wf::SampledField field;
};
struct wf_coeffs {
  wf::AnalysisResult ar;
};

extern "C" {

const char* wf_last_error(void) { return g_last_error.c_str(); }
void wf_string_free(char* s) { std::free(s); }
const char* wf_version(void) { return "waveframe 1.0.0"; }

int wf_pointset_from_csv(const char* path, wf_pointset** out) {
  return guarded([&] { *out = new wf_pointset{wf::PointSet::from_csv(path)}; });
}

int wf_pointset_create(int dim, const double* coords, size_t n_points, wf_pointset** out) {
  return guarded([&] {
    std::vector<std::vector<double>> pts(n_points, std::vector<double>(dim));
    for (size_t i = 0; i < n_points; ++i)
      for (int d = 0; d < dim; ++d) pts[i][d] = coords[i * dim + d];
    *out = new wf_pointset{wf::PointSet(dim, std::move(pts))};
  });
}

void wf_pointset_free(wf_pointset* ps) { delete ps; }

int wf_pointset_dim(const wf_pointset* ps, int* out) {
  return guarded([&] { *out = ps->ps.dim(); });
}

int wf_pointset_size(const wf_pointset* ps, size_t* out) {
  return guarded([&] { *out = ps->ps.size(); });
}

int wf_separation(const wf_pointset* ps, double* out) {
  return guarded([&] { *out = wf::separation(ps->ps); });
}

int wf_density(const wf_pointset* ps, double r, double center_step, double* lower,
               double* upper) {
  return guarded([&] {
    wf::DensityEstimate d = wf::density_estimate(ps->ps, r, center_step);
    *lower = d.lower;
    *upper = d.upper;
  });
}

int wf_density_report(const wf_pointset* ps, double r, double center_step,
                      const char* gap_region_json, double gap_probe_step, char** report_json) {
  return guarded([&] {
    wf::DensityEstimate d = wf::density_estimate(ps->ps, r, center_step);
    double sep = ps->ps.size() >= 2 ? wf::separation(ps->ps) : 0.0;
    // default gap domain: the data's bounding box shrunk by 10% per side
    wf::Region region = [&] {
      if (gap_region_json && *gap_region_json)
        return wf::region_from_json(parse_json(gap_region_json, "gap region"));
      wf::BoxD bb = ps->ps.bounding_box();
      for (int i = 0; i < ps->ps.dim(); ++i) {
        double w = bb.width(i);
        bb.lo[i] += 0.1 * w;
        bb.hi[i] -= 0.1 * w;
      }
      return wf::Region::box(bb.lo, bb.hi);
    }();
    double step = gap_probe_step > 0.0 ? gap_probe_step : (sep > 0.0 ? sep / 4.0 : 0.01);
    double gap_value = wf::gap(ps->ps, region, step);
    *report_json = dup_string(wf::json_dump(wf::density_to_json(d, sep, gap_value)));
  });
}

int wf_gap(const wf_pointset* ps, const char* region_json, double probe_step, double* out) {
  return guarded([&] {
    wf::Region region = wf::region_from_json(parse_json(region_json, "region"));
    *out = wf::gap(ps->ps, region, probe_step);
  });
}

int wf_region_measure(const char* region_json, double* out) {
  return guarded([&] {
    *out = wf::region_from_json(parse_json(region_json, "region")).measure();
  });
}

int wf_region_contains(const char* region_json, const double* x, int dim, int* out) {
  return guarded([&] {
    wf::Region r = wf::region_from_json(parse_json(region_json, "region"));
    *out = r.contains(std::vector<double>(x, x + dim)) ? 1 : 0;
  });
}

int wf_region_bbox(const char* region_json, char** bbox_json) {
  return guarded([&] {
    wf::BoxD bb = wf::region_from_json(parse_json(region_json, "region")).bounding_box();
    wf::json j;
    j["lo"] = bb.lo;
    j["hi"] = bb.hi;
    *bbox_json = dup_string(wf::json_dump(j));
  });
}

int wf_dilation_ring(const char* matrix_json, const char* v_region_json, char** ring_json) {
  return guarded([&] {
    wf::Mat A = wf::mat_from_json(parse_json(matrix_json, "matrix"));
    wf::Region V = wf::region_from_json(parse_json(v_region_json, "region"));
    *ring_json = dup_string(wf::json_dump(wf::region_to_json(wf::dilation_ring(A, V))));
  });
}

int wf_is_expansive(const char* matrix_json, int* out) {
  return guarded([&] {
    *out = wf::is_expansive(wf::mat_from_json(parse_json(matrix_json, "matrix"))) ? 1 : 0;
  });
}

int wf_covering_index(const char* covering_json, const char* probe_region_json,
                      double probe_step, int* out) {
  return guarded([&] {
    wf::json j = parse_json(covering_json, "covering");
    wf::Covering cov = [&] {
      if (j.contains("members")) {
        std::vector<wf::Region> members;
        for (const auto& m : j.at("members")) members.push_back(wf::region_from_json(m));
        return wf::Covering::explicit_list(std::move(members));
      }
      return wf::Covering::dilated(wf::mat_from_json(j.at("matrix")),
                                   wf::region_from_json(j.at("base")),
                                   j.at("j_min").get<int>(), j.at("j_max").get<int>());
    }();
    wf::Region probe = wf::region_from_json(parse_json(probe_region_json, "probe region"));
    *out = wf::covering_index(cov, probe, probe_step);
  });
}

int wf_rpu_sum_squares(const char* rpu_json, const double* x, int dim, double* out) {
  return guarded([&] {
    wf::Rpu r = wf::rpu_from_json(parse_json(rpu_json, "rpu"));
    *out = r.sum_squares(std::vector<double>(x, x + dim));
  });
}

int wf_rpu_bounds(const char* rpu_json, const char* region_json, double probe_step,
                  char** report_json) {
  return guarded([&] {
    wf::Rpu r = wf::rpu_from_json(parse_json(rpu_json, "rpu"));
    wf::Region region = wf::region_from_json(parse_json(region_json, "region"));
    wf::RpuBounds b = wf::rpu_bounds(r, region, probe_step);
    *report_json = dup_string(wf::json_dump(wf::rpu_bounds_to_json(b)));
  });
}

int wf_rpu_normalize(const char* rpu_json, char** normalized_rpu_json) {
  return guarded([&] {
    wf::Rpu r = wf::rpu_from_json(parse_json(rpu_json, "rpu"));
    wf::Rpu n = wf::Rpu::normalized(std::move(r));
    *normalized_rpu_json = dup_string(wf::json_dump(wf::rpu_to_json(n)));
  });
}

int wf_frame_bounds(const wf_pointset* ps, const char* region_json, const char* method,
                    int measure_normalized, int ensemble, uint64_t seed, char** report_json) {
  return guarded([&] {
    wf::Region region = wf::region_from_json(parse_json(region_json, "region"));
    auto norm = measure_normalized ? wf::ExponentialSystem::Normalization::measure_normalized
                                   : wf::ExponentialSystem::Normalization::raw;
    wf::ExponentialSystem sys(ps->ps, region, norm);
    std::string m = method ? method : "gram";
    wf::FrameBounds b =
        m == "empirical"
            ? wf::frame_bounds_empirical_bandlimited(sys, ensemble > 0 ? ensemble : 200, seed)
            : m == "empirical-span"
                  ? wf::frame_bounds_empirical_span(sys, ensemble > 0 ? ensemble : 64, seed)
                  : wf::frame_bounds_gram(sys);
    *report_json = dup_string(wf::json_dump(wf::bounds_to_json(b)));
  });
}

int wf_gram_csv(const wf_pointset* ps, const char* region_json, int measure_normalized,
                const char* path) {
  return guarded([&] {
    wf::Region region = wf::region_from_json(parse_json(region_json, "region"));
    auto norm = measure_normalized ? wf::ExponentialSystem::Normalization::measure_normalized
                                   : wf::ExponentialSystem::Normalization::raw;
    wf::ExponentialSystem sys(ps->ps, region, norm);
    wf::gram_write_csv(sys.gram(), path);
  });
}

int wf_check_beurling_1d(const wf_pointset* ps, double a, double density_r, int* out) {
  return guarded([&] { *out = wf::check_beurling_1d(ps->ps, a, density_r) ? 1 : 0; });
}

int wf_check_beurling_ball(const wf_pointset* ps, double r, const char* gap_region_json,
                           double probe_step, int* out) {
  return guarded([&] {
    wf::Region region = wf::region_from_json(parse_json(gap_region_json, "gap region"));
    *out = wf::check_beurling_ball(ps->ps, r, region, probe_step) ? 1 : 0;
  });
}

int wf_check_kadec(const wf_pointset* ps, double spacing, double L, int* out) {
  return guarded([&] { *out = wf::check_kadec(ps->ps, spacing, L) ? 1 : 0; });
}

int wf_system_build(const char* entry, const char* overrides_json, wf_system** out) {
  return guarded([&] {
    auto ov = overrides_of(overrides_json);
    *out = new wf_system{wf::build_gallery_entry(entry, ov), ov};
  });
}

int wf_system_from_manifest_file(const char* path, wf_system** out) {
  return guarded([&] {
    std::ifstream in(path);
    if (!in) wf::fail(wf::ErrorCode::io, std::string("cannot open manifest: ") + path);
    wf::json manifest = wf::json::parse(in, nullptr, false);
    if (manifest.is_discarded())
      wf::fail(wf::ErrorCode::io, std::string("malformed manifest: ") + path);
    std::map<std::string, double> ov;
    if (manifest.contains("overrides"))
      for (auto it = manifest.at("overrides").begin(); it != manifest.at("overrides").end(); ++it)
        ov[it.key()] = it.value().get<double>();
    *out = new wf_system{wf::entry_from_manifest(manifest), ov};
  });
}

void wf_system_free(wf_system* sys) { delete sys; }

int wf_system_manifest(const wf_system* sys, char** manifest_json) {
  return guarded([&] {
    *manifest_json =
        dup_string(wf::json_dump(wf::manifest_to_json(sys->entry, sys->overrides)));
  });
}

int wf_system_validate(const wf_system* sys, const char* options_json, char** report_json) {
  return guarded([&] {
    wf::ValidationOptions opt;
    if (options_json && *options_json) {
      wf::json j = parse_json(options_json, "options");
      opt.ensemble = j.value("ensemble", opt.ensemble);
      opt.seed = j.value("seed", opt.seed);
      opt.recon_signals = j.value("recon_signals", opt.recon_signals);
    }
    wf::ValidationReport rep = wf::validate_entry(sys->entry, opt);
    *report_json = dup_string(wf::json_dump(wf::validation_to_json(rep)));
  });
}

int wf_system_build_artifacts(const wf_system* sys, const char* options_json,
                              const char* out_dir, char** summary_json) {
  return guarded([&] {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const wf::GalleryEntry& entry = sys->entry;
    wf::json manifest = wf::manifest_to_json(entry, sys->overrides);
    std::ofstream(fs::path(out_dir) / "manifest.json") << wf::json_dump(manifest);

    wf::ValidationOptions opt;
    if (options_json && *options_json) {
      wf::json j = parse_json(options_json, "options");
      opt.ensemble = j.value("ensemble", opt.ensemble);
      opt.seed = j.value("seed", opt.seed);
      opt.recon_signals = j.value("recon_signals", opt.recon_signals);
    }
    wf::ValidationReport rep = wf::validate_entry(entry, opt);
    std::ofstream(fs::path(out_dir) / "validation.json")
        << wf::json_dump(wf::validation_to_json(rep));

    // plot-ready CSVs: time profile of the center atom per level, the
    // frequency support boxes, and the coefficient energy map of a seeded
    // test signal
    {
      std::ofstream atoms(fs::path(out_dir) / "atom_profile.csv");
      atoms.precision(12);
      atoms << "level,x,re,im\n";
      if (entry.system.dim == 1) {
        std::vector<double> node(1, 0.0);
        for (size_t li = 0; li < entry.system.levels.size(); ++li) {
          for (int i = -400; i <= 400; ++i) {
            double x = i * 0.05;
            wf::cplx v = wf::atom_eval_time(entry.system, li, node, {x});
            atoms << li << "," << x << "," << v.real() << "," << v.imag() << "\n";
          }
        }
      }
    }
    {
      std::ofstream supports(fs::path(out_dir) / "frequency_supports.csv");
      supports.precision(12);
      supports << "level,axis,lo,hi\n";
      for (size_t li = 0; li < entry.system.levels.size(); ++li) {
        wf::BoxD bb = entry.system.levels[li].support_omega.bounding_box();
        for (int axis = 0; axis < entry.system.dim; ++axis)
          supports << li << "," << axis << "," << bb.lo[axis] << "," << bb.hi[axis] << "\n";
      }
    }
    {
      auto fns = wf::make_system_ensemble(entry.system, 1, opt.seed);
      wf::AnalysisResult ar = entry.grid_ensembles
                                  ? wf::analyze_field(entry.system,
                                                      wf::SampledField::sample(
                                                          fns[0], entry.system.grid_box,
                                                          entry.system.grid_dims))
                                  : wf::analyze_function(entry.system, fns[0]);
      std::ofstream energy(fs::path(out_dir) / "coefficient_energy.csv");
      energy.precision(12);
      energy << "level,energy\n";
      for (size_t li = 0; li < ar.levels.size(); ++li)
        energy << li << "," << ar.levels[li].energy() << "\n";
    }

    wf::json summary;
    summary["entry"] = entry.name;
    summary["passed"] = rep.passed;
    summary["out_dir"] = std::string(out_dir);
    *summary_json = dup_string(wf::json_dump(summary));
  });
}

int wf_field_read(const char* path, wf_field** out) {
  return guarded([&] { *out = new wf_field{wf::SampledField::read_auto(path)}; });
}

int wf_field_write(const wf_field* f, const char* path, const char* format) {
  return guarded([&] {
    std::string fmt = format ? format : "wfg";
    if (fmt == "csv") f->field.write_csv(path);
    else f->field.write_binary(path);
  });
}

void wf_field_free(wf_field* f) { delete f; }

int wf_field_info(const wf_field* f, char** info_json) {
  return guarded([&] {
    wf::json j;
    j["dim"] = f->field.dim();
    j["dims"] = f->field.dims();
    j["lo"] = f->field.box().lo;
    j["hi"] = f->field.box().hi;
    j["norm2"] = f->field.norm2();
    *info_json = dup_string(wf::json_dump(j));
  });
}

int wf_field_test_signal(const wf_system* sys, uint64_t seed, wf_field** out) {
  return guarded([&] {
    auto fns = wf::make_system_ensemble(sys->entry.system, 1, seed);
    *out = new wf_field{wf::SampledField::sample(fns[0], sys->entry.system.grid_box,
                                                 sys->entry.system.grid_dims)};
  });
}

int wf_analyze(const wf_system* sys, const wf_field* f, wf_coeffs** out) {
  return guarded([&] { *out = new wf_coeffs{wf::analyze_field(sys->entry.system, f->field)}; });
}

void wf_coeffs_free(wf_coeffs* c) { delete c; }

int wf_coeffs_write_csv(const wf_coeffs* c, const char* path) {
  return guarded([&] { wf::coeffs_write_csv(c->ar, path); });
}

int wf_coeffs_read_csv(const wf_system* sys, const wf_field* grid_template, const char* path,
                       wf_coeffs** out) {
  return guarded([&] {
    wf::SampledField zeros(grid_template->field.box(), grid_template->field.dims());
    wf::AnalysisResult plan = wf::analyze_field(sys->entry.system, zeros);
    *out = new wf_coeffs{wf::coeffs_read_csv(path, plan)};
  });
}

int wf_reconstruct(const wf_system* sys, const wf_coeffs* c, const wf_field* grid_template,
                   const wf_field* reference, wf_field** out, char** report_json) {
  return guarded([&] {
    wf::ReconstructionReport rep;
    wf::SampledField rec = wf::reconstruct_full(
        sys->entry.system, c->ar, grid_template->field.box(), grid_template->field.dims(),
        reference ? &reference->field : nullptr, {}, &rep);
    wf::json j;
    j["final_rel_error"] = rep.final_rel_error;
    j["denom_threshold"] = rep.denom_threshold;
    j["level_engines"] = rep.level_engines;
    j["level_rel_errors"] = rep.level_rel_errors;
    j["grid_dims"] = rep.grid_dims;
    wf::json order = wf::json::array();
    for (const auto& lbl : rep.level_order) order.push_back(lbl);
    j["level_order"] = order;
    *report_json = dup_string(wf::json_dump(j));
    *out = new wf_field{std::move(rec)};
  });
}

int wf_empirical_frame_bounds(const wf_system* sys, int ensemble, uint64_t seed,
                              char** report_json) {
  return guarded([&] {
    wf::EmpiricalReport er = wf::empirical_frame_bounds(sys->entry.system, ensemble, seed,
                                                        sys->entry.grid_ensembles);
    wf::json j = wf::bounds_to_json(er.bounds);
    j["ratios"] = er.ratios;
    j["predicted"] = wf::bounds_to_json(sys->entry.system.predicted);
    *report_json = dup_string(wf::json_dump(j));
  });
}

}  // extern "C"
