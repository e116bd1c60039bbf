#include "wf/serialize.hpp"

#include <fstream>
#include <sstream>

namespace wf {

namespace {

json vec_to_json(const std::vector<double>& v) { return json(v); }

std::vector<double> vec_from_json(const json& j) {
  if (!j.is_array()) fail(ErrorCode::io, "expected a number list");
  return j.get<std::vector<double>>();
}

cplx cplx_from_json(const json& j, const char* re, const char* im) {
  return cplx(j.value(re, 1.0), j.value(im, 0.0));
}

}  // namespace

std::string json_dump(const json& j) { return j.dump(2) + "\n"; }

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (int c = 0; c < m.cols; ++c) row.push_back(m(i, c));
    rows.push_back(row);
  }
  return rows;
}

Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::io, "matrix: expected rows");
  int rows = int(j.size());
  int cols = int(j[0].size());
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (int(j[i].size()) != cols) fail(ErrorCode::io, "matrix: ragged rows");
    for (int c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

json region_to_json(const Region& r) {
  json j;
  switch (r.kind()) {
    case Region::Kind::box: {
      j["shape"] = "box";
      j["lo"] = vec_to_json(r.box_params().lo);
      j["hi"] = vec_to_json(r.box_params().hi);
      return j;
    }
    case Region::Kind::annulus_sector: {
      const auto& s = r.sector_params();
      j["shape"] = "annulus_sector";
      j["r0"] = s.r0;
      j["r1"] = s.r1;
      j["theta0"] = s.theta0;
      j["theta1"] = s.theta1;
      return j;
    }
    case Region::Kind::spiral_sector: {
      const auto& s = r.spiral_params();
      j["shape"] = "spiral_sector";
      j["a"] = s.a;
      j["b"] = s.b;
      j["lambda0"] = s.l0;
      j["lambda1"] = s.l1;
      j["t0"] = s.t0;
      j["t1"] = s.t1;
      return j;
    }
    case Region::Kind::affine: {
      j["shape"] = "affine";
      j["matrix"] = mat_to_json(r.matrix());
      j["offset"] = vec_to_json(r.offset());
      j["base"] = region_to_json(r.base());
      return j;
    }
    case Region::Kind::set_union: {
      j["shape"] = "union";
      json parts = json::array();
      for (const auto& p : r.parts()) parts.push_back(region_to_json(p));
      j["parts"] = parts;
      return j;
    }
    case Region::Kind::difference: {
      j["shape"] = "difference";
      j["outer"] = region_to_json(r.base());
      j["inner"] = region_to_json(r.inner());
      j["nested"] = r.difference_nested();
      return j;
    }
    case Region::Kind::product: {
      j["shape"] = "product";
      j["first"] = region_to_json(r.product_first());
      j["second"] = region_to_json(r.product_second());
      return j;
    }
  }
  fail(ErrorCode::io, "region_to_json: unknown kind");
}

Region region_from_json(const json& j) {
  std::string shape = j.value("shape", "");
  if (shape == "box") return Region::box(vec_from_json(j.at("lo")), vec_from_json(j.at("hi")));
  if (shape == "interval")
    return Region::interval(j.at("lo").get<double>(), j.at("hi").get<double>());
  if (shape == "annulus_sector")
    return Region::annulus_sector(j.at("r0").get<double>(), j.at("r1").get<double>(),
                                  j.value("theta0", 0.0), j.value("theta1", TWO_PI));
  if (shape == "annulus")
    return Region::annulus(j.at("r0").get<double>(), j.at("r1").get<double>());
  if (shape == "spiral_sector")
    return Region::spiral_sector(j.at("a").get<double>(), j.value("b", TWO_PI),
                                 j.at("lambda0").get<double>(), j.at("lambda1").get<double>(),
                                 j.at("t0").get<double>(), j.at("t1").get<double>());
  if (shape == "affine") {
    Mat m = mat_from_json(j.at("matrix"));
    std::vector<double> off =
        j.contains("offset") ? vec_from_json(j.at("offset")) : std::vector<double>(m.rows, 0.0);
    return Region::affine_image(m, off, region_from_json(j.at("base")));
  }
  if (shape == "union") {
    std::vector<Region> parts;
    for (const auto& p : j.at("parts")) parts.push_back(region_from_json(p));
    return Region::set_union(std::move(parts));
  }
  if (shape == "mirror") return Region::with_negation(region_from_json(j.at("base")));
  if (shape == "difference")
    return Region::difference(region_from_json(j.at("outer")), region_from_json(j.at("inner")),
                              j.value("nested", false));
  if (shape == "product")
    return Region::product(region_from_json(j.at("first")), region_from_json(j.at("second")));
  fail(ErrorCode::io, "region_from_json: unknown shape '" + shape + "'");
}

json pointset_to_json(const PointSet& p) {
  json j;
  j["dim"] = p.dim();
  j["points"] = json::array();
  for (const auto& x : p.points()) j["points"].push_back(vec_to_json(x));
  return j;
}

PointSet pointset_from_json(const json& j) {
  int dim = j.at("dim").get<int>();
  std::vector<std::vector<double>> pts;
  for (const auto& x : j.at("points")) pts.push_back(vec_from_json(x));
  return PointSet(dim, std::move(pts));
}

json window_to_json(const Window& w) {
  WindowInfo info = WindowInfo::of(w);
  json j;
  j["kind"] = info.kind;
  if (info.kind == "indicator") {
    j["region"] = region_to_json(w.support());
  } else if (info.kind == "bspline_1d") {
    j["degree"] = info.degree;
    j["scale"] = info.scale;
    j["shift"] = info.shift;
    j["amp_re"] = info.amp.real();
    j["amp_im"] = info.amp.imag();
  } else if (info.kind == "radial_bspline") {
    j["degree"] = info.degree;
    j["dim"] = w.dim();
  } else if (info.kind == "tensor" || info.kind == "mirror" || info.kind == "scaled" ||
             info.kind == "conjugated" || info.kind == "affine_arg") {
    json kids = json::array();
    for (const auto& c : info.children) kids.push_back(window_to_json(c));
    if (info.kind == "tensor") j["factors"] = kids;
    else j["base"] = kids[0];
    if (info.kind == "scaled") {
      j["amp_re"] = info.amp.real();
      j["amp_im"] = info.amp.imag();
    }
    if (info.kind == "affine_arg") {
      j["matrix"] = mat_to_json(info.M);
      j["shift"] = vec_to_json(info.offset);
    }
  } else if (info.kind == "bump_box") {
    j["core_lo"] = vec_to_json(info.core.lo);
    j["core_hi"] = vec_to_json(info.core.hi);
    j["margins"] = vec_to_json(info.margins);
    j["smoothness"] = info.smooth;
  } else if (info.kind == "bump_sector") {
    j["r0"] = info.sector.r0;
    j["r1"] = info.sector.r1;
    j["theta0"] = info.sector.theta0;
    j["theta1"] = info.sector.theta1;
    j["radial_margin"] = info.margins[0];
    j["angular_margin"] = info.margins[1];
    j["smoothness"] = info.smooth;
  } else if (info.kind == "bump_spiral") {
    j["a"] = info.spiral.a;
    j["b"] = info.spiral.b;
    j["lambda0"] = info.spiral.l0;
    j["lambda1"] = info.spiral.l1;
    j["t0"] = info.spiral.t0;
    j["t1"] = info.spiral.t1;
    j["tau_margin"] = info.tau_margin;
    j["t_margin"] = info.t_margin;
    j["smoothness"] = info.smooth;
  } else if (info.kind == "bump_box_ring") {
    j["outer_lo"] = vec_to_json(info.core.lo);
    j["outer_hi"] = vec_to_json(info.core.hi);
    j["inner_lo"] = vec_to_json(info.inner_core.lo);
    j["inner_hi"] = vec_to_json(info.inner_core.hi);
    j["outer_margin"] = info.margins[0];
    j["inner_margin"] = info.margins[1];
    j["smoothness"] = info.smooth;
  } else {
    fail(ErrorCode::io, "window_to_json: unsupported kind " + info.kind);
  }
  return j;
}

Window window_from_json(const json& j) {
  std::string kind = j.value("kind", "");
  if (kind == "indicator") return Window::indicator(region_from_json(j.at("region")));
  if (kind == "bspline_1d")
    return Window::bspline_1d(j.at("degree").get<int>(), j.value("scale", 1.0),
                              j.value("shift", 0.0), cplx_from_json(j, "amp_re", "amp_im"));
  if (kind == "radial_bspline")
    return Window::radial_bspline(j.at("degree").get<int>(), j.value("dim", 2));
  if (kind == "tensor") {
    std::vector<Window> factors;
    for (const auto& f : j.at("factors")) factors.push_back(window_from_json(f));
    return Window::tensor(std::move(factors));
  }
  if (kind == "bump_box")
    return Window::bump_box(BoxD{vec_from_json(j.at("core_lo")), vec_from_json(j.at("core_hi"))},
                            vec_from_json(j.at("margins")), j.value("smoothness", 2));
  if (kind == "bump_sector")
    return Window::bump_sector(j.at("r0").get<double>(), j.at("r1").get<double>(),
                               j.at("theta0").get<double>(), j.at("theta1").get<double>(),
                               j.at("radial_margin").get<double>(),
                               j.at("angular_margin").get<double>(), j.value("smoothness", 2));
  if (kind == "bump_spiral")
    return Window::bump_spiral(j.at("a").get<double>(), j.value("b", TWO_PI),
                               j.at("lambda0").get<double>(), j.at("lambda1").get<double>(),
                               j.at("t0").get<double>(), j.at("t1").get<double>(),
                               j.at("tau_margin").get<double>(), j.at("t_margin").get<double>(),
                               j.value("smoothness", 2));
  if (kind == "bump_box_ring")
    return Window::bump_box_ring(
        BoxD{vec_from_json(j.at("outer_lo")), vec_from_json(j.at("outer_hi"))},
        j.at("outer_margin").get<double>(),
        BoxD{vec_from_json(j.at("inner_lo")), vec_from_json(j.at("inner_hi"))},
        j.at("inner_margin").get<double>(), j.value("smoothness", 2));
  if (kind == "mirror") return Window::mirror(window_from_json(j.at("base")));
  if (kind == "scaled")
    return Window::scaled(window_from_json(j.at("base")), cplx_from_json(j, "amp_re", "amp_im"));
  if (kind == "conjugated") return Window::conjugated(window_from_json(j.at("base")));
  if (kind == "affine_arg")
    return Window::compose_affine(window_from_json(j.at("base")), mat_from_json(j.at("matrix")),
                                  vec_from_json(j.at("shift")));
  fail(ErrorCode::io, "window_from_json: unknown kind '" + kind + "'");
}

json rpu_to_json(const Rpu& r) {
  json j;
  j["kind"] = r.normalized() ? "normalized" : "explicit";
  json members = json::array(), labels = json::array();
  for (size_t i = 0; i < r.size(); ++i) {
    members.push_back(window_to_json(r.member(i)));
    labels.push_back(r.label(i));
  }
  j["windows"] = members;
  j["labels"] = labels;
  if (r.has_regions()) {
    json regions = json::array();
    for (size_t i = 0; i < r.size(); ++i) regions.push_back(region_to_json(r.region(i)));
    j["regions"] = regions;
  }
  if (r.normalized() && r.declared_union())
    j["declared_union"] = region_to_json(*r.declared_union());
  return j;
}

Rpu rpu_from_json(const json& j) {
  std::string kind = j.value("kind", "explicit");
  if (kind == "dilation") {
    Window h = window_from_json(j.at("window"));
    Mat A = mat_from_json(j.at("matrix"));
    return Rpu::dilation_family(h, A, j.at("j_min").get<int>(), j.at("j_max").get<int>());
  }
  if (kind == "translation") {
    Window h = window_from_json(j.at("window"));
    return Rpu::translation_family(h, vec_from_json(j.at("step")), j.at("j_min").get<int>(),
                                   j.at("j_max").get<int>());
  }
  std::vector<Window> windows;
  for (const auto& w : j.at("windows")) windows.push_back(window_from_json(w));
  std::vector<int> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<int>>();
  Rpu r = Rpu::explicit_list(std::move(windows), std::move(labels));
  if (j.contains("regions")) {
    std::vector<Region> regions;
    for (const auto& rg : j.at("regions")) regions.push_back(region_from_json(rg));
    r.declare_regions(std::move(regions));
  }
  if (kind == "normalized") {
    std::optional<Region> u;
    if (j.contains("declared_union")) u = region_from_json(j.at("declared_union"));
    return Rpu::normalized(std::move(r), std::move(u));
  }
  return r;
}

json bounds_to_json(const FrameBounds& b) {
  json j;
  j["m"] = b.m;
  j["M"] = b.M;
  j["kind"] = to_string(b.kind);
  j["truncation_R"] = b.truncation_R;
  j["ensemble_seed"] = b.ensemble_seed;
  if (!b.note.empty()) j["note"] = b.note;
  return j;
}

json rpu_bounds_to_json(const RpuBounds& b) {
  json j;
  j["p_hat"] = b.p_hat;
  j["P_hat"] = b.P_hat;
  j["probe_step"] = b.probe_step;
  j["probe_count"] = b.probe_count;
  json violations = json::array();
  if (b.violated) {
    json v;
    v["point"] = vec_to_json(b.argmin);
    v["sum_squares"] = b.p_hat;
    violations.push_back(v);
  }
  j["violations"] = violations;
  return j;
}

json density_to_json(const DensityEstimate& d, double separation_value, double gap_value) {
  json j;
  j["lower_density"] = d.lower;
  j["upper_density"] = d.upper;
  j["r"] = d.r;
  j["center_step"] = d.center_step;
  j["separated"] = d.separated;
  j["separation"] = separation_value;
  if (gap_value >= 0.0) j["gap"] = gap_value;
  return j;
}

json validation_to_json(const ValidationReport& r) {
  json j;
  j["schema_version"] = 1;
  j["entry"] = r.entry;
  j["passed"] = r.passed;
  j["p_hat"] = r.p_hat;
  j["P_hat"] = r.P_hat;
  j["predicted"] = bounds_to_json(r.predicted);
  j["ratio_min"] = r.ratio_min;
  j["ratio_max"] = r.ratio_max;
  j["reconstruction_error"] = r.recon_error;
  json checks = json::array();
  for (const auto& c : r.checks) {
    json cj;
    cj["name"] = c.name;
    cj["passed"] = c.passed;
    cj["details"] = c.details;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  json per_level = json::array();
  for (const auto& b : r.per_level) per_level.push_back(bounds_to_json(b));
  j["per_level_bounds"] = per_level;
  return j;
}

json manifest_to_json(const GalleryEntry& entry,
                      const std::map<std::string, double>& overrides) {
  const AtomSystem& sys = entry.system;
  json j;
  j["schema_version"] = 1;
  j["entry"] = entry.name;
  j["overrides"] = json(overrides);
  j["dim"] = sys.dim;
  j["provenance"] = sys.provenance;
  j["bound_mode"] = sys.bound_mode;
  j["predicted"] = bounds_to_json(sys.predicted);
  j["p_hat"] = sys.p_hat;
  j["P_hat"] = sys.P_hat;
  j["rpu_probe_step"] = sys.rpu_probe_step;
  j["notes"] = entry.notes;
  j["recon_tolerance"] = entry.recon_tolerance;
  json levels = json::array();
  for (const auto& lv : sys.levels) {
    json lj;
    lj["label"] = json(lv.label);
    lj["amp"] = lv.amp;
    lj["bounds"] = bounds_to_json(lv.bounds);
    lj["certified"] = lv.bounds_certified;
    BoxD bb = lv.support_omega.bounding_box();
    lj["support_lo"] = vec_to_json(bb.lo);
    lj["support_hi"] = vec_to_json(bb.hi);
    if (lv.grid.kind == GridSpec::Kind::regular_full) {
      lj["grid"] = {{"kind", "regular"}, {"spacing", json(lv.grid.spacing)}};
    } else {
      lj["grid"] = {{"kind", "explicit"},
                    {"count", lv.grid.points->size()},
                    {"truncation_R", lv.grid.truncation_R}};
    }
    levels.push_back(lj);
  }
  j["levels"] = levels;
  j["grid"] = {{"lo", vec_to_json(sys.grid_box.lo)},
               {"hi", vec_to_json(sys.grid_box.hi)},
               {"dims", json(sys.grid_dims)}};
  return j;
}

GalleryEntry entry_from_manifest(const json& manifest) {
  std::string name = manifest.at("entry").get<std::string>();
  std::map<std::string, double> overrides;
  if (manifest.contains("overrides"))
    for (auto it = manifest.at("overrides").begin(); it != manifest.at("overrides").end(); ++it)
      overrides[it.key()] = it.value().get<double>();
  return build_gallery_entry(name, overrides);
}

void coeffs_write_csv(const AnalysisResult& ar, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write coefficients: " + path);
  out.precision(17);
  out << "# coefficients schema 1\n";
  out << "# f_norm2 " << ar.f_norm2 << "\n";
  for (size_t li = 0; li < ar.levels.size(); ++li) {
    const LevelCoeffs& lc = ar.levels[li];
    out << "# level " << li << " engine " << lc.engine << " layout "
        << (lc.layout == LevelCoeffs::Layout::regular ? "regular" : "explicit") << " count "
        << lc.c.size() << " truncation_R " << lc.truncation_R << "\n";
  }
  out << "j,k,re,im\n";
  for (size_t li = 0; li < ar.levels.size(); ++li) {
    const LevelCoeffs& lc = ar.levels[li];
    for (size_t k = 0; k < lc.c.size(); ++k)
      out << li << "," << k << "," << lc.c[k].real() << "," << lc.c[k].imag() << "\n";
  }
}

AnalysisResult coeffs_read_csv(const std::string& path, const AnalysisResult& plan) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open coefficients: " + path);
  AnalysisResult out = plan;
  for (auto& lv : out.levels) std::fill(lv.c.begin(), lv.c.end(), cplx(0.0, 0.0));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'j') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 4) fail(ErrorCode::io, path + ": bad coefficient row");
    size_t li = std::stoul(cells[0]), k = std::stoul(cells[1]);
    if (li >= out.levels.size() || k >= out.levels[li].c.size())
      fail(ErrorCode::io, path + ": coefficient index outside the planned layout");
    out.levels[li].c[k] = cplx(std::stod(cells[2]), std::stod(cells[3]));
  }
  return out;
}

void gram_write_csv(const CMat& G, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write gram: " + path);
  out.precision(17);
  for (int i = 0; i < G.rows; ++i) {
    for (int c = 0; c < G.cols; ++c) {
      if (c) out << ",";
      out << G(i, c).real() << "," << G(i, c).imag();
    }
    out << "\n";
  }
}

}  // namespace wf
