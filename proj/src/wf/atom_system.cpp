#include "wf/atom_system.hpp"

#include <algorithm>
#include <cmath>

#include "wf/covering.hpp"
#include "wf/quadrature.hpp"

namespace wf {

GridSpec GridSpec::regular(std::vector<double> spacing) {
  GridSpec g;
  g.kind = Kind::regular_full;
  for (double s : spacing)
    if (!(s > 0.0)) fail(ErrorCode::domain, "GridSpec: spacing must be positive");
  g.spacing = std::move(spacing);
  return g;
}

GridSpec GridSpec::explicit_list(PointSet pts) {
  GridSpec g;
  g.kind = Kind::explicit_points;
  double R = 0.0;
  for (const auto& p : pts.points())
    for (double c : p) R = std::max(R, std::abs(c));
  g.truncation_R = R;
  g.points = std::move(pts);
  return g;
}

PointSet GridSpec::materialize(int dim, double R) const {
  if (kind == Kind::explicit_points) return *points;
  if (int(spacing.size()) != dim) fail(ErrorCode::domain, "GridSpec: dimension mismatch");
  std::vector<long> kmax(dim);
  for (int i = 0; i < dim; ++i) kmax[i] = long(std::floor(R / spacing[i]));
  std::vector<std::vector<double>> pts;
  std::vector<long> idx(dim);
  for (int i = 0; i < dim; ++i) idx[i] = -kmax[i];
  for (;;) {
    std::vector<double> p(dim);
    for (int i = 0; i < dim; ++i) p[i] = idx[i] * spacing[i];
    pts.push_back(std::move(p));
    int axis = 0;
    while (axis < dim && ++idx[axis] > kmax[axis]) {
      idx[axis] = -kmax[axis];
      ++axis;
    }
    if (axis == dim) break;
  }
  return PointSet(dim, std::move(pts));
}

AtomLevel::AtomLevel(Window w, const Mat& pull, double amplitude, GridSpec g)
    : B(pull),
      Binv(mat_inverse(pull)),
      h(std::move(w)),
      support_omega(Region::linear_image(mat_inverse(pull), h.support())),
      amp(amplitude),
      grid(std::move(g)) {
  abs_det_B = std::abs(mat_det(B));
  if (!(abs_det_B > 1e-300)) fail(ErrorCode::precondition, "AtomLevel: singular pull matrix");
}

cplx AtomLevel::atom_value(const std::vector<double>& x_node,
                           const std::vector<double>& omega) const {
  std::vector<double> u = mat_apply(B, omega);
  cplx hv = h.value(u);
  if (hv == cplx(0.0, 0.0)) return hv;
  double ph = 0.0;
  for (size_t i = 0; i < u.size(); ++i) ph += x_node[i] * u[i];
  return amp * hv * cplx(std::cos(-TWO_PI * ph), std::sin(-TWO_PI * ph));
}

std::string to_string(GlueMode m) {
  switch (m) {
    case GlueMode::rpu_general: return "rpu-general";
    case GlueMode::level_set: return "level-set";
    case GlueMode::covering: return "covering";
  }
  return "?";
}

FrameBounds glue_predicted_bounds(GlueMode mode, double p_hat, double P_hat, double m_inf,
                                  double M_sup, double c) {
  if (!(p_hat > 0.0) || !(P_hat >= p_hat))
    fail(ErrorCode::precondition, "glue: RPU bounds must satisfy 0 < p <= P");
  if (!(m_inf > 0.0) || !std::isfinite(M_sup))
    fail(ErrorCode::precondition, "glue: per-level bounds must be uniform (0 < inf m, sup M < inf)");
  FrameBounds out;
  if (mode == GlueMode::rpu_general) {
    out.m = p_hat * m_inf;
  } else {
    if (!(c > 0.0) || c > p_hat + 1e-12)
      fail(ErrorCode::precondition, "glue: level-set constant must satisfy 0 < c <= p");
    out.m = c * m_inf;
  }
  out.M = P_hat * M_sup;
  out.kind = FrameBounds::Kind::certified_sufficient;
  out.note = "glued bounds, mode " + to_string(mode);
  return out;
}

namespace {

// RPU + per-level covering/bounds validation shared by the builders.
void finalize_system(AtomSystem& sys, double probe_step, int probe_count, uint64_t seed,
                     GlueMode mode, double c) {
  // covering check on random probe points of the working region
  BoxD bb = sys.working_region.bounding_box();
  Rng rng(seed);
  std::vector<Region> level_regions;
  for (const auto& lv : sys.levels) level_regions.push_back(lv.support_omega);
  Covering cov = Covering::explicit_list(level_regions);
  std::vector<std::vector<double>> probes;
  int tries = 0;
  while (int(probes.size()) < probe_count && tries < probe_count * 64) {
    ++tries;
    std::vector<double> x(sys.dim);
    for (int i = 0; i < sys.dim; ++i) x[i] = rng.uniform(bb.lo[i], bb.hi[i]);
    if (sys.working_region.contains(x)) probes.push_back(std::move(x));
  }
  if (probes.empty()) fail(ErrorCode::config, "build: working region has no probe points");
  CoverStats st = covering_stats(cov, probes);
  if (st.min_multiplicity < 1)
    fail(ErrorCode::construction,
         "build: covering hole in the working region at " + format_point(st.witness_uncovered));

  RpuBounds rb = rpu_bounds(sys.rpu, sys.working_region, probe_step);
  if (rb.violated)
    fail(ErrorCode::construction,
         "build: RPU lower bound vanishes at " + format_point(rb.argmin));
  sys.p_hat = rb.p_hat;
  sys.P_hat = rb.P_hat;
  sys.rpu_probe_step = rb.probe_step;

  double m_inf = std::numeric_limits<double>::infinity(), M_sup = 0.0;
  std::string offending;
  for (size_t i = 0; i < sys.levels.size(); ++i) {
    const FrameBounds& b = sys.levels[i].bounds;
    if (!(b.m > 0.0) || !std::isfinite(b.M)) {
      offending += (offending.empty() ? "" : ", ") + std::to_string(i);
      continue;
    }
    m_inf = std::min(m_inf, b.m);
    M_sup = std::max(M_sup, b.M);
  }
  if (!offending.empty())
    fail(ErrorCode::construction, "build: per-level bounds not uniform; offending levels " + offending);
  sys.m_inf = m_inf;
  sys.M_sup = M_sup;
  sys.predicted = glue_predicted_bounds(mode, sys.p_hat, sys.P_hat, m_inf, M_sup, c);
  sys.bound_mode = to_string(mode);
}

}  // namespace

AtomSystem build_wavelet_frame(const WaveletFrameSpec& spec) {
  if (spec.levels.empty()) fail(ErrorCode::domain, "build_wavelet_frame: no levels");
  AtomSystem sys;
  sys.dim = spec.h.dim();
  sys.provenance = spec.provenance;
  sys.working_region = spec.working_region;
  sys.safe_boxes = spec.safe_boxes;
  sys.safe_spec = spec.safe_spec;
  sys.grid_box = spec.grid_box;
  sys.grid_dims = spec.grid_dims;
  sys.canonical_log2 = spec.canonical_log2;

  std::vector<Mat> pulls;
  std::vector<int> labels;
  for (const auto& lv : spec.levels) {
    double det = mat_det(lv.A);
    if (std::abs(det) < 1e-12)
      fail(ErrorCode::precondition, "build_wavelet_frame: |det A_j| too small");
    Mat B = mat_inverse(mat_transpose(lv.A));
    double absdetB = std::abs(mat_det(B));
    AtomLevel level(spec.h, B, std::sqrt(absdetB), lv.grid);
    level.label = lv.label;
    if (lv.bounds) {
      level.bounds = *lv.bounds;
      level.bounds_certified = lv.bounds->kind == FrameBounds::Kind::certified_sufficient;
    } else {
      if (lv.grid.kind == GridSpec::Kind::regular_full) {
        auto tight = tight_bound_box_fit(lv.grid.spacing, spec.h.support());
        if (!tight)
          fail(ErrorCode::precondition,
               "build_wavelet_frame: regular grid does not box-fit the window support; "
               "supply explicit points or certified bounds");
        FrameBounds fb;
        fb.m = fb.M = *tight;
        fb.kind = FrameBounds::Kind::certified_sufficient;
        fb.note = "regular lattice box-fit (tight)";
        level.bounds = fb;
        level.bounds_certified = true;
      } else {
        ExponentialSystem es(*lv.grid.points, spec.h.support());
        level.bounds = frame_bounds_gram(es);
        level.bounds_certified = false;
      }
    }
    pulls.push_back(level.B);
    labels.push_back(int(labels.size()));
    sys.levels.push_back(std::move(level));
  }
  sys.rpu = Rpu::pullback_family(spec.h, pulls, labels);
  finalize_system(sys, spec.rpu_probe_step, spec.covering_probe_count, spec.probe_seed,
                  GlueMode::rpu_general, 0.0);
  return sys;
}

AtomSystem build_tf_atoms(const TfFrameSpec& spec) {
  if (spec.levels.empty()) fail(ErrorCode::domain, "build_tf_atoms: no levels");
  AtomSystem sys;
  sys.dim = spec.levels.front().h.dim();
  sys.provenance = spec.provenance;
  sys.working_region = spec.working_region;
  sys.safe_boxes = spec.safe_boxes;
  sys.safe_spec = spec.safe_spec;
  sys.grid_box = spec.grid_box;
  sys.grid_dims = spec.grid_dims;
  sys.canonical_log2 = spec.canonical_log2;

  std::vector<Window> windows;
  std::vector<int> labels;
  std::vector<Region> regions;
  for (const auto& lv : spec.levels) {
    double mu = lv.S.measure();
    if (!(mu > 0.0)) fail(ErrorCode::precondition, "build_tf_atoms: S_j must have positive measure");
    double amp = spec.measure_normalize ? 1.0 / std::sqrt(mu) : 1.0;
    AtomLevel level(lv.h, Mat::identity(sys.dim), amp, lv.grid);
    level.label = lv.label;
    if (lv.bounds) {
      level.bounds = *lv.bounds;
      level.bounds_certified = lv.bounds->kind == FrameBounds::Kind::certified_sufficient;
    } else {
      auto norm_mode = spec.measure_normalize
                           ? ExponentialSystem::Normalization::measure_normalized
                           : ExponentialSystem::Normalization::raw;
      if (lv.grid.kind == GridSpec::Kind::regular_full) {
        auto tight = tight_bound_box_fit(lv.grid.spacing, lv.S);
        if (!tight)
          fail(ErrorCode::precondition,
               "build_tf_atoms: regular grid does not box-fit S_j; supply explicit points");
        FrameBounds fb;
        fb.m = fb.M = spec.measure_normalize ? *tight / mu : *tight;
        fb.kind = FrameBounds::Kind::certified_sufficient;
        fb.note = "regular lattice box-fit (tight)";
        level.bounds = fb;
        level.bounds_certified = true;
      } else {
        ExponentialSystem es(*lv.grid.points, lv.S, norm_mode);
        level.bounds = frame_bounds_gram(es);
      }
    }
    windows.push_back(lv.h);
    labels.push_back(int(labels.size()));
    regions.push_back(lv.S);
    sys.levels.push_back(std::move(level));
  }
  sys.rpu = Rpu::explicit_list(windows, labels);
  sys.rpu.declare_regions(regions);
  auto violation = sys.rpu.find_support_violation();
  if (violation)
    fail(ErrorCode::construction,
         "build_tf_atoms: window support escapes S_j at level " +
             std::to_string(violation->first) + ", witness " + format_point(violation->second));
  finalize_system(sys, spec.rpu_probe_step, 4096, 777, spec.mode, spec.level_set_c);
  return sys;
}

AtomSystem glue_frames(const Rpu& H, const std::vector<Region>& regions,
                       const std::vector<ExponentialSystem>& per_level, GlueMode mode,
                       double c, const Region& working_region,
                       const std::vector<BoxD>& safe_boxes) {
  if (H.size() != per_level.size() || H.size() != regions.size())
    fail(ErrorCode::domain, "glue_frames: family sizes disagree");
  TfFrameSpec spec;
  spec.measure_normalize = false;
  spec.working_region = working_region;
  spec.safe_boxes = safe_boxes;
  spec.mode = mode;
  spec.level_set_c = c;
  spec.provenance = "glued-frames";
  for (size_t i = 0; i < H.size(); ++i) {
    TfLevelSpec lv;
    lv.label = {H.label(i)};
    lv.h = H.member(i);
    lv.S = regions[i];
    lv.grid = GridSpec::explicit_list(per_level[i].points());
    if (per_level[i].carried_bounds()) lv.bounds = *per_level[i].carried_bounds();
    spec.levels.push_back(std::move(lv));
  }
  return build_tf_atoms(spec);
}

cplx atom_eval_time(const AtomSystem& sys, size_t level, const std::vector<double>& node,
                    const std::vector<double>& x) {
  const AtomLevel& lv = sys.levels.at(level);
  // g(x) = (amp / |det B|) * psi(B^{-T} x - node), psi the inverse transform
  // of the pulled window.
  std::vector<double> y = mat_apply(mat_transpose(lv.Binv), x);
  for (size_t i = 0; i < y.size(); ++i) y[i] -= node[i];
  double scale = lv.amp / lv.abs_det_B;

  switch (sys.time_profile.kind) {
    case TimeProfile::Kind::shannon_mirror: {
      double t = y[0];
      double s = t == 0.0 ? 1.0 : std::sin(PI * t / 2.0) / (PI * t / 2.0);
      return scale * std::cos(1.5 * PI * t) * s;
    }
    case TimeProfile::Kind::bspline_mirror: {
      double t = y[0];
      int n = sys.time_profile.n;
      double s = t == 0.0 ? 1.0 : std::sin(PI * t / n) / (PI * t / n);
      return scale * 2.0 * std::cos(1.5 * PI * t) * std::pow(s, n);
    }
    case TimeProfile::Kind::numeric:
      break;
  }
  // numeric inverse transform, integrated per disjoint support component so
  // the panels never straddle an indicator cut
  std::vector<BoxD> pieces;
  std::function<void(const Region&)> collect = [&](const Region& r) {
    if (r.kind() == Region::Kind::set_union) {
      for (const auto& p : r.parts()) collect(p);
    } else {
      pieces.push_back(r.bounding_box());
    }
  };
  collect(lv.h.support());
  if (sys.dim == 1) {
    cplx acc(0.0, 0.0);
    for (const auto& bb : pieces) {
      double cyc = (std::abs(y[0]) + 1.0) * bb.width(0);
      auto f = [&](double u) {
        return lv.h.value({u}) * cplx(std::cos(TWO_PI * y[0] * u), std::sin(TWO_PI * y[0] * u));
      };
      acc += integrate_1d(f, bb.lo[0], bb.hi[0], cyc, 4);
    }
    return scale * acc;
  }
  if (sys.dim == 2) {
    cplx acc(0.0, 0.0);
    for (const auto& bb : pieces) {
      auto f = [&](double u0, double u1) {
        double ph = TWO_PI * (y[0] * u0 + y[1] * u1);
        return lv.h.value({u0, u1}) * cplx(std::cos(ph), std::sin(ph));
      };
      acc += integrate_2d(f, bb.lo[0], bb.hi[0], bb.lo[1], bb.hi[1],
                          (std::abs(y[0]) + 1.0) * bb.width(0),
                          (std::abs(y[1]) + 1.0) * bb.width(1), 4);
    }
    return scale * acc;
  }
  fail(ErrorCode::config, "atom_eval_time: unsupported dimension");
}

}  // namespace wf
