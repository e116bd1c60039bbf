#include "wf/gallery.hpp"

#include <algorithm>
#include <cmath>

#include "wf/covering.hpp"
#include "wf/point_set.hpp"

namespace wf {

namespace {

Region mirror_interval(double lo, double hi) {
  return Region::with_negation(Region::interval(lo, hi));
}

std::vector<BoxD> mirror_boxes(double lo, double hi) {
  return {BoxD{{lo}, {hi}}, BoxD{{-hi}, {-lo}}};
}

std::vector<BoxD> quadrant_boxes(double lo, double hi) {
  std::vector<BoxD> out;
  for (double sx : {1.0, -1.0})
    for (double sy : {1.0, -1.0}) {
      BoxD b{{std::min(sx * lo, sx * hi), std::min(sy * lo, sy * hi)},
             {std::max(sx * lo, sx * hi), std::max(sy * lo, sy * hi)}};
      out.push_back(b);
    }
  return out;
}

PointSet jittered_lattice_1d(double spacing, double R, double jitter, Rng rng) {
  long kmax = long(std::floor(R / spacing));
  std::vector<std::vector<double>> pts;
  for (long k = -kmax; k <= kmax; ++k)
    pts.push_back({spacing * (double(k) + jitter * rng.uniform(-1.0, 1.0))});
  return PointSet(1, std::move(pts));
}

GridSpec dyadic_1d_grid(double spacing, double R, double jitter, Rng rng) {
  if (jitter == 0.0) return GridSpec::regular({spacing});
  return GridSpec::explicit_list(jittered_lattice_1d(spacing, R, jitter, rng));
}

double diameter_from_samples(const std::vector<std::vector<double>>& pts) {
  double best = 0.0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) {
      double d2 = 0.0;
      for (size_t c = 0; c < pts[i].size(); ++c) {
        double t = pts[i][c] - pts[j][c];
        d2 += t * t;
      }
      best = std::max(best, d2);
    }
  return std::sqrt(best);
}

}  // namespace

GalleryEntry shannon_1d(int j_min, int j_max, double density_factor, double jitter,
                        uint64_t seed) {
  if (!(density_factor > 1.0))
    fail(ErrorCode::precondition, "shannon_1d: density_factor must exceed 1");
  if (jitter < 0.0 || jitter >= 0.5) fail(ErrorCode::domain, "shannon_1d: bad jitter");
  double spacing = 1.0 / (2.0 * density_factor);
  Window h = Window::mirror(Window::indicator(Region::interval(0.5, 1.0)));

  WaveletFrameSpec spec;
  spec.h = h;
  spec.provenance = "shannon_1d (dyadic mirror indicator)";
  spec.working_region = mirror_interval(std::ldexp(1.0, j_min - 1), std::ldexp(1.0, j_max));
  spec.safe_boxes =
      mirror_boxes(std::ldexp(1.0, j_min) * 1.05, std::ldexp(0.95, j_max - 1));
  spec.safe_spec = SafeSpec{SafeSpec::Kind::mirror_band, std::ldexp(1.0, j_min) * 1.05,
                            std::ldexp(0.95, j_max - 1)};
  spec.grid_box = BoxD{{-std::ldexp(1.0, j_max)}, {std::ldexp(1.0, j_max)}};
  spec.grid_dims = {16384};
  spec.canonical_log2 = 12;
  Rng rng(seed);
  for (int j = j_min; j <= j_max; ++j) {
    WaveletLevelSpec lv;
    lv.label = {j};
    lv.A = Mat::scalar(1, std::ldexp(1.0, j));
    lv.grid = dyadic_1d_grid(spacing, 16.0, jitter, rng.stream(uint64_t(j - j_min)));
    spec.levels.push_back(std::move(lv));
  }
  GalleryEntry e;
  e.name = "shannon_1d";
  e.system = build_wavelet_frame(spec);
  e.system.time_profile = TimeProfile{TimeProfile::Kind::shannon_mirror, 0};
  e.grid_ensembles = jitter == 0.0;
  e.expect_tight = jitter == 0.0;
  e.recon_tolerance = jitter == 0.0 ? 1e-6 : 5e-2;
  e.recon_box = e.system.grid_box;
  e.recon_dims = e.system.grid_dims;
  e.notes = "dyadic tiling; regular grids give a tight frame of bound 2*density_factor";
  return e;
}

GalleryEntry kadec_riesz_1d(int j_min, int j_max, double L_fraction, uint64_t seed) {
  if (!(L_fraction >= 0.0 && L_fraction < 0.25))
    fail(ErrorCode::precondition, "kadec_riesz_1d: need L < spacing/4");
  Window h = Window::mirror(Window::indicator(Region::interval(0.5, 1.0)));
  WaveletFrameSpec spec;
  spec.h = h;
  spec.provenance = "kadec_riesz_1d (integer grid perturbation)";
  spec.working_region = mirror_interval(std::ldexp(1.0, j_min - 1), std::ldexp(1.0, j_max));
  spec.safe_boxes =
      mirror_boxes(std::ldexp(1.0, j_min) * 1.05, std::ldexp(0.95, j_max - 1));
  spec.safe_spec = SafeSpec{SafeSpec::Kind::mirror_band, std::ldexp(1.0, j_min) * 1.05,
                            std::ldexp(0.95, j_max - 1)};
  spec.grid_box = BoxD{{-std::ldexp(1.0, j_max)}, {std::ldexp(1.0, j_max)}};
  spec.grid_dims = {16384};
  spec.canonical_log2 = 12;
  Rng rng(seed);
  const double R = 256.0;
  for (int j = j_min; j <= j_max; ++j) {
    WaveletLevelSpec lv;
    lv.label = {j};
    lv.A = Mat::scalar(1, std::ldexp(1.0, j));
    PointSet pts = jittered_lattice_1d(1.0, R, L_fraction, rng.stream(uint64_t(j - j_min)));
    if (!check_kadec(pts, 1.0, L_fraction))
      fail(ErrorCode::precondition, "kadec_riesz_1d: perturbation violates the 1/4 criterion");
    lv.grid = GridSpec::explicit_list(std::move(pts));
    spec.levels.push_back(std::move(lv));
  }
  GalleryEntry e;
  e.name = "kadec_riesz_1d";
  e.system = build_wavelet_frame(spec);
  e.system.time_profile = TimeProfile{TimeProfile::Kind::shannon_mirror, 0};
  for (auto& lv : e.system.levels) lv.bounds.note += "; kadec-certified riesz basis";
  e.grid_ensembles = false;
  e.recon_tolerance = 5e-2;  // Shannon-type atoms carry O(1/R) coefficient tails
  e.recon_box = e.system.grid_box;
  e.recon_dims = {8192};
  e.notes = "riesz-basis flag from the quarter-spacing perturbation certificate";
  return e;
}

GalleryEntry bspline_1d(int n, int j_min, int j_max, double density_factor, double jitter,
                        uint64_t seed) {
  if (n < 2) fail(ErrorCode::precondition, "bspline_1d: n >= 2 required");
  if (!(density_factor > 1.0))
    fail(ErrorCode::precondition, "bspline_1d: density too low for the fattened band");
  if (jitter < 0.0 || jitter >= 0.25) fail(ErrorCode::domain, "bspline_1d: bad jitter");
  // positive-side profile n * beta_{n-1}(n (xi - 1/4)), support [1/4, 5/4]
  Window h = Window::mirror(Window::bspline_1d(n - 1, double(n), 0.25, cplx(double(n), 0.0)));
  double spacing = 1.0 / (2.5 * density_factor);
  const double R = 48.0;

  WaveletFrameSpec spec;
  spec.h = h;
  spec.provenance = "bspline_1d (smooth mirror profile, n=" + std::to_string(n) + ")";
  spec.working_region = mirror_interval(std::ldexp(1.0, j_min - 1), std::ldexp(1.0, j_max));
  spec.safe_boxes =
      mirror_boxes(std::ldexp(0.7, j_min), std::ldexp(0.95, j_max - 1));
  spec.safe_spec = SafeSpec{SafeSpec::Kind::mirror_band, std::ldexp(0.7, j_min),
                            std::ldexp(0.95, j_max - 1)};
  spec.grid_box = BoxD{{-std::ldexp(1.0, j_max + 1)}, {std::ldexp(1.0, j_max + 1)}};
  spec.grid_dims = {long(1) << 14};
  spec.canonical_log2 = 10;
  Rng rng(seed);
  FrameBounds tight;
  if (auto t = tight_bound_box_fit({spacing}, h.support())) {
    tight.m = tight.M = *t;
    tight.kind = FrameBounds::Kind::certified_sufficient;
    tight.truncation_R = R;
    tight.note = "regular lattice box-fit (tight)";
  } else {
    fail(ErrorCode::precondition, "bspline_1d: spacing does not box-fit the window support");
  }
  for (int j = j_min; j <= j_max; ++j) {
    WaveletLevelSpec lv;
    lv.label = {j};
    lv.A = Mat::scalar(1, std::ldexp(1.0, j));
    lv.grid = GridSpec::explicit_list(
        jittered_lattice_1d(spacing, R, jitter, rng.stream(uint64_t(j - j_min))));
    if (jitter == 0.0) lv.bounds = tight;
    spec.levels.push_back(std::move(lv));
  }
  GalleryEntry e;
  e.name = "bspline_1d";
  e.system = build_wavelet_frame(spec);
  e.system.time_profile = TimeProfile{TimeProfile::Kind::bspline_mirror, n};
  e.grid_ensembles = false;
  e.recon_tolerance = 1e-4;
  e.recon_box = e.system.grid_box;
  e.recon_dims = {8192};
  e.notes = "atoms decay like |x|^-n";
  return e;
}

GalleryEntry radial_2d(const std::string& kind, int n, int j_min, int j_max) {
  // indicator kind: radius in [1/2, 1] (the dyadic dilates then tile the
  // plane); spline kind: squared-radius profile, whose scale overlap is
  // shallow near the junction radii
  Window h = Window::indicator(Region::annulus(0.5, 1.0));
  bool smooth = kind != "shannon";
  if (smooth) h = Window::radial_bspline(n, 2);
  // product grid spacing 1/4 per axis: lower density 4 > 2 on each axis
  WaveletFrameSpec spec;
  spec.h = h;
  spec.provenance = smooth ? "radial_2d (radial spline profile)" : "radial_2d (shannon shell)";
  spec.working_region =
      Region::annulus(std::ldexp(smooth ? std::sqrt(0.5) : 0.5, j_min), std::ldexp(1.0, j_max));
  double rin = std::ldexp(0.75, j_min);
  double rout = std::ldexp(1.0, j_max - 1) * 0.95;
  spec.safe_boxes = quadrant_boxes(rin, rout / std::sqrt(2.0));
  spec.safe_spec = SafeSpec{SafeSpec::Kind::annulus, rin, rout};
  spec.grid_box = BoxD{{-std::ldexp(1.0, j_max + 1), -std::ldexp(1.0, j_max + 1)},
                       {std::ldexp(1.0, j_max + 1), std::ldexp(1.0, j_max + 1)}};
  spec.grid_dims = {1024, 1024};
  spec.canonical_log2 = 9;
  spec.rpu_probe_step = 1.0 / 128.0;
  for (int j = j_min; j <= j_max; ++j) {
    WaveletLevelSpec lv;
    lv.label = {j};
    lv.A = Mat::scalar(2, std::ldexp(1.0, j));
    lv.grid = GridSpec::regular({0.25, 0.25});
    spec.levels.push_back(std::move(lv));
  }
  GalleryEntry e;
  e.name = smooth ? "radial_2d" : "radial_2d_shannon";
  e.system = build_wavelet_frame(spec);
  e.grid_ensembles = true;
  e.expect_tight = !smooth;
  e.recon_tolerance = 1e-3;
  e.recon_box = e.system.grid_box;
  e.recon_dims = e.system.grid_dims;
  e.notes = "isotropic profile; shared product grid across scales";
  return e;
}

GalleryEntry directional_2d(int n_dirs, int j_min, int j_max, bool smooth) {
  if (n_dirs < 2) fail(ErrorCode::precondition, "directional_2d: n_dirs >= 2");
  double half = PI / (2.0 * n_dirs);
  Window sector =
      smooth ? Window::bump_sector(0.5, 1.0, -half, half, 0.15, half * 0.5, 3)
             : Window::indicator(Region::annulus_sector(0.5, 1.0, -half, half));
  Window h = Window::mirror(sector);

  WaveletFrameSpec spec;
  spec.h = h;
  spec.provenance = smooth ? "directional_2d (fattened sectors)" : "directional_2d (sharp sectors)";
  spec.working_region = Region::annulus(std::ldexp(0.5, j_min), std::ldexp(1.0, j_max));
  double rin = std::ldexp(0.5, j_min) * 2.0;
  double rout = std::ldexp(1.0, j_max - 1) * 0.95;
  spec.safe_boxes = quadrant_boxes(rin, rout / std::sqrt(2.0));
  spec.safe_spec = SafeSpec{SafeSpec::Kind::annulus, rin, rout};
  spec.grid_box = BoxD{{-std::ldexp(1.0, j_max + 1), -std::ldexp(1.0, j_max + 1)},
                       {std::ldexp(1.0, j_max + 1), std::ldexp(1.0, j_max + 1)}};
  spec.grid_dims = {1024, 1024};
  spec.canonical_log2 = 9;
  spec.rpu_probe_step = 1.0 / 128.0;
  Mat Rstep = Mat::rotation2d(PI / n_dirs);
  for (int j1 = j_min; j1 <= j_max; ++j1) {
    for (int j2 = 0; j2 < n_dirs; ++j2) {
      WaveletLevelSpec lv;
      lv.label = {j1, j2};
      lv.A = mat_mul(Mat::scalar(2, std::ldexp(1.0, j1)), mat_pow(Rstep, j2));
      lv.grid = GridSpec::regular({0.25, 0.25});
      spec.levels.push_back(std::move(lv));
    }
  }
  GalleryEntry e;
  e.name = "directional_2d";
  e.system = build_wavelet_frame(spec);
  e.system.grid_dims = spec.grid_dims;
  e.grid_ensembles = false;
  e.recon_tolerance = smooth ? 1e-3 : 5e-2;
  e.recon_box = spec.grid_box;
  e.recon_dims = {512, 512};
  e.notes = "scale index j1, direction index j2";
  return e;
}

GalleryEntry spiral_2d(double a, int m, int j_min, int j_max) {
  if (!(a > 1.0) || m < 2) fail(ErrorCode::precondition, "spiral_2d: need a > 1, m >= 2");
  double alpha = 1.0 / double(m);
  // a radius is covered at every angle only when roughly 2m consecutive
  // dilates are present on each side
  if (j_max - j_min < 2 * m + 1)
    fail(ErrorCode::precondition, "spiral_2d: index range must span at least 2m+1 steps");
  Window h = Window::bump_spiral(a, TWO_PI, 1.0, a, 0.0, alpha, 0.10, 0.12 * alpha, 3);
  Mat A = mat_mul(Mat::scalar(2, std::pow(a, alpha)), Mat::rotation2d(TWO_PI * alpha));

  double spacing = 0.125;
  // grid requirement: gap below 1/(2 diam(Q_eps))
  double diam = diameter_from_samples(h.support().boundary_samples(96));
  double rho = spacing * std::sqrt(2.0) / 2.0;
  if (!(rho < 1.0 / (2.0 * diam)))
    fail(ErrorCode::precondition, "spiral_2d: grid gap too large for the fattened sector");

  WaveletFrameSpec spec;
  spec.h = h;
  spec.provenance = "spiral_2d (a=" + std::to_string(a) + ", m=" + std::to_string(m) + ")";
  double r_lo = std::pow(a, double(j_min) * alpha + 2.0);  // fully wrapped from below
  double r_hi = std::pow(a, double(j_max) * alpha);
  if (!(r_hi > r_lo * 1.8))
    fail(ErrorCode::precondition, "spiral_2d: index range leaves no fully covered annulus");
  spec.working_region = Region::annulus(r_lo * 1.05, r_hi * 0.95);
  spec.safe_boxes = quadrant_boxes(r_lo * 1.25, r_hi * 0.8 / std::sqrt(2.0));
  spec.safe_spec = SafeSpec{SafeSpec::Kind::annulus, r_lo * 1.25, r_hi * 0.8};
  double half_box = std::ldexp(1.0, int(std::ceil(std::log2(r_hi * 1.3))));
  spec.grid_box = BoxD{{-half_box, -half_box}, {half_box, half_box}};
  spec.grid_dims = {512, 512};
  spec.canonical_log2 = 10;
  spec.rpu_probe_step = 1.0 / 96.0;
  for (int j = j_min; j <= j_max; ++j) {
    WaveletLevelSpec lv;
    lv.label = {j};
    lv.A = mat_pow(A, j);
    lv.grid = GridSpec::regular({spacing, spacing});
    spec.levels.push_back(std::move(lv));
  }
  GalleryEntry e;
  e.name = "spiral_2d";
  e.system = build_wavelet_frame(spec);
  e.grid_ensembles = false;
  e.recon_tolerance = 1e-3;
  e.recon_box = spec.grid_box;
  e.recon_dims = {512, 512};
  e.notes = "dilation A = a^{1/m} R(2 pi/m); A^m = a I";
  return e;
}

GalleryEntry gabor_nonharmonic(int j_min, int j_max, double jitter, uint64_t seed) {
  TfFrameSpec spec;
  spec.measure_normalize = true;
  spec.provenance = "gabor_nonharmonic (cubic spline translates)";
  spec.working_region = Region::interval(double(j_min) + 4.0, double(j_max));
  if (!(j_max - j_min >= 5)) fail(ErrorCode::precondition, "gabor_nonharmonic: range too short");
  spec.safe_boxes = {BoxD{{double(j_min) + 4.2}, {double(j_max) - 0.2}}};
  spec.grid_box = BoxD{{double(j_min)}, {double(j_max) + 4.0}};
  long width = long(std::ceil(double(j_max - j_min) + 4.0));
  spec.grid_dims = {256 * width};
  spec.canonical_log2 = 11;
  Rng rng(seed);
  for (int j = j_min; j <= j_max; ++j) {
    TfLevelSpec lv;
    lv.label = {j};
    lv.h = Window::bspline_1d(3, 1.0, double(j));
    lv.S = Region::interval(double(j), double(j) + 4.0);
    lv.grid = jitter == 0.0
                  ? GridSpec::regular({0.25})
                  : GridSpec::explicit_list(
                        jittered_lattice_1d(0.25, 24.0, jitter, rng.stream(uint64_t(j - j_min))));
    spec.levels.push_back(std::move(lv));
  }
  // density certificate on a representative grid (the covering example needs
  // lower density above 2)
  PointSet probe_pts = spec.levels.front().grid.materialize(1, 40.0);
  DensityEstimate de = density_estimate(probe_pts, 16.0);
  if (!(de.lower > 2.0))
    fail(ErrorCode::precondition, "gabor_nonharmonic: grid density must exceed 2");

  GalleryEntry e;
  e.name = "gabor_nonharmonic";
  e.system = build_tf_atoms(spec);
  e.grid_ensembles = jitter == 0.0;
  e.recon_tolerance = jitter == 0.0 ? 1e-6 : 1e-3;
  e.recon_box = e.system.grid_box;
  e.recon_dims = e.system.grid_dims;
  e.notes = "windows beta_3(t - j); quarter-integer modulation nodes";
  return e;
}

GalleryEntry recipe(const Region& V, const Mat& A, const Window& h, double eps,
                    const GridSpec& grid, int j_min, int j_max) {
  // recipe hypotheses, each rejected by name
  std::vector<double> zero(V.dim(), 0.0);
  if (!V.contains(zero))
    fail(ErrorCode::precondition, "recipe: 0 must lie in the interior of V");
  if (!is_expansive(A)) fail(ErrorCode::precondition, "recipe: A must be expansive");
  Region Q = dilation_ring(mat_transpose(A), V);

  // |h| must not vanish on Q
  {
    BoxD bb = Q.bounding_box();
    const int S = 96;
    std::vector<double> x(V.dim());
    for (int i0 = 0; i0 < S; ++i0)
      for (int i1 = 0; i1 < (V.dim() == 2 ? S : 1); ++i1) {
        x[0] = bb.lo[0] + (i0 + 0.5) * bb.width(0) / S;
        if (V.dim() == 2) x[1] = bb.lo[1] + (i1 + 0.5) * bb.width(1) / S;
        if (!Q.contains(x)) continue;
        if (h.abs2(x) < 1e-12)
          fail(ErrorCode::precondition, "recipe: h vanishes on Q at " + format_point(x));
      }
  }
  // supp h inside the eps-fattening of Q
  {
    BoxD bb = h.support().bounding_box();
    const int S = 96;
    std::vector<double> x(V.dim());
    for (int i0 = 0; i0 < S; ++i0)
      for (int i1 = 0; i1 < (V.dim() == 2 ? S : 1); ++i1) {
        x[0] = bb.lo[0] + (i0 + 0.5) * bb.width(0) / S;
        if (V.dim() == 2) x[1] = bb.lo[1] + (i1 + 0.5) * bb.width(1) / S;
        if (h.abs2(x) > 1e-20 && !Q.contains_dilated(x, eps * (1.0 + 1e-9)))
          fail(ErrorCode::precondition,
               "recipe: supp h escapes the eps-fattening of Q at " + format_point(x));
      }
  }
  // grid gap below 1/(2 diam(Q_eps)), strict
  double diam = diameter_from_samples(h.support().boundary_samples(96)) ;
  diam = std::max(diam, diameter_from_samples(Q.boundary_samples(96)) + 2.0 * eps);
  double rho;
  if (grid.kind == GridSpec::Kind::regular_full) {
    rho = 0.5 * std::sqrt(double(V.dim())) *
          *std::max_element(grid.spacing.begin(), grid.spacing.end());
  } else {
    PointSet pts = *grid.points;
    if (separation(pts) <= 0.0) fail(ErrorCode::precondition, "recipe: X must be separated");
    BoxD bb = pts.bounding_box();
    std::vector<double> lo = bb.lo, hi = bb.hi;
    for (int i = 0; i < V.dim(); ++i) {
      lo[i] *= 0.6;
      hi[i] *= 0.6;
    }
    rho = gap(pts, Region::box(lo, hi), separation(pts) / 4.0);
  }
  if (!(rho < 1.0 / (2.0 * diam)))
    fail(ErrorCode::precondition,
         "recipe: grid gap " + std::to_string(rho) + " not below 1/(2 diam(Q_eps)) = " +
             std::to_string(1.0 / (2.0 * diam)));

  WaveletFrameSpec spec;
  spec.h = h;
  spec.provenance = "recipe (single dilation, shared grid)";
  double s_expand = std::pow(std::abs(mat_det(A)), 1.0 / V.dim());
  BoxD ring_bb = Q.bounding_box();
  BoxD v_bb = V.bounding_box();
  // covered band: 2^{j_min} * (inner edge of Q) out to 2^{j_max} * (outer edge)
  double outer = std::pow(s_expand, double(j_max)) *
                 *std::min_element(ring_bb.hi.begin(), ring_bb.hi.end()) * 0.98;
  double inner = std::pow(s_expand, double(j_min)) *
                 *std::min_element(v_bb.hi.begin(), v_bb.hi.end()) * 1.05;
  spec.working_region = Region::difference(
      Region::box(std::vector<double>(V.dim(), -outer), std::vector<double>(V.dim(), outer)),
      Region::box(std::vector<double>(V.dim(), -inner), std::vector<double>(V.dim(), inner)),
      true);
  spec.safe_boxes = quadrant_boxes(inner * 1.6, outer * 0.55);
  spec.safe_spec = SafeSpec{SafeSpec::Kind::annulus, inner * 1.5, outer * 0.8};
  double half_box = std::ldexp(1.0, int(std::ceil(std::log2(outer * 1.2))));
  spec.grid_box = BoxD{std::vector<double>(V.dim(), -half_box),
                       std::vector<double>(V.dim(), half_box)};
  spec.grid_dims = std::vector<long>(V.dim(), 512);
  spec.canonical_log2 = 10;
  spec.rpu_probe_step = outer / 512.0;
  for (int j = j_min; j <= j_max; ++j) {
    WaveletLevelSpec lv;
    lv.label = {j};
    lv.A = mat_pow(A, j);
    lv.grid = grid;
    spec.levels.push_back(std::move(lv));
  }
  GalleryEntry e;
  e.name = "recipe";
  e.system = build_wavelet_frame(spec);
  e.grid_ensembles = grid.kind == GridSpec::Kind::regular_full;
  e.recon_tolerance = 1e-3;
  e.recon_box = spec.grid_box;
  e.recon_dims = spec.grid_dims;
  e.notes = "Q = closure(A^T V \\ V); single expansive dilation";
  return e;
}

GalleryEntry recipe_default() {
  Region V = Region::box({-1.0, -1.0}, {1.0, 1.0});
  Mat A = Mat::scalar(2, 2.0);
  Window h = Window::bump_box_ring(BoxD{{-2.0, -2.0}, {2.0, 2.0}}, 0.25,
                                   BoxD{{-1.0, -1.0}, {1.0, 1.0}}, 0.25, 3);
  return recipe(V, A, h, 0.4, GridSpec::regular({0.0625, 0.0625}), -1, 1);
}

std::vector<std::string> gallery_names() {
  return {"shannon_1d", "kadec_riesz_1d", "bspline_1d",       "radial_2d", "radial_2d_shannon",
          "directional_2d", "spiral_2d",   "gabor_nonharmonic", "recipe"};
}

GalleryEntry build_gallery_entry(const std::string& name,
                                 const std::map<std::string, double>& ov) {
  auto get = [&](const std::string& k, double dflt) {
    auto it = ov.find(k);
    return it == ov.end() ? dflt : it->second;
  };
  int jmin = int(get("j_min", -1000)), jmax = int(get("j_max", 1000));
  auto jr = [&](int dmin, int dmax) {
    if (jmin == -1000) jmin = dmin;
    if (jmax == 1000) jmax = dmax;
    if (jmin > jmax) fail(ErrorCode::config, "bad j range");
  };
  uint64_t seed = uint64_t(get("seed", 7));
  if (name == "shannon_1d") {
    jr(-4, 4);
    return shannon_1d(jmin, jmax, get("density_factor", 2.0), get("jitter", 0.0), seed);
  }
  if (name == "kadec_riesz_1d") {
    jr(-3, 3);
    return kadec_riesz_1d(jmin, jmax, get("L_fraction", 0.2), seed);
  }
  if (name == "bspline_1d") {
    jr(-4, 4);
    return bspline_1d(int(get("n", 4)), jmin, jmax, get("density_factor", 16.0 / 15.0),
                      get("jitter", 0.0), uint64_t(get("seed", 42)));
  }
  if (name == "radial_2d") {
    jr(-3, 3);
    return radial_2d("bspline", int(get("n", 4)), jmin, jmax);
  }
  if (name == "radial_2d_shannon") {
    jr(-3, 3);
    return radial_2d("shannon", 0, jmin, jmax);
  }
  if (name == "directional_2d") {
    jr(-3, 3);
    return directional_2d(int(get("n_dirs", 4)), jmin, jmax, get("smooth", 1.0) != 0.0);
  }
  if (name == "spiral_2d") {
    jr(-8, 8);
    return spiral_2d(get("a", 2.0), int(get("m", 4)), jmin, jmax);
  }
  if (name == "gabor_nonharmonic") {
    jr(-6, 6);
    return gabor_nonharmonic(jmin, jmax, get("jitter", 0.0), seed);
  }
  if (name == "recipe") {
    jr(-1, 1);
    Region V = Region::box({-1.0, -1.0}, {1.0, 1.0});
    Mat A = Mat::scalar(2, 2.0);
    Window h = Window::bump_box_ring(BoxD{{-2.0, -2.0}, {2.0, 2.0}}, 0.25,
                                     BoxD{{-1.0, -1.0}, {1.0, 1.0}}, 0.25, 3);
    return recipe(V, A, h, 0.4, GridSpec::regular({0.0625, 0.0625}), jmin, jmax);
  }
  fail(ErrorCode::config, "unknown gallery entry: " + name);
}

ValidationReport validate_entry(const GalleryEntry& entry, const ValidationOptions& opt) {
  const AtomSystem& sys = entry.system;
  ValidationReport rep;
  rep.entry = entry.name;
  rep.p_hat = sys.p_hat;
  rep.P_hat = sys.P_hat;
  rep.predicted = sys.predicted;
  for (const auto& lv : sys.levels) rep.per_level.push_back(lv.bounds);

  auto add = [&](const std::string& name, bool ok, const std::string& details) {
    rep.checks.push_back(CheckResult{name, ok, details});
  };

  // (a) covering of the working region
  {
    std::vector<Region> regions;
    for (const auto& lv : sys.levels) regions.push_back(lv.support_omega);
    Covering cov = Covering::explicit_list(regions);
    BoxD bb = sys.working_region.bounding_box();
    Rng rng(4242);
    std::vector<std::vector<double>> probes;
    while (probes.size() < 4096) {
      std::vector<double> x(sys.dim);
      for (int i = 0; i < sys.dim; ++i) x[i] = rng.uniform(bb.lo[i], bb.hi[i]);
      if (sys.working_region.contains(x)) probes.push_back(std::move(x));
    }
    CoverStats st = covering_stats(cov, probes);
    add("covering-index", st.min_multiplicity >= 1,
        "min multiplicity " + std::to_string(st.min_multiplicity) + ", max " +
            std::to_string(st.max_multiplicity));
  }
  // (b) RPU bounds
  add("rpu-bounds", sys.p_hat > 0.0 && sys.P_hat >= sys.p_hat && std::isfinite(sys.P_hat),
      "p_hat " + std::to_string(sys.p_hat) + ", P_hat " + std::to_string(sys.P_hat));
  // per-level uniformity
  add("per-level-bounds", sys.m_inf > 0.0 && std::isfinite(sys.M_sup),
      "inf m " + std::to_string(sys.m_inf) + ", sup M " + std::to_string(sys.M_sup));

  // (c) frame-ratio sandwich
  {
    EmpiricalReport er = empirical_frame_bounds(sys, opt.ensemble, opt.seed, entry.grid_ensembles);
    rep.ratio_min = er.bounds.m;
    rep.ratio_max = er.bounds.M;
    double lo = sys.predicted.m * (1.0 - entry.ratio_inflation);
    double hi = sys.predicted.M * (1.0 + entry.ratio_inflation);
    bool ok = er.bounds.m >= lo && er.bounds.M <= hi;
    add("frame-ratio", ok,
        "ratios in [" + std::to_string(er.bounds.m) + ", " + std::to_string(er.bounds.M) +
            "], predicted [" + std::to_string(sys.predicted.m) + ", " +
            std::to_string(sys.predicted.M) + "]");
    if (entry.expect_tight) {
      bool tight_ok = (er.bounds.M - er.bounds.m) <= 1e-3 * sys.predicted.M;
      add("tightness", tight_ok,
          "ratio spread " + std::to_string(er.bounds.M - er.bounds.m));
    }
  }

  // (d) reconstruction
  {
    std::vector<TestFunction> fns = make_system_ensemble(sys, opt.recon_signals,
                                                          opt.seed ^ 0xABCDEF);
    double worst = 0.0;
    Reconstructor recon(sys);
    for (const auto& fn : fns) {
      SampledField truth = SampledField::sample(fn, entry.recon_box, entry.recon_dims);
      AnalysisResult ar = entry.grid_ensembles ? analyze_field(sys, truth)
                                               : analyze_function(sys, fn);
      ReconstructionReport rrep;
      SampledField rec = recon.full(ar, entry.recon_box, entry.recon_dims, &truth, &rrep);
      worst = std::max(worst, rrep.final_rel_error);
    }
    rep.recon_error = worst;
    add("reconstruction", worst <= entry.recon_tolerance,
        "relative L2 error " + std::to_string(worst) + " (tolerance " +
            std::to_string(entry.recon_tolerance) + ")");
  }

  rep.passed = std::all_of(rep.checks.begin(), rep.checks.end(),
                           [](const CheckResult& c) { return c.passed; });
  return rep;
}

}  // namespace wf
