#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "wf/gallery.hpp"
#include "wf/reconstruct.hpp"

using namespace wf;
using namespace wf::testing;

TEST_CASE("canonical duals of lattice systems") {
  // integer lattice on the unit interval: orthonormal, self-dual
  {
    ExponentialSystem sys(PointSet::lattice_1d(1.0, -6.0, 6.0), Region::interval(0.0, 1.0));
    DualSystem d = DualSystem::build(sys, DualSystem::Method::canonical);
    std::vector<cplx> c(sys.points().size(), cplx(0.0, 0.0));
    c[3] = cplx(1.0, -2.0);
    auto dual = d.apply(c);
    for (size_t k = 0; k < dual.size(); ++k)
      CHECK(std::abs(dual[k] - c[k]) < 1e-10);
  }
  // half-integer lattice: tight with bound 2, duals scale by 1/2 on span
  {
    ExponentialSystem sys(PointSet::lattice_1d(0.5, -12.0, 12.0), Region::interval(0.0, 1.0));
    DualSystem d = DualSystem::build(sys, DualSystem::Method::canonical);
    CHECK(d.residual(20, 5) < 1e-8);
    CHECK(d.eig_max() == doctest::Approx(2.0).epsilon(1e-6));
  }
  // irregular 8-point system: duality residual against 50 random span functions
  {
    Rng rng(7);
    std::vector<std::vector<double>> pts;
    for (int k = 0; k < 8; ++k) pts.push_back({rng.uniform(-6.0, 6.0)});
    ExponentialSystem sys(PointSet(1, pts), Region::interval(0.0, 1.0));
    DualSystem can = DualSystem::build(sys, DualSystem::Method::canonical);
    CHECK(can.residual(50, 99) < 1e-8);
    DualSystem cg = DualSystem::build(sys, DualSystem::Method::cg);
    CHECK(cg.residual(50, 99) < 1e-8);
  }
}

TEST_CASE("level reconstruction recovers the windowed slice") {
  GalleryEntry e = shannon_1d();
  const AtomSystem& sys = e.system;
  auto fns = make_system_ensemble(sys, 2, 404);
  for (const auto& fn : fns) {
    SampledField f = SampledField::sample(fn, sys.grid_box, sys.grid_dims);
    AnalysisResult ar = analyze_field(sys, f);
    Reconstructor recon(sys);
    for (size_t li : {size_t(3), size_t(5)}) {
      SampledField lvl = recon.level(li, ar.levels[li], sys.grid_box, sys.grid_dims);
      double num = 0.0, den = 0.0;
      for (size_t i = 0; i < lvl.size(); ++i) {
        auto u = mat_apply(sys.levels[li].B, lvl.coord(i));
        cplx want = sys.levels[li].h.abs2(u) * f.data()[i];
        num += std::norm(lvl.data()[i] - want);
        den += std::norm(want);
      }
      if (den > 0.0) CHECK(std::sqrt(num / den) < 1e-6);
    }
  }
}

TEST_CASE("spline level output matches the pointwise product") {
  GalleryEntry e = bspline_1d();
  const AtomSystem& sys = e.system;
  auto fns = make_system_ensemble(sys, 1, 2024);
  AnalysisResult ar = analyze_function(sys, fns[0]);
  Reconstructor recon(sys);
  // probe the most energetic level at 1000 grid points
  size_t best = 0;
  for (size_t li = 1; li < sys.levels.size(); ++li)
    if (ar.levels[li].energy() > ar.levels[best].energy()) best = li;
  BoxD box{{-20.0}, {20.0}};
  std::vector<long> dims{1000};
  SampledField lvl = recon.level(best, ar.levels[best], box, dims);
  SampledField truth = SampledField::sample(fns[0], box, dims);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < lvl.size(); ++i) {
    auto u = mat_apply(sys.levels[best].B, lvl.coord(i));
    cplx want = sys.levels[best].h.abs2(u) * truth.data()[i];
    num += std::norm(lvl.data()[i] - want);
    den += std::norm(want);
  }
  CHECK(std::sqrt(num / den) < 1e-5);
}

TEST_CASE("full reconstruction: linearity, zero input, tight shortcut") {
  GalleryEntry e = shannon_1d();
  const AtomSystem& sys = e.system;
  auto fns = make_system_ensemble(sys, 2, 11);
  SampledField f1 = SampledField::sample(fns[0], sys.grid_box, sys.grid_dims);
  SampledField f2 = SampledField::sample(fns[1], sys.grid_box, sys.grid_dims);

  Reconstructor recon(sys);
  AnalysisResult a1 = analyze_field(sys, f1);
  AnalysisResult a2 = analyze_field(sys, f2);
  SampledField r1 = recon.full(a1, sys.grid_box, sys.grid_dims);
  SampledField r2 = recon.full(a2, sys.grid_box, sys.grid_dims);

  // alpha f1 + beta f2
  cplx alpha(0.3, -1.1), beta(2.0, 0.7);
  SampledField mix(sys.grid_box, sys.grid_dims);
  mix.axpy(alpha, f1);
  mix.axpy(beta, f2);
  AnalysisResult am = analyze_field(sys, mix);
  SampledField rm = recon.full(am, sys.grid_box, sys.grid_dims);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < rm.size(); ++i) {
    cplx want = alpha * r1.data()[i] + beta * r2.data()[i];
    num += std::norm(rm.data()[i] - want);
    den += std::norm(want);
  }
  CHECK(std::sqrt(num / den) < 1e-10);

  // zero input reconstructs exactly to zero
  SampledField zero(sys.grid_box, sys.grid_dims);
  AnalysisResult az = analyze_field(sys, zero);
  SampledField rz = recon.full(az, sys.grid_box, sys.grid_dims);
  for (size_t i = 0; i < rz.size(); i += 997) CHECK(rz.data()[i] == cplx(0.0, 0.0));

  // tight shortcut agrees with the dual pipeline
  SampledField tight = reconstruct_tight(sys, a1, sys.grid_box, sys.grid_dims);
  num = den = 0.0;
  for (size_t i = 0; i < tight.size(); ++i) {
    if (!sys.working_region.contains(tight.coord(i))) continue;
    num += std::norm(tight.data()[i] - r1.data()[i]);
    den += std::norm(r1.data()[i]);
  }
  CHECK(std::sqrt(num / den) < 1e-8);
}

TEST_CASE("smooth and raw recovery orders agree") {
  // theta_k = h phi_k summed (smooth) versus multiplying the recovered slice
  // by the window after summation (raw)
  GalleryEntry e = bspline_1d();
  const AtomSystem& sys = e.system;
  auto fns = make_system_ensemble(sys, 1, 5150);
  AnalysisResult ar = analyze_function(sys, fns[0]);
  size_t li = 6;
  const AtomLevel& lv = sys.levels[li];
  const LevelCoeffs& lc = ar.levels[li];
  if (lc.energy() > 0.0) {
    ExponentialSystem es(*lc.nodes, lv.h.support());
    DualSystem duals = DualSystem::build(es, DualSystem::Method::canonical);
    auto d = duals.apply(lc.c);
    Rng rng(8);
    for (int t = 0; t < 200; ++t) {
      double omega = rng.uniform(-16.0, 16.0);
      std::vector<double> u = mat_apply(lv.B, {omega});
      cplx hv = lv.h.value(u);
      if (hv == cplx(0.0, 0.0)) continue;
      cplx smooth(0.0, 0.0), raw(0.0, 0.0);
      for (size_t l = 0; l < d.size(); ++l) {
        cplx ev = std::polar(1.0, -TWO_PI * lc.nodes->point(l)[0] * u[0]);
        smooth += d[l] * (hv * ev);  // window folded into each dual
        raw += d[l] * ev;
      }
      raw *= hv;
      CHECK(std::abs(smooth - raw) <= 1e-8 * (std::abs(raw) + 1.0));
    }
  }
}

TEST_CASE("conjugate-gradient duals reproduce the canonical pipeline") {
  GalleryEntry e = bspline_1d();
  auto fns = make_system_ensemble(e.system, 1, 6161);
  AnalysisResult ar = analyze_function(e.system, fns[0]);
  SampledField truth = SampledField::sample(fns[0], e.recon_box, e.recon_dims);

  ReconstructionOptions canonical;
  ReconstructionOptions cg;
  cg.dual_method = DualSystem::Method::cg;
  SampledField r1 = Reconstructor(e.system, canonical).full(ar, e.recon_box, e.recon_dims);
  SampledField r2 = Reconstructor(e.system, cg).full(ar, e.recon_box, e.recon_dims);
  // the methods may differ along numerically null dual directions only
  CHECK(relative_l2_error(r2, r1) < 1e-6);
}

TEST_CASE("coarse grids fail the oscillation check with a resolution error") {
  GalleryEntry e = bspline_1d();
  SampledField coarse(BoxD{{-32.0}, {32.0}}, {1024});
  CHECK_THROWS_WITH_AS(analyze_field(e.system, coarse),
                       doctest::Contains("samples per period"), Error);
}

TEST_CASE("division threshold flags holes inside the working region") {
  GalleryEntry e = shannon_1d();
  auto fns = make_system_ensemble(e.system, 1, 5);
  SampledField f = SampledField::sample(fns[0], e.system.grid_box, e.system.grid_dims);
  AnalysisResult ar = analyze_field(e.system, f);
  ReconstructionOptions opt;
  opt.denom_threshold = 10.0;  // absurd threshold: every point is a "hole"
  CHECK_THROWS_WITH_AS(
      reconstruct_full(e.system, ar, e.system.grid_box, e.system.grid_dims, nullptr, opt),
      doctest::Contains("RPU hole"), Error);
}

TEST_CASE("end-to-end errors stay within the budget") {
  // tight tiling
  {
    GalleryEntry e = shannon_1d();
    auto fns = make_system_ensemble(e.system, 3, 314);
    Reconstructor recon(e.system);
    for (const auto& fn : fns) {
      SampledField truth = SampledField::sample(fn, e.recon_box, e.recon_dims);
      AnalysisResult ar = analyze_field(e.system, truth);
      ReconstructionReport rep;
      recon.full(ar, e.recon_box, e.recon_dims, &truth, &rep);
      CHECK(rep.final_rel_error < 1e-6);
    }
  }
  // overlapping smooth family
  {
    GalleryEntry e = bspline_1d();
    auto fns = make_system_ensemble(e.system, 3, 315);
    Reconstructor recon(e.system);
    for (const auto& fn : fns) {
      SampledField truth = SampledField::sample(fn, e.recon_box, e.recon_dims);
      AnalysisResult ar = analyze_function(e.system, fn);
      ReconstructionReport rep;
      recon.full(ar, e.recon_box, e.recon_dims, &truth, &rep);
      CHECK(rep.final_rel_error < 1e-4);
    }
  }
}
