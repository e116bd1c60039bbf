#include "wf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wf/fft.hpp"

namespace wf {

double LevelCoeffs::energy() const {
  KahanSum s;
  for (const cplx& z : c) s.add(std::norm(z));
  return s.value();
}

double AnalysisResult::coeff_energy() const {
  KahanSum s;
  for (const auto& lv : levels) s.add(lv.energy());
  return s.value();
}

double AnalysisResult::ratio() const {
  if (!(f_norm2 > 0.0)) fail(ErrorCode::domain, "ratio: zero test function");
  return coeff_energy() / f_norm2;
}

namespace {

bool diagonal_positive(const Mat& B, std::vector<double>& diag) {
  diag.assign(B.rows, 0.0);
  for (int i = 0; i < B.rows; ++i) {
    for (int j = 0; j < B.cols; ++j) {
      if (i == j) continue;
      if (std::abs(B(i, j)) > 1e-14) return false;
    }
    if (!(B(i, i) > 0.0)) return false;
    diag[i] = B(i, i);
  }
  return true;
}

bool near_integer(double x, double tol) { return std::abs(x - std::round(x)) <= tol; }

// smallest power of two >= span whose product with the lattice spacing is an
// integer (the FFT frequency set then contains the coefficient lattice)
bool find_period(double span, double s, double& L, long& P0) {
  int c = int(std::ceil(std::log2(std::max(span, 1e-12))));
  for (int it = 0; it < 46; ++it, ++c) {
    double Lc = std::ldexp(1.0, c);
    if (Lc < span * (1.0 - 1e-12)) continue;
    double p = Lc * s;
    if (near_integer(p, 1e-9 * std::max(1.0, p))) {
      L = Lc;
      P0 = std::lround(p);
      return P0 >= 1;
    }
  }
  return false;
}

struct AxisPlan {
  long sel_lo = 0, sel_count = 0;
  long M = 0, off = 0, P0 = 1;
  double L = 0.0, delta = 0.0, origin = 0.0;
};

// aligned plan: the pulled source grid embeds exactly into an L-periodic
// array whose DFT frequencies contain the coefficient lattice
bool plan_aligned_axis(double b, double grid_lo, double grid_step, long grid_n,
                       double lo, double hi, double s, AxisPlan& out) {
  double delta = b * grid_step;
  long ilo = long(std::ceil((lo / b - grid_lo) / grid_step - 0.5 - 1e-9));
  long ihi = long(std::floor((hi / b - grid_lo) / grid_step - 0.5 + 1e-9));
  ilo = std::max(ilo, 0L);
  ihi = std::min(ihi, grid_n - 1);
  if (ihi < ilo) return false;
  double span = hi - lo;
  double L;
  long P0;
  if (!find_period(span, s, L, P0)) return false;
  for (int grow = 0; grow < 8; ++grow) {
    double Mr = L / delta;
    if (!near_integer(Mr, 1e-6)) return false;
    long M = std::lround(Mr);
    if (M < 1 || M > (1L << 26)) return false;
    double u_first = b * (grid_lo + (ilo + 0.5) * grid_step);
    double target = 0.5 * (lo + hi) - 0.5 * L;
    long n0 = std::lround((u_first - target) / delta - 0.5);
    double origin = u_first - (n0 + 0.5) * delta;
    long count = ihi - ilo + 1;
    if (n0 >= 0 && n0 + count <= M && origin <= lo + 1e-9 && origin + L >= hi - 1e-9) {
      out.sel_lo = ilo;
      out.sel_count = count;
      out.M = M;
      out.off = n0;
      out.P0 = P0;
      out.L = L;
      out.delta = delta;
      out.origin = origin;
      return true;
    }
    L *= 2.0;
    P0 *= 2;
  }
  return false;
}

bool plan_canonical_axis(double lo, double hi, double s, long min_M, AxisPlan& out) {
  double span = hi - lo;
  double L;
  long P0;
  if (!find_period(span, s, L, P0)) return false;
  long M = 1;
  while (M < min_M) M <<= 1;
  out.sel_lo = 0;
  out.sel_count = 0;
  out.M = M;
  out.off = 0;
  out.P0 = P0;
  out.L = L;
  out.delta = L / double(M);
  out.origin = 0.5 * (lo + hi) - 0.5 * L;
  return true;
}

void coeff_range(const AxisPlan& p, long& kmin, long& kcount) {
  if (p.P0 == 1) {
    kmin = -p.M / 2;
    kcount = p.M;
  } else {
    long khalf = (p.M / 2 - 1) / p.P0;
    kmin = -khalf;
    kcount = 2 * khalf + 1;
  }
}

// extract coefficients from the transformed embed array
void bins_to_coeffs(const std::vector<cplx>& C, const std::vector<AxisPlan>& plans,
                    const std::vector<double>& spacing, LevelCoeffs& lc) {
  int d = int(plans.size());
  lc.kmin.resize(d);
  lc.kcount.resize(d);
  double cellvol = 1.0;
  for (int i = 0; i < d; ++i) {
    coeff_range(plans[i], lc.kmin[i], lc.kcount[i]);
    cellvol *= plans[i].delta;
  }
  size_t total = 1;
  for (int i = 0; i < d; ++i) total *= size_t(lc.kcount[i]);
  lc.c.assign(total, cplx(0.0, 0.0));
  parallel_for(total, [&](size_t, size_t bgn, size_t end) {
    std::vector<long> k(d);
    for (size_t flat = bgn; flat < end; ++flat) {
      size_t rest = flat;
      for (int i = d - 1; i >= 0; --i) {
        k[i] = lc.kmin[i] + long(rest % size_t(lc.kcount[i]));
        rest /= size_t(lc.kcount[i]);
      }
      size_t bin = 0;
      double ph = 0.0;
      for (int i = 0; i < d; ++i) {
        long n = ((k[i] * plans[i].P0) % plans[i].M + plans[i].M) % plans[i].M;
        bin = bin * size_t(plans[i].M) + size_t(n);
        ph += spacing[i] * double(k[i]) * (plans[i].origin + 0.5 * plans[i].delta);
      }
      lc.c[flat] = cellvol * cplx(std::cos(TWO_PI * ph), std::sin(TWO_PI * ph)) * C[bin];
    }
  });
  lc.spacing = spacing;
  double R = 0.0;
  for (int i = 0; i < d; ++i)
    R = std::max(R, spacing[i] * double(std::max(std::labs(lc.kmin[i]),
                                                 std::labs(lc.kmin[i] + lc.kcount[i] - 1))));
  lc.truncation_R = R;
}

void store_plans(const std::vector<AxisPlan>& plans, LevelCoeffs& lc) {
  for (const auto& p : plans) {
    lc.sel_lo.push_back(p.sel_lo);
    lc.sel_count.push_back(p.sel_count);
    lc.embed_M.push_back(p.M);
    lc.embed_off.push_back(p.off);
    lc.embed_origin.push_back(p.origin);
    lc.period.push_back(p.L);
    lc.stride.push_back(p.P0);
    lc.delta.push_back(p.delta);
  }
}

void run_fft_nd(std::vector<cplx>& data, const std::vector<AxisPlan>& plans, int sign) {
  if (plans.size() == 1) {
    fft(data, sign);
  } else if (plans.size() == 2) {
    fft2(data, size_t(plans[0].M), size_t(plans[1].M), sign);
  } else {
    fail(ErrorCode::config, "analysis: FFT engines support d <= 2");
  }
}

// ---- engine A: aligned ----------------------------------------------------

bool analyze_level_aligned(const AtomLevel& lv, const SampledField& f, LevelCoeffs& lc) {
  if (lv.grid.kind != GridSpec::Kind::regular_full) return false;
  std::vector<double> diag;
  if (!diagonal_positive(lv.B, diag)) return false;
  int d = f.dim();
  BoxD sb = lv.h.support().bounding_box();
  std::vector<AxisPlan> plans(d);
  for (int i = 0; i < d; ++i) {
    if (!plan_aligned_axis(diag[i], f.box().lo[i], f.step(i), f.dims()[i], sb.lo[i], sb.hi[i],
                           lv.grid.spacing[i], plans[i]))
      return false;
  }
  size_t embed_total = 1;
  for (int i = 0; i < d; ++i) embed_total *= size_t(plans[i].M);
  if (embed_total > size_t(1) << 26) return false;
  std::vector<cplx> v(embed_total, cplx(0.0, 0.0));
  double scale = lv.amp / lv.abs_det_B;

  size_t sel_total = 1;
  for (int i = 0; i < d; ++i) sel_total *= size_t(plans[i].sel_count);
  parallel_for(sel_total, [&](size_t, size_t bgn, size_t end) {
    std::vector<long> idx(d);
    std::vector<double> u(d);
    std::vector<long> src(d);
    for (size_t flat = bgn; flat < end; ++flat) {
      size_t rest = flat;
      for (int i = d - 1; i >= 0; --i) {
        idx[i] = long(rest % size_t(plans[i].sel_count));
        rest /= size_t(plans[i].sel_count);
      }
      size_t embed_flat = 0;
      for (int i = 0; i < d; ++i) {
        src[i] = plans[i].sel_lo + idx[i];
        u[i] = plans[i].origin + (plans[i].off + idx[i] + 0.5) * plans[i].delta;
        embed_flat = embed_flat * size_t(plans[i].M) + size_t(plans[i].off + idx[i]);
      }
      cplx hv = std::conj(lv.h.value(u));
      if (hv == cplx(0.0, 0.0)) continue;
      v[embed_flat] = scale * f.data()[f.flat_index(src)] * hv;
    }
  });

  run_fft_nd(v, plans, +1);
  lc.layout = LevelCoeffs::Layout::regular;
  lc.engine = "fft-aligned";
  bins_to_coeffs(v, plans, lv.grid.spacing, lc);
  store_plans(plans, lc);
  return true;
}

// ---- engine A: canonical pulled grid (closed-form f) ----------------------

bool analyze_level_canonical(const AtomLevel& lv, const TestFunction& f, long log2M,
                             LevelCoeffs& lc) {
  if (lv.grid.kind != GridSpec::Kind::regular_full) return false;
  int d = lv.h.dim();
  BoxD sb = lv.h.support().bounding_box();
  std::vector<AxisPlan> plans(d);
  for (int i = 0; i < d; ++i)
    if (!plan_canonical_axis(sb.lo[i], sb.hi[i], lv.grid.spacing[i], 1L << log2M, plans[i]))
      return false;
  size_t embed_total = 1;
  for (int i = 0; i < d; ++i) embed_total *= size_t(plans[i].M);
  std::vector<cplx> v(embed_total, cplx(0.0, 0.0));
  double scale = lv.amp / lv.abs_det_B;

  parallel_for(embed_total, [&](size_t, size_t bgn, size_t end) {
    std::vector<double> u(d);
    std::vector<long> idx(d);
    for (size_t flat = bgn; flat < end; ++flat) {
      size_t rest = flat;
      for (int i = d - 1; i >= 0; --i) {
        idx[i] = long(rest % size_t(plans[i].M));
        rest /= size_t(plans[i].M);
      }
      for (int i = 0; i < d; ++i) u[i] = plans[i].origin + (idx[i] + 0.5) * plans[i].delta;
      cplx hv = std::conj(lv.h.value(u));
      if (hv == cplx(0.0, 0.0)) continue;
      v[flat] = scale * f.value(mat_apply(lv.Binv, u)) * hv;
    }
  });

  run_fft_nd(v, plans, +1);
  lc.layout = LevelCoeffs::Layout::regular;
  lc.engine = "fft-canonical";
  bins_to_coeffs(v, plans, lv.grid.spacing, lc);
  store_plans(plans, lc);
  return true;
}

// ---- engine B: pulled-grid NUDFT (closed-form f, explicit points) ---------

void analyze_level_nudft_pulled(const AtomLevel& lv, const TestFunction& f, long log2M,
                                LevelCoeffs& lc) {
  int d = lv.h.dim();
  const PointSet& pts = *lv.grid.points;
  double R = lv.grid.truncation_R;
  BoxD sb = lv.h.support().bounding_box();
  std::vector<long> M(d);
  std::vector<double> delta(d), origin(d);
  for (int i = 0; i < d; ++i) {
    long m = 1L << log2M;
    // oversample to at least 8 samples per oscillation of e_{x}(u)
    while (double(m) < 8.0 * R * sb.width(i)) m <<= 1;
    M[i] = m;
    delta[i] = sb.width(i) / double(m);
    origin[i] = sb.lo[i];
  }
  size_t total = 1;
  for (int i = 0; i < d; ++i) total *= size_t(M[i]);
  std::vector<cplx> w(total);
  double scale = lv.amp / lv.abs_det_B;
  parallel_for(total, [&](size_t, size_t bgn, size_t end) {
    std::vector<double> u(d);
    std::vector<long> idx(d);
    for (size_t flat = bgn; flat < end; ++flat) {
      size_t rest = flat;
      for (int i = d - 1; i >= 0; --i) {
        idx[i] = long(rest % size_t(M[i]));
        rest /= size_t(M[i]);
      }
      for (int i = 0; i < d; ++i) u[i] = origin[i] + (idx[i] + 0.5) * delta[i];
      cplx hv = std::conj(lv.h.value(u));
      w[flat] = hv == cplx(0.0, 0.0) ? hv : scale * f.value(mat_apply(lv.Binv, u)) * hv;
    }
  });

  double cellvol = 1.0;
  for (int i = 0; i < d; ++i) cellvol *= delta[i];
  size_t K = pts.size();
  lc.layout = LevelCoeffs::Layout::explicit_points;
  lc.engine = "nudft-pulled";
  lc.truncation_R = R;
  lc.nodes = pts;
  lc.c.assign(K, cplx(0.0, 0.0));
  if (d == 1) {
    parallel_for(K, [&](size_t, size_t bgn, size_t end) {
      for (size_t l = bgn; l < end; ++l) {
        double x = pts.point(l)[0];
        cplx rot = std::polar(1.0, TWO_PI * x * delta[0]);
        cplx ph = std::polar(1.0, TWO_PI * x * (origin[0] + 0.5 * delta[0]));
        cplx acc(0.0, 0.0);
        for (long m = 0; m < M[0]; ++m) {
          acc += w[size_t(m)] * ph;
          ph *= rot;
        }
        lc.c[l] = cellvol * acc;
      }
    });
  } else if (d == 2) {
    parallel_for(K, [&](size_t, size_t bgn, size_t end) {
      std::vector<cplx> t1(static_cast<size_t>(M[1]));
      for (size_t l = bgn; l < end; ++l) {
        double x0 = pts.point(l)[0], x1 = pts.point(l)[1];
        cplx rot1 = std::polar(1.0, TWO_PI * x1 * delta[1]);
        cplx ph1 = std::polar(1.0, TWO_PI * x1 * (origin[1] + 0.5 * delta[1]));
        for (long m = 0; m < M[1]; ++m) {
          t1[size_t(m)] = ph1;
          ph1 *= rot1;
        }
        cplx rot0 = std::polar(1.0, TWO_PI * x0 * delta[0]);
        cplx ph0 = std::polar(1.0, TWO_PI * x0 * (origin[0] + 0.5 * delta[0]));
        cplx acc(0.0, 0.0);
        for (long m0 = 0; m0 < M[0]; ++m0) {
          const cplx* row = &w[size_t(m0) * size_t(M[1])];
          cplx inner(0.0, 0.0);
          for (long m1 = 0; m1 < M[1]; ++m1) inner += row[size_t(m1)] * t1[size_t(m1)];
          acc += inner * ph0;
          ph0 *= rot0;
        }
        lc.c[l] = cellvol * acc;
      }
    });
  } else {
    fail(ErrorCode::config, "analysis: d <= 2 supported");
  }
}

// ---- engine B: direct grid NUDFT (sampled f, explicit points) -------------

void analyze_level_nudft_grid(const AtomLevel& lv, const PointSet& pts, const SampledField& f,
                              LevelCoeffs& lc) {
  int d = f.dim();
  // Nyquist: oscillation of e_{x}(B w) along axis i is (B^T x)_i
  for (int i = 0; i < d; ++i) {
    double numax = 0.0;
    for (const auto& p : pts.points()) {
      double nu = 0.0;
      for (int j = 0; j < d; ++j) nu += lv.B(j, i) * p[j];
      numax = std::max(numax, std::abs(nu));
    }
    if (numax * f.step(i) > 0.125 + 1e-12)
      fail(ErrorCode::resolution,
           "analysis: grid too coarse for the finest-level oscillation (axis " +
               std::to_string(i) + "); need >= 8 samples per period");
  }

  // collect source samples inside the level's frequency support
  BoxD bb = lv.support_omega.bounding_box();
  std::vector<long> lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = std::max(0L, long(std::floor((bb.lo[i] - f.box().lo[i]) / f.step(i) - 0.5)));
    hi[i] = std::min(f.dims()[i] - 1, long(std::ceil((bb.hi[i] - f.box().lo[i]) / f.step(i))));
  }
  std::vector<std::vector<double>> us;
  std::vector<cplx> vals;
  std::vector<long> idx = lo;
  double cellvol = f.cell_volume();
  double scale = lv.amp;
  bool empty = false;
  for (int i = 0; i < d; ++i)
    if (lo[i] > hi[i]) empty = true;
  if (!empty) {
    for (;;) {
      std::vector<double> omega(d);
      for (int i = 0; i < d; ++i) omega[i] = f.box().lo[i] + (idx[i] + 0.5) * f.step(i);
      std::vector<double> u = mat_apply(lv.B, omega);
      cplx hv = std::conj(lv.h.value(u));
      if (hv != cplx(0.0, 0.0)) {
        us.push_back(u);
        vals.push_back(scale * cellvol * f.data()[f.flat_index(idx)] * hv);
      }
      int axis = d - 1;
      while (axis >= 0 && ++idx[axis] > hi[axis]) {
        idx[axis] = lo[axis];
        --axis;
      }
      if (axis < 0) break;
    }
  }

  size_t K = pts.size();
  lc.layout = LevelCoeffs::Layout::explicit_points;
  lc.engine = "nudft-grid";
  lc.truncation_R = lv.grid.truncation_R;
  lc.nodes = pts;
  lc.c.assign(K, cplx(0.0, 0.0));
  parallel_for(K, [&](size_t, size_t bgn, size_t end) {
    for (size_t l = bgn; l < end; ++l) {
      const auto& x = pts.point(l);
      cplx acc(0.0, 0.0);
      for (size_t m = 0; m < us.size(); ++m) {
        double ph = 0.0;
        for (int i = 0; i < d; ++i) ph += x[i] * us[m][i];
        acc += vals[m] * std::polar(1.0, TWO_PI * ph);
      }
      lc.c[l] = acc;
    }
  });
}

double default_explicit_R(const AtomLevel& lv, const SampledField& f) {
  double R = std::numeric_limits<double>::infinity();
  for (int i = 0; i < f.dim(); ++i) {
    double colsum = 0.0;
    for (int j = 0; j < f.dim(); ++j) colsum += std::abs(lv.B(j, i));
    if (colsum > 0.0) R = std::min(R, 0.125 / (colsum * f.step(i)));
  }
  return std::isfinite(R) ? R : 1.0;
}

}  // namespace

AnalysisResult analyze_field(const AtomSystem& sys, const SampledField& f) {
  if (f.dim() != sys.dim) fail(ErrorCode::domain, "analyze: dimension mismatch");
  AnalysisResult out;
  out.f_norm2 = f.norm2();
  out.levels.resize(sys.levels.size());
  for (size_t li = 0; li < sys.levels.size(); ++li) {
    const AtomLevel& lv = sys.levels[li];
    LevelCoeffs& lc = out.levels[li];
    if (analyze_level_aligned(lv, f, lc)) continue;
    PointSet pts = lv.grid.kind == GridSpec::Kind::explicit_points
                       ? *lv.grid.points
                       : lv.grid.materialize(sys.dim, default_explicit_R(lv, f));
    analyze_level_nudft_grid(lv, pts, f, lc);
    if (lv.grid.kind != GridSpec::Kind::explicit_points) {
      double R = 0.0;
      for (const auto& p : pts.points())
        for (double cc : p) R = std::max(R, std::abs(cc));
      lc.truncation_R = R;
    }
  }
  return out;
}

AnalysisResult analyze_function(const AtomSystem& sys, const TestFunction& f) {
  if (f.dim() != sys.dim) fail(ErrorCode::domain, "analyze: dimension mismatch");
  AnalysisResult out;
  out.f_norm2 = f.norm2_quadrature();
  out.levels.resize(sys.levels.size());
  for (size_t li = 0; li < sys.levels.size(); ++li) {
    const AtomLevel& lv = sys.levels[li];
    LevelCoeffs& lc = out.levels[li];
    if (lv.grid.kind == GridSpec::Kind::regular_full) {
      if (analyze_level_canonical(lv, f, sys.canonical_log2, lc)) continue;
      fail(ErrorCode::config,
           "analyze: regular grid spacing is not FFT-compatible; materialize points");
    }
    analyze_level_nudft_pulled(lv, f, sys.canonical_log2, lc);
  }
  return out;
}

std::vector<TestFunction> make_system_ensemble(const AtomSystem& sys, int count,
                                               uint64_t seed) {
  if (sys.safe_spec.kind != SafeSpec::Kind::boxes)
    return make_scaled_ensemble(sys.safe_spec, sys.dim, count, seed);
  return make_ensemble(sys.safe_boxes, count, seed);
}

EmpiricalReport empirical_frame_bounds(const AtomSystem& sys, int count, uint64_t seed,
                                       bool via_grid) {
  std::vector<TestFunction> ensemble = make_system_ensemble(sys, count, seed);
  EmpiricalReport rep;
  rep.ratios.reserve(ensemble.size());
  double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
  for (const auto& fn : ensemble) {
    double r;
    if (via_grid && !sys.grid_dims.empty()) {
      SampledField f = SampledField::sample(fn, sys.grid_box, sys.grid_dims);
      r = analyze_field(sys, f).ratio();
    } else {
      r = analyze_function(sys, fn).ratio();
    }
    rep.ratios.push_back(r);
    mn = std::min(mn, r);
    mx = std::max(mx, r);
  }
  rep.bounds.m = mn;
  rep.bounds.M = mx;
  rep.bounds.kind = FrameBounds::Kind::empirical;
  rep.bounds.ensemble_seed = seed;
  rep.bounds.note = "band-limited ensemble over the safe boxes";
  return rep;
}

namespace {

void lagrange8_weights(double t, long M, long& i0, double w[8]) {
  i0 = long(std::floor(t)) - 3;
  i0 = std::clamp(i0, 0L, std::max(0L, M - 8));
  for (int j = 0; j < 8; ++j) {
    double wj = 1.0;
    for (int l = 0; l < 8; ++l) {
      if (l == j) continue;
      wj *= (t - double(i0 + l)) / double(j - l);
    }
    w[j] = wj;
  }
}

}  // namespace

cplx interp_lagrange8(const std::vector<cplx>& grid, const std::vector<long>& dims,
                      const std::vector<double>& origin, const std::vector<double>& step,
                      const std::vector<double>& u) {
  int d = int(dims.size());
  if (d == 1) {
    double t = (u[0] - origin[0]) / step[0] - 0.5;
    long i0;
    double w[8];
    lagrange8_weights(t, dims[0], i0, w);
    cplx acc(0.0, 0.0);
    for (int j = 0; j < 8 && i0 + j < dims[0]; ++j) acc += w[j] * grid[size_t(i0 + j)];
    return acc;
  }
  if (d == 2) {
    double t0 = (u[0] - origin[0]) / step[0] - 0.5;
    double t1 = (u[1] - origin[1]) / step[1] - 0.5;
    long i0, i1;
    double w0[8], w1[8];
    lagrange8_weights(t0, dims[0], i0, w0);
    lagrange8_weights(t1, dims[1], i1, w1);
    cplx acc(0.0, 0.0);
    for (int a = 0; a < 8 && i0 + a < dims[0]; ++a) {
      const cplx* row = &grid[size_t(i0 + a) * size_t(dims[1])];
      cplx inner(0.0, 0.0);
      for (int b = 0; b < 8 && i1 + b < dims[1]; ++b) inner += w1[b] * row[size_t(i1 + b)];
      acc += w0[a] * inner;
    }
    return acc;
  }
  fail(ErrorCode::config, "interp_lagrange8: d <= 2 supported");
}

namespace {

// rebuild the embed-bin array D with D[bin(k)] = d_k * conj(phase_k) and run
// the forward transform; returns w_rec over the embed grid
std::vector<cplx> synth_embed(const LevelCoeffs& lc, const std::vector<cplx>& d) {
  int dim = int(lc.embed_M.size());
  size_t embed_total = 1;
  for (int i = 0; i < dim; ++i) embed_total *= size_t(lc.embed_M[i]);
  std::vector<cplx> D(embed_total, cplx(0.0, 0.0));
  size_t total = d.size();
  std::vector<long> k(dim);
  for (size_t flat = 0; flat < total; ++flat) {
    size_t rest = flat;
    for (int i = dim - 1; i >= 0; --i) {
      k[i] = lc.kmin[i] + long(rest % size_t(lc.kcount[i]));
      rest /= size_t(lc.kcount[i]);
    }
    size_t bin = 0;
    double ph = 0.0;
    for (int i = 0; i < dim; ++i) {
      long n = ((k[i] * lc.stride[i]) % lc.embed_M[i] + lc.embed_M[i]) % lc.embed_M[i];
      bin = bin * size_t(lc.embed_M[i]) + size_t(n);
      ph += lc.spacing[i] * double(k[i]) * (lc.embed_origin[i] + 0.5 * lc.delta[i]);
    }
    D[bin] += d[flat] * cplx(std::cos(-TWO_PI * ph), std::sin(-TWO_PI * ph));
  }
  if (dim == 1) fft(D, -1);
  else if (dim == 2) fft2(D, size_t(lc.embed_M[0]), size_t(lc.embed_M[1]), -1);
  else fail(ErrorCode::config, "synthesize: d <= 2 supported");
  return D;
}

}  // namespace

void synthesize_level(const AtomSystem& sys, size_t level, const LevelCoeffs& lc,
                      const std::vector<cplx>& d, double scale, SampledField& out) {
  const AtomLevel& lv = sys.levels.at(level);
  int dim = out.dim();
  if (lc.layout == LevelCoeffs::Layout::regular && lc.engine == "fft-aligned") {
    std::vector<cplx> w = synth_embed(lc, d);
    size_t sel_total = 1;
    for (int i = 0; i < dim; ++i) sel_total *= size_t(lc.sel_count[i]);
    std::vector<long> idx(dim);
    std::vector<double> u(dim);
    std::vector<long> src(dim);
    for (size_t flat = 0; flat < sel_total; ++flat) {
      size_t rest = flat;
      for (int i = dim - 1; i >= 0; --i) {
        idx[i] = long(rest % size_t(lc.sel_count[i]));
        rest /= size_t(lc.sel_count[i]);
      }
      size_t embed_flat = 0;
      for (int i = 0; i < dim; ++i) {
        src[i] = lc.sel_lo[i] + idx[i];
        u[i] = lc.embed_origin[i] + (lc.embed_off[i] + idx[i] + 0.5) * lc.delta[i];
        embed_flat = embed_flat * size_t(lc.embed_M[i]) + size_t(lc.embed_off[i] + idx[i]);
      }
      cplx hv = lv.h.value(u);
      if (hv == cplx(0.0, 0.0)) continue;
      out.data()[out.flat_index(src)] += scale * hv * w[embed_flat];
    }
    return;
  }
  if (lc.layout == LevelCoeffs::Layout::regular && lc.engine == "fft-canonical") {
    std::vector<cplx> w = synth_embed(lc, d);
    // the smooth product h * w_rec interpolates well; build it on the grid
    size_t embed_total = w.size();
    std::vector<long> idx(dim);
    std::vector<double> u(dim);
    for (size_t flat = 0; flat < embed_total; ++flat) {
      size_t rest = flat;
      for (int i = dim - 1; i >= 0; --i) {
        idx[i] = long(rest % size_t(lc.embed_M[i]));
        rest /= size_t(lc.embed_M[i]);
      }
      for (int i = 0; i < dim; ++i)
        u[i] = lc.embed_origin[i] + (idx[i] + 0.5) * lc.delta[i];
      w[flat] *= lv.h.value(u);
    }
    size_t n = out.size();
    parallel_for(n, [&](size_t, size_t bgn, size_t end) {
      std::vector<double> uu(dim);
      for (size_t i = bgn; i < end; ++i) {
        std::vector<double> omega = out.coord(i);
        if (!lv.support_omega.contains(omega)) continue;
        uu = mat_apply(lv.B, omega);
        out.data()[i] += scale * interp_lagrange8(w, lc.embed_M, lc.embed_origin, lc.delta, uu);
      }
    });
    return;
  }
  // explicit layouts: direct evaluation at the output samples
  if (!lc.nodes) fail(ErrorCode::config, "synthesize: explicit layout without node list");
  const PointSet& pts = *lc.nodes;
  if (d.size() != pts.size()) fail(ErrorCode::domain, "synthesize: coefficient count mismatch");
  size_t n = out.size();
  parallel_for(n, [&](size_t, size_t bgn, size_t end) {
    for (size_t i = bgn; i < end; ++i) {
      std::vector<double> omega = out.coord(i);
      std::vector<double> u = mat_apply(lv.B, omega);
      cplx hv = lv.h.value(u);
      if (hv == cplx(0.0, 0.0)) continue;
      cplx acc(0.0, 0.0);
      for (size_t l = 0; l < pts.size(); ++l) {
        double ph = 0.0;
        for (int c = 0; c < dim; ++c) ph += pts.point(l)[c] * u[c];
        acc += d[l] * std::polar(1.0, -TWO_PI * ph);
      }
      out.data()[i] += scale * hv * acc;
    }
  });
}

SampledField frame_operator_apply(const AtomSystem& sys, const SampledField& f) {
  AnalysisResult ar = analyze_field(sys, f);
  SampledField out(f.box(), f.dims());
  for (size_t li = 0; li < sys.levels.size(); ++li)
    synthesize_level(sys, li, ar.levels[li], ar.levels[li].c, sys.levels[li].amp, out);
  return out;
}

}  // namespace wf
