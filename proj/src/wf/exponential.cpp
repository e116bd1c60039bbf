#include "wf/exponential.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "wf/quadrature.hpp"
#include "wf/test_function.hpp"

namespace wf {

std::string to_string(FrameBounds::Kind k) {
  switch (k) {
    case FrameBounds::Kind::certified_sufficient: return "certified-sufficient";
    case FrameBounds::Kind::gram_estimate: return "gram-estimate";
    case FrameBounds::Kind::empirical: return "empirical";
  }
  return "?";
}

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// interval: width * e^{-pi i d (a+b)} * sinc(d * width), sinc(t)=sin(pi t)/(pi t)
cplx interval_exp_integral(double a, double b, double d) {
  double w = b - a;
  if (w <= 0.0) return cplx(0.0, 0.0);
  double t = d * w;
  double s = t == 0.0 ? 1.0 : std::sin(PI * t) / (PI * t);
  double phase = -PI * d * (a + b);
  return w * s * cplx(std::cos(phase), std::sin(phase));
}

}  // namespace

cplx region_exp_integral(const Region& Q, const std::vector<double>& delta) {
  switch (Q.kind()) {
    case Region::Kind::box: {
      const BoxD& b = Q.box_params();
      cplx out(1.0, 0.0);
      for (int i = 0; i < Q.dim(); ++i) out *= interval_exp_integral(b.lo[i], b.hi[i], delta[i]);
      return out;
    }
    case Region::Kind::set_union: {
      cplx out(0.0, 0.0);
      for (const auto& p : Q.parts()) out += region_exp_integral(p, delta);
      return out;
    }
    case Region::Kind::affine: {
      // \int_{MQ+t} = |det M| e^{-2 pi i delta.t} \int_Q e^{-2 pi i (M^T delta).u} du
      const Mat& M = Q.matrix();
      std::vector<double> Mtd = mat_apply(mat_transpose(M), delta);
      double phase = 0.0;
      for (int i = 0; i < Q.dim(); ++i) phase += delta[i] * Q.offset()[i];
      cplx rot(std::cos(-TWO_PI * phase), std::sin(-TWO_PI * phase));
      return std::abs(mat_det(M)) * rot * region_exp_integral(Q.base(), Mtd);
    }
    case Region::Kind::difference: {
      // exact only for nested differences (the construction paths use these)
      cplx outer = region_exp_integral(Q.base(), delta);
      cplx inner = region_exp_integral(Q.inner(), delta);
      return outer - inner;
    }
    case Region::Kind::product: {
      int d1 = Q.product_first().dim();
      std::vector<double> da(delta.begin(), delta.begin() + d1);
      std::vector<double> db(delta.begin() + d1, delta.end());
      return region_exp_integral(Q.product_first(), da) *
             region_exp_integral(Q.product_second(), db);
    }
    case Region::Kind::annulus_sector: {
      const auto& s = Q.sector_params();
      double dn = norm2(delta);
      auto f = [&](double r, double t) -> cplx {
        double x = r * std::cos(t), y = r * std::sin(t);
        double ph = -TWO_PI * (delta[0] * x + delta[1] * y);
        return r * cplx(std::cos(ph), std::sin(ph));
      };
      return integrate_2d(f, s.r0, s.r1, s.theta0, s.theta1,
                          dn * (s.r1 - s.r0), dn * s.r1 * (s.theta1 - s.theta0), 3);
    }
    case Region::Kind::spiral_sector: {
      const auto& s = Q.spiral_params();
      double la = std::log(s.a);
      double dn = norm2(delta);
      double rmax = s.l1 * std::pow(s.a, std::max(s.t0, s.t1));
      auto f = [&](double lam, double t) -> cplx {
        double r = lam * std::pow(s.a, t);
        double x = r * std::cos(s.b * t), y = r * std::sin(s.b * t);
        double ph = -TWO_PI * (delta[0] * x + delta[1] * y);
        double jac = lam * s.b * std::exp(2.0 * t * la);
        return jac * cplx(std::cos(ph), std::sin(ph));
      };
      double arc = rmax * (s.b + 2.0 * la) * (s.t1 - s.t0);
      return integrate_2d(f, s.l0, s.l1, s.t0, s.t1,
                          dn * (s.l1 - s.l0) * std::pow(s.a, s.t1), dn * arc, 3);
    }
  }
  fail(ErrorCode::domain, "region_exp_integral: unknown region kind");
}

ExponentialSystem::ExponentialSystem(PointSet points, Region region, Normalization norm,
                                     double extra_amp)
    : points_(std::move(points)), region_(std::move(region)), norm_(norm) {
  if (points_.dim() != region_.dim())
    fail(ErrorCode::domain, "ExponentialSystem: dimension mismatch");
  measure_ = region_.measure();
  if (!(measure_ > 0.0))
    fail(ErrorCode::domain, "ExponentialSystem: region must have positive measure");
  amp_ = extra_amp;
  if (norm_ == Normalization::measure_normalized) amp_ /= std::sqrt(measure_);
}

cplx ExponentialSystem::atom_value(size_t k, const std::vector<double>& xi) const {
  if (!region_.contains(xi)) return cplx(0.0, 0.0);
  double ph = 0.0;
  const auto& x = points_.point(k);
  for (int i = 0; i < dim(); ++i) ph += x[i] * xi[i];
  return amp_ * cplx(std::cos(-TWO_PI * ph), std::sin(-TWO_PI * ph));
}

CMat ExponentialSystem::gram() const {
  size_t n = points_.size();
  CMat G{int(n), int(n)};
  double a2 = amp_ * amp_;
  parallel_for(n, [&](size_t, size_t b, size_t e) {
    std::vector<double> delta(dim());
    for (size_t k = b; k < e; ++k) {
      for (size_t l = 0; l <= k; ++l) {
        for (int i = 0; i < dim(); ++i) delta[i] = points_.point(k)[i] - points_.point(l)[i];
        cplx v = a2 * region_exp_integral(region_, delta);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          fail(ErrorCode::numeric, "gram: non-finite entry");
        G(int(k), int(l)) = v;
        G(int(l), int(k)) = std::conj(v);
      }
    }
  });
  return G;
}

FrameBounds frame_bounds_gram(const ExponentialSystem& sys, double rel_eig_cutoff) {
  CMat G = sys.gram();
  HermitianEig eig = hermitian_eig(G, false);
  double top = eig.values.back();
  if (!(top > 0.0)) fail(ErrorCode::conditioning, "frame_bounds_gram: zero Gram matrix");
  double cutoff = top * rel_eig_cutoff;
  double low = top;
  for (double v : eig.values)
    if (v > cutoff) { low = v; break; }
  FrameBounds out;
  out.m = low;
  out.M = top;
  out.kind = FrameBounds::Kind::gram_estimate;
  BoxD bb = sys.points().bounding_box();
  double R = 0.0;
  for (int i = 0; i < sys.dim(); ++i)
    R = std::max({R, std::abs(bb.lo[i]), std::abs(bb.hi[i])});
  out.truncation_R = R;
  out.note = "lower bound valid on the span of the truncated system";
  return out;
}

FrameBounds frame_bounds_empirical_span(const ExponentialSystem& sys, int n_random,
                                        uint64_t seed) {
  size_t n = sys.points().size();
  CMat G = sys.gram();
  HermitianEig eig = hermitian_eig(G, true);
  double top = eig.values.back();
  double cutoff = top * 1e-10;
  std::vector<int> retained;
  for (int i = 0; i < int(n); ++i)
    if (eig.values[i] > cutoff) retained.push_back(i);
  if (retained.empty()) fail(ErrorCode::conditioning, "empirical_span: Gram numerically zero");

  // f = sum_l b_l g_l: ||f||^2 = b* G b and sum_k |<f, g_k>|^2 = ||G b||^2
  // up to coefficient conjugation. Both quadratic forms go through the Gram
  // matrix itself; the eigenvectors only pin the test span.
  auto ratio_of = [&](const std::vector<cplx>& b) -> double {
    std::vector<cplx> Gb = cmat_apply(G, b);
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < n; ++k) {
      num += std::norm(Gb[k]);
      den += std::real(std::conj(b[k]) * Gb[k]);
    }
    if (den <= 0.0) return -1.0;
    return num / den;
  };

  Rng rng(seed);
  double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
  std::vector<cplx> b(n);
  for (int t = 0; t < n_random; ++t) {
    // random combination inside the retained span
    std::fill(b.begin(), b.end(), cplx(0.0, 0.0));
    for (int idx : retained) {
      cplx w = rng.complex_normal();
      for (size_t i = 0; i < n; ++i) b[i] += w * eig.vectors(int(i), idx);
    }
    double r = ratio_of(b);
    if (r < 0.0) continue;
    mn = std::min(mn, r);
    mx = std::max(mx, r);
  }
  // The extreme retained eigenvectors drive the empirical bounds onto the
  // Gram extremes.
  for (int idx : {retained.front(), retained.back()}) {
    for (size_t i = 0; i < n; ++i) b[i] = eig.vectors(int(i), idx);
    double r = ratio_of(b);
    if (r >= 0.0) {
      mn = std::min(mn, r);
      mx = std::max(mx, r);
    }
  }
  FrameBounds out;
  out.m = mn;
  out.M = mx;
  out.kind = FrameBounds::Kind::empirical;
  out.ensemble_seed = seed;
  out.note = "span ensemble (random coefficients + extreme Gram eigenvectors)";
  return out;
}

FrameBounds frame_bounds_empirical_bandlimited(const ExponentialSystem& sys, int count,
                                               uint64_t seed, long grid_per_axis) {
  int d = sys.dim();
  if (d > 2) fail(ErrorCode::config, "empirical_bandlimited: d <= 2 supported");

  // bumps live inside the leaf boxes of the region (union members or the
  // region's own bounding box)
  std::vector<BoxD> leaves;
  std::function<void(const Region&)> collect = [&](const Region& r) {
    if (r.kind() == Region::Kind::set_union) {
      for (const auto& p : r.parts()) collect(p);
    } else {
      leaves.push_back(r.bounding_box());
    }
  };
  collect(sys.region());

  BoxD bb = sys.region().bounding_box();
  double diam = 0.0;
  for (int i = 0; i < d; ++i) diam += bb.width(i) * bb.width(i);
  diam = std::sqrt(diam);

  Rng rng(seed);
  std::vector<TestFunction> ensemble;
  for (int f = 0; f < count; ++f) {
    const BoxD& leaf = leaves[size_t(rng.uniform_int(0, int(leaves.size()) - 1))];
    TestFunction::Term term;
    term.amp = rng.complex_normal();
    term.core.lo.resize(d);
    term.core.hi.resize(d);
    term.margins.resize(d);
    term.modulation.resize(d);
    for (int i = 0; i < d; ++i) {
      double inset = std::max(0.02 * diam, 0.12 * leaf.width(i));
      double lo = leaf.lo[i] + inset, hi = leaf.hi[i] - inset;
      if (!(hi > lo))
        fail(ErrorCode::precondition, "empirical_bandlimited: region too thin for the inset");
      double margin = 0.45 * (hi - lo) * rng.uniform(0.5, 1.0) * 0.5;
      term.core.lo[i] = lo + margin + rng.uniform(0.0, 0.25 * (hi - lo - 2.0 * margin));
      term.core.hi[i] = hi - margin - rng.uniform(0.0, 0.25 * (hi - lo - 2.0 * margin));
      if (term.core.hi[i] <= term.core.lo[i])
        term.core.hi[i] = term.core.lo[i] + 0.05 * (hi - lo);
      term.margins[i] = margin;
      term.modulation[i] = rng.uniform(-6.0, 6.0);
    }
    TestFunction fn(d, {term});
    // the support must not escape the region
    BoxD sb = fn.support_box();
    const int S = 7;
    std::vector<double> x(d);
    for (int i0 = 0; i0 < S; ++i0)
      for (int i1 = 0; i1 < (d == 2 ? S : 1); ++i1) {
        x[0] = sb.lo[0] + (i0 + 0.5) * (sb.hi[0] - sb.lo[0]) / S;
        if (d == 2) x[1] = sb.lo[1] + (i1 + 0.5) * (sb.hi[1] - sb.lo[1]) / S;
        if (!sys.region().contains(x))
          fail(ErrorCode::precondition,
               "empirical_bandlimited: ensemble function escapes the region at " +
                   format_point(x));
      }
    ensemble.push_back(std::move(fn));
  }

  // midpoint quadrature over the region's bounding box
  std::vector<long> dims(d, grid_per_axis);
  if (d == 2) dims.assign(2, std::min<long>(grid_per_axis, 512));
  size_t total = 1;
  for (long n : dims) total *= size_t(n);
  double cell = 1.0;
  for (int i = 0; i < d; ++i) cell *= bb.width(i) / dims[i];

  size_t K = sys.points().size();
  double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
  for (const auto& fn : ensemble) {
    std::vector<KahanSum> re(K), im(K);
    KahanSum norm2;
    std::vector<double> x(d);
    for (size_t flat = 0; flat < total; ++flat) {
      size_t rest = flat;
      for (int i = d - 1; i >= 0; --i) {
        long ix = long(rest % size_t(dims[i]));
        rest /= size_t(dims[i]);
        x[i] = bb.lo[i] + (ix + 0.5) * bb.width(i) / dims[i];
      }
      cplx fv = fn.value(x);
      if (fv == cplx(0.0, 0.0)) continue;
      if (!sys.region().contains(x)) continue;
      norm2.add(std::norm(fv));
      for (size_t k = 0; k < K; ++k) {
        cplx term = fv * std::conj(sys.atom_value(k, x));
        re[k].add(term.real());
        im[k].add(term.imag());
      }
    }
    double nf = norm2.value() * cell;
    if (!(nf > 0.0)) continue;
    double energy = 0.0;
    for (size_t k = 0; k < K; ++k)
      energy += std::norm(cplx(re[k].value(), im[k].value()) * cell);
    double ratio = energy / nf;
    mn = std::min(mn, ratio);
    mx = std::max(mx, ratio);
  }
  FrameBounds out;
  out.m = mn;
  out.M = mx;
  out.kind = FrameBounds::Kind::empirical;
  out.ensemble_seed = seed;
  BoxD pb = sys.points().bounding_box();
  for (int i = 0; i < d; ++i)
    out.truncation_R = std::max({out.truncation_R, std::abs(pb.lo[i]), std::abs(pb.hi[i])});
  out.note = "band-limited bump ensemble strictly inside the region";
  return out;
}

bool check_beurling_1d(const PointSet& X, double a, double density_r, double center_step) {
  if (X.dim() != 1) fail(ErrorCode::domain, "check_beurling_1d: 1-D only");
  DensityEstimate d = density_estimate(X, density_r, center_step);
  if (!d.separated) fail(ErrorCode::precondition, "check_beurling_1d: X is not separated");
  double bar = 2.0 * std::max(1.0, d.lower) / density_r;
  return d.lower - bar > a;
}

bool check_beurling_ball(const PointSet& X, double r, const Region& gap_domain,
                         double probe_step) {
  if (probe_step <= 0.0) {
    double sep = X.size() >= 2 ? separation(X) : 1.0;
    probe_step = sep > 0.0 ? sep / 4.0 : 0.01;
  }
  double rho = gap(X, gap_domain, probe_step);
  return r * rho < 0.25;
}

bool check_kadec(const PointSet& X, double spacing, double L) {
  if (X.dim() != 1) fail(ErrorCode::domain, "check_kadec: 1-D only");
  if (!(spacing > 0.0) || L < 0.0) fail(ErrorCode::domain, "check_kadec: bad parameters");
  std::vector<long> ks;
  double worst = 0.0;
  for (const auto& p : X.points()) {
    long k = std::lround(p[0] / spacing);
    worst = std::max(worst, std::abs(p[0] - k * spacing));
    ks.push_back(k);
  }
  std::sort(ks.begin(), ks.end());
  if (std::adjacent_find(ks.begin(), ks.end()) != ks.end())
    fail(ErrorCode::precondition, "check_kadec: points cannot be aligned with distinct integers");
  return worst <= L && L < spacing / 4.0;
}

std::optional<double> tight_bound_box_fit(const std::vector<double>& spacing, const Region& Q) {
  if (int(spacing.size()) != Q.dim()) fail(ErrorCode::domain, "tight_bound_box_fit: dim mismatch");
  BoxD bb = Q.bounding_box();
  double bound = 1.0;
  for (int i = 0; i < Q.dim(); ++i) {
    if (!(spacing[i] > 0.0)) fail(ErrorCode::domain, "tight_bound_box_fit: bad spacing");
    if (bb.width(i) > 1.0 / spacing[i] + 1e-12) return std::nullopt;
    bound /= spacing[i];
  }
  return bound;
}

ExponentialSystem transport_translate(const ExponentialSystem& sys,
                                      const std::vector<double>& y) {
  Region moved = Region::affine_image(Mat::identity(sys.dim()), y, sys.region());
  ExponentialSystem out(sys.points(), moved, ExponentialSystem::Normalization::raw,
                        sys.amplitude());
  if (sys.carried_bounds()) out.carry_bounds(*sys.carried_bounds());
  return out;
}

ExponentialSystem transport_dilate(const ExponentialSystem& sys, const Mat& A) {
  double det = mat_det(A);
  if (std::abs(det) < 1e-300) fail(ErrorCode::precondition, "transport_dilate: singular matrix");
  Mat AinvT = mat_transpose(mat_inverse(A));
  std::vector<std::vector<double>> pts;
  pts.reserve(sys.points().size());
  for (const auto& p : sys.points().points()) pts.push_back(mat_apply(AinvT, p));
  Region moved = Region::linear_image(A, sys.region());
  double amp = sys.amplitude() / std::sqrt(std::abs(det));
  ExponentialSystem out(PointSet(sys.dim(), std::move(pts)), moved,
                        ExponentialSystem::Normalization::raw, amp);
  if (sys.carried_bounds()) out.carry_bounds(*sys.carried_bounds());
  return out;
}

C1Map affine_map(const Mat& A, std::vector<double> b) {
  C1Map m;
  m.affine = true;
  m.A = A;
  m.b = b;
  double det = mat_det(A);
  m.apply = [A, b](const std::vector<double>& x) {
    std::vector<double> y = mat_apply(A, x);
    for (size_t i = 0; i < b.size(); ++i) y[i] += b[i];
    return y;
  };
  m.jacobian_det = [det](const std::vector<double>&) { return det; };
  return m;
}

C1TransportResult transport_c1(const FrameBounds& base, const C1Map& T, const Region& U,
                               double probe_step) {
  C1TransportResult out;
  if (T.affine) {
    double det = std::abs(mat_det(T.A));
    if (det < 1e-300) fail(ErrorCode::precondition, "transport_c1: singular affine map");
    out.alpha = out.beta = 1.0 / det;
    out.exact = true;
  } else {
    BoxD bb = U.bounding_box();
    int d = U.dim();
    if (probe_step <= 0.0) {
      double diag = 0.0;
      for (int i = 0; i < d; ++i) diag += bb.width(i) * bb.width(i);
      probe_step = std::sqrt(diag) / 4096.0;
    }
    std::vector<long> steps(d);
    size_t total = 1;
    for (int i = 0; i < d; ++i) {
      steps[i] = std::max<long>(1, long(std::ceil(bb.width(i) / probe_step)));
      total *= size_t(steps[i]);
    }
    double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
    std::vector<double> x(d);
    for (size_t flat = 0; flat < total; ++flat) {
      size_t rest = flat;
      for (int i = 0; i < d; ++i) {
        long ix = long(rest % size_t(steps[i]));
        rest /= size_t(steps[i]);
        x[i] = bb.lo[i] + (ix + 0.5) * bb.width(i) / steps[i];
      }
      if (!U.contains(x)) continue;
      double inv = 1.0 / std::abs(T.jacobian_det(x));
      mn = std::min(mn, inv);
      mx = std::max(mx, inv);
    }
    out.alpha = mn;
    out.beta = mx;
  }
  if (!(out.alpha > 0.0) || !std::isfinite(out.beta))
    fail(ErrorCode::precondition, "transport_c1: |det T'|^{-1} not bounded away from 0/inf");
  out.predicted.m = out.alpha * base.m;
  out.predicted.M = out.beta * base.M;
  out.predicted.kind = FrameBounds::Kind::certified_sufficient;
  out.predicted.note = "C1 change-of-variable prediction";
  return out;
}

ProductFrame product_frame(const ExponentialSystem& s1, const FrameBounds& b1,
                           const ExponentialSystem& s2, const FrameBounds& b2) {
  std::vector<std::vector<double>> pts;
  pts.reserve(s1.points().size() * s2.points().size());
  for (const auto& p : s1.points().points())
    for (const auto& q : s2.points().points()) {
      std::vector<double> z = p;
      z.insert(z.end(), q.begin(), q.end());
      pts.push_back(std::move(z));
    }
  Region prod = Region::product(s1.region(), s2.region());
  ExponentialSystem sys(PointSet(s1.dim() + s2.dim(), std::move(pts)), prod,
                        ExponentialSystem::Normalization::raw,
                        s1.amplitude() * s2.amplitude());
  ProductFrame out{std::move(sys), FrameBounds{}};
  out.predicted.m = b1.m * b2.m;
  out.predicted.M = b1.M * b2.M;
  out.predicted.kind = FrameBounds::Kind::certified_sufficient;
  out.predicted.note = "product of frames";
  out.system.carry_bounds(out.predicted);
  return out;
}

}  // namespace wf
