#pragma once

#include <cmath>
#include <vector>

#include "wf/exponential.hpp"
#include "wf/test_function.hpp"

namespace wf::testing {

// analysis coefficients of a closed-form function against an exponential
// system, via midpoint quadrature over the region's bounding box (1-D / 2-D)
inline std::vector<cplx> exp_coeffs(const ExponentialSystem& sys, const TestFunction& f,
                                    long per_axis = 4096) {
  BoxD bb = sys.region().bounding_box();
  int d = sys.dim();
  std::vector<long> dims(d, per_axis);
  if (d == 2) dims.assign(2, std::min<long>(per_axis, 512));
  size_t total = 1;
  for (long n : dims) total *= size_t(n);
  double cell = 1.0;
  for (int i = 0; i < d; ++i) cell *= bb.width(i) / dims[i];
  std::vector<cplx> c(sys.points().size(), cplx(0.0, 0.0));
  std::vector<double> x(d);
  for (size_t flat = 0; flat < total; ++flat) {
    size_t rest = flat;
    for (int i = d - 1; i >= 0; --i) {
      long ix = long(rest % size_t(dims[i]));
      rest /= size_t(dims[i]);
      x[i] = bb.lo[i] + (ix + 0.5) * bb.width(i) / dims[i];
    }
    if (!sys.region().contains(x)) continue;
    cplx fv = f.value(x);
    if (fv == cplx(0.0, 0.0)) continue;
    for (size_t k = 0; k < c.size(); ++k)
      c[k] += fv * std::conj(sys.atom_value(k, x)) * cell;
  }
  return c;
}

inline double exp_norm2(const ExponentialSystem& sys, const TestFunction& f,
                        long per_axis = 4096) {
  BoxD bb = sys.region().bounding_box();
  int d = sys.dim();
  std::vector<long> dims(d, per_axis);
  if (d == 2) dims.assign(2, std::min<long>(per_axis, 512));
  size_t total = 1;
  for (long n : dims) total *= size_t(n);
  double cell = 1.0;
  for (int i = 0; i < d; ++i) cell *= bb.width(i) / dims[i];
  double s = 0.0;
  std::vector<double> x(d);
  for (size_t flat = 0; flat < total; ++flat) {
    size_t rest = flat;
    for (int i = d - 1; i >= 0; --i) {
      long ix = long(rest % size_t(dims[i]));
      rest /= size_t(dims[i]);
      x[i] = bb.lo[i] + (ix + 0.5) * bb.width(i) / dims[i];
    }
    if (!sys.region().contains(x)) continue;
    s += std::norm(f.value(x)) * cell;
  }
  return s;
}

inline double exp_ratio(const ExponentialSystem& sys, const TestFunction& f,
                        long per_axis = 4096) {
  auto c = exp_coeffs(sys, f, per_axis);
  double num = 0.0;
  for (const auto& z : c) num += std::norm(z);
  return num / exp_norm2(sys, f, per_axis);
}

// bump ensemble strictly inside a 1-D interval with generous ramps
inline std::vector<TestFunction> interval_ensemble(double lo, double hi, int count,
                                                   uint64_t seed, double margin_frac = 0.15,
                                                   double mod_max = 6.0) {
  Rng rng(seed);
  std::vector<TestFunction> out;
  double w = hi - lo;
  for (int i = 0; i < count; ++i) {
    TestFunction::Term t;
    double margin = w * margin_frac;
    double clo = lo + margin + rng.uniform(0.0, w * 0.2);
    double chi = hi - margin - rng.uniform(0.0, w * 0.2);
    t.core.lo = {clo};
    t.core.hi = {std::max(chi, clo + 0.05 * w)};
    t.margins = {margin};
    t.modulation = {rng.uniform(-mod_max, mod_max)};
    t.amp = rng.complex_normal();
    out.emplace_back(1, std::vector<TestFunction::Term>{t});
  }
  return out;
}

}  // namespace wf::testing
