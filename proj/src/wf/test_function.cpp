#include "wf/test_function.hpp"

#include <algorithm>
#include <cmath>

#include "wf/quadrature.hpp"
#include "wf/window.hpp"

namespace wf {

TestFunction::TestFunction(int dim, std::vector<Term> terms)
    : dim_(dim), terms_(std::move(terms)), arg_map_(Mat::identity(dim)) {
  if (dim <= 0) fail(ErrorCode::domain, "TestFunction: bad dimension");
  for (const auto& t : terms_) {
    if (int(t.modulation.size()) != dim || t.core.dim() != dim ||
        int(t.margins.size()) != dim)
      fail(ErrorCode::domain, "TestFunction: term dimension mismatch");
  }
}

namespace {

double bump1(double x, double lo, double hi, double m) {
  if (x < lo) return m > 0.0 ? smoothstep(5, (x - (lo - m)) / m) : 0.0;
  if (x > hi) return m > 0.0 ? smoothstep(5, ((hi + m) - x) / m) : 0.0;
  return 1.0;
}

}  // namespace

cplx TestFunction::value(const std::vector<double>& xi) const {
  if (int(xi.size()) != dim_) fail(ErrorCode::domain, "TestFunction: dimension mismatch");
  std::vector<double> u = has_map_ ? mat_apply(arg_map_, xi) : xi;
  cplx out(0.0, 0.0);
  for (const auto& t : terms_) {
    double env = 1.0;
    for (int i = 0; i < dim_ && env != 0.0; ++i)
      env *= bump1(u[i], t.core.lo[i], t.core.hi[i], t.margins[i]);
    if (env == 0.0) continue;
    double ph = 0.0;
    for (int i = 0; i < dim_; ++i) ph += t.modulation[i] * u[i];
    out += t.amp * env * cplx(std::cos(TWO_PI * ph), std::sin(TWO_PI * ph));
  }
  return scale_ * out;
}

TestFunction TestFunction::translated(const std::vector<double>& y) const {
  if (has_map_) fail(ErrorCode::config, "TestFunction: translate before dilation");
  std::vector<Term> moved = terms_;
  for (auto& t : moved) {
    double ph = 0.0;
    for (int i = 0; i < dim_; ++i) {
      t.core.lo[i] += y[i];
      t.core.hi[i] += y[i];
      ph += t.modulation[i] * y[i];
    }
    t.amp *= cplx(std::cos(-TWO_PI * ph), std::sin(-TWO_PI * ph));
  }
  TestFunction out(dim_, std::move(moved));
  out.scale_ = scale_;
  return out;
}

TestFunction TestFunction::dilated_arg(const Mat& A) const {
  TestFunction out(dim_, terms_);
  out.scale_ = scale_ * std::sqrt(std::abs(mat_det(A)));
  out.arg_map_ = has_map_ ? mat_mul(arg_map_, A) : A;
  out.has_map_ = true;
  return out;
}

BoxD TestFunction::support_box() const {
  if (has_map_) fail(ErrorCode::config, "TestFunction: support_box before dilation only");
  if (terms_.empty()) fail(ErrorCode::domain, "TestFunction: empty");
  BoxD bb{std::vector<double>(dim_, 0.0), std::vector<double>(dim_, 0.0)};
  bool first = true;
  for (const auto& t : terms_) {
    for (int i = 0; i < dim_; ++i) {
      double lo = t.core.lo[i] - t.margins[i];
      double hi = t.core.hi[i] + t.margins[i];
      if (first || lo < bb.lo[i]) bb.lo[i] = lo;
      if (first || hi > bb.hi[i]) bb.hi[i] = hi;
    }
    first = false;
  }
  return bb;
}

double TestFunction::norm2_quadrature() const {
  if (has_map_) fail(ErrorCode::config, "TestFunction: norm2 before dilation only");
  BoxD bb = support_box();
  double mod = 0.0;
  for (const auto& t : terms_)
    for (double m : t.modulation) mod = std::max(mod, std::abs(m));
  auto self = [&](const std::vector<double>& x) { return std::norm(value(x)); };
  if (dim_ == 1) {
    auto f = [&](double x) { return cplx(self({x}), 0.0); };
    return integrate_1d(f, bb.lo[0], bb.hi[0], (mod + 2.0) * bb.width(0) * 2.0, 8).real();
  }
  if (dim_ == 2) {
    auto f = [&](double x, double y) { return cplx(self({x, y}), 0.0); };
    return integrate_2d(f, bb.lo[0], bb.hi[0], bb.lo[1], bb.hi[1],
                        (mod + 2.0) * bb.width(0) * 2.0, (mod + 2.0) * bb.width(1) * 2.0, 8)
        .real();
  }
  fail(ErrorCode::config, "TestFunction: norm2_quadrature supports d <= 2");
}

std::vector<TestFunction> make_ensemble(const std::vector<BoxD>& safe_boxes, int count,
                                        uint64_t seed, double mod_max) {
  if (safe_boxes.empty()) fail(ErrorCode::domain, "make_ensemble: no safe boxes");
  int d = safe_boxes.front().dim();
  Rng rng(seed);
  std::vector<TestFunction> out;
  out.reserve(count);
  for (int f = 0; f < count; ++f) {
    int n_terms = rng.uniform_int(1, 3);
    std::vector<TestFunction::Term> terms;
    for (int t = 0; t < n_terms; ++t) {
      const BoxD& island = safe_boxes[size_t(rng.uniform_int(0, int(safe_boxes.size()) - 1))];
      TestFunction::Term term;
      term.amp = rng.complex_normal();
      term.core.lo.resize(d);
      term.core.hi.resize(d);
      term.margins.resize(d);
      term.modulation.resize(d);
      for (int i = 0; i < d; ++i) {
        double w = island.width(i);
        // bump (core + margins) stays strictly inside the island
        double width = w * rng.uniform(0.25, 0.6);
        double margin = width * 0.35;
        double lo = island.lo[i] + rng.uniform(margin, w - width - margin);
        term.core.lo[i] = lo;
        term.core.hi[i] = lo + width - 2.0 * margin;
        term.margins[i] = margin;
        term.modulation[i] = rng.uniform(-mod_max, mod_max);
      }
      terms.push_back(std::move(term));
    }
    out.emplace_back(d, std::move(terms));
  }
  return out;
}

std::vector<TestFunction> make_scaled_ensemble(const SafeSpec& spec, int dim, int count,
                                               uint64_t seed) {
  if (spec.kind == SafeSpec::Kind::boxes)
    fail(ErrorCode::config, "make_scaled_ensemble: box specs use make_ensemble");
  if (!(spec.r_in > 0.0 && spec.r_out > spec.r_in * 2.2))
    fail(ErrorCode::domain, "make_scaled_ensemble: band too narrow");
  Rng rng(seed);
  std::vector<TestFunction> out;
  out.reserve(count);
  double lo = std::log(spec.r_in * 1.6), hi = std::log(spec.r_out / 1.6);
  for (int f = 0; f < count; ++f) {
    int n_terms = rng.uniform_int(1, 3);
    std::vector<TestFunction::Term> terms;
    for (int t = 0; t < n_terms; ++t) {
      double r0 = std::exp(rng.uniform(lo, hi));
      TestFunction::Term term;
      term.amp = rng.complex_normal();
      term.core.lo.resize(dim);
      term.core.hi.resize(dim);
      term.margins.resize(dim);
      term.modulation.resize(dim);
      if (spec.kind == SafeSpec::Kind::mirror_band) {
        double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
        double width = r0 * rng.uniform(0.5, 0.8);
        double margin = width * 0.45;
        double c = sign * r0;
        term.core.lo[0] = c - 0.5 * width + margin;
        term.core.hi[0] = c + 0.5 * width - margin;
        term.margins[0] = margin;
        term.modulation[0] = rng.uniform(-2.5, 2.5) / r0;
      } else {
        double theta = rng.uniform(0.0, TWO_PI);
        double cx = r0 * std::cos(theta), cy = r0 * std::sin(theta);
        for (int i = 0; i < dim; ++i) {
          double half = r0 * rng.uniform(0.10, 0.18);
          double margin = half * 0.8;
          double c = i == 0 ? cx : cy;
          term.core.lo[i] = c - half + margin;
          term.core.hi[i] = c + half - margin;
          term.margins[i] = margin;
          term.modulation[i] = rng.uniform(-2.5, 2.5) / r0;
        }
      }
      terms.push_back(std::move(term));
    }
    out.emplace_back(dim, std::move(terms));
  }
  return out;
}

}  // namespace wf
