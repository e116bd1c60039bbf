#include "wf/rpu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wf/covering.hpp"

namespace wf {

Rpu Rpu::explicit_list(std::vector<Window> windows, std::vector<int> labels) {
  if (windows.empty()) fail(ErrorCode::domain, "Rpu: empty family");
  if (labels.empty()) {
    for (size_t i = 0; i < windows.size(); ++i) labels.push_back(int(i));
  }
  if (labels.size() != windows.size()) fail(ErrorCode::domain, "Rpu: label count mismatch");
  int d = windows.front().dim();
  for (const auto& w : windows)
    if (w.dim() != d) fail(ErrorCode::domain, "Rpu: mixed dimensions");
  Rpu r;
  r.members_ = std::move(windows);
  r.labels_ = std::move(labels);
  return r;
}

Rpu Rpu::dilation_family(const Window& h, const Mat& A, int j_min, int j_max) {
  if (j_min > j_max) fail(ErrorCode::domain, "Rpu: empty index range");
  std::vector<Window> members;
  std::vector<int> labels;
  std::vector<Region> regions;
  for (int j = j_min; j <= j_max; ++j) {
    Mat Aminusj = mat_pow(A, -j);
    members.push_back(Window::compose_affine(h, Aminusj, std::vector<double>(h.dim(), 0.0)));
    labels.push_back(j);
    regions.push_back(Region::linear_image(mat_pow(A, j), h.support()));
  }
  Rpu r = explicit_list(std::move(members), std::move(labels));
  r.declare_regions(std::move(regions));
  return r;
}

Rpu Rpu::pullback_family(const Window& h, const std::vector<Mat>& B, std::vector<int> labels) {
  if (B.empty()) fail(ErrorCode::domain, "Rpu: empty family");
  std::vector<Window> members;
  std::vector<Region> regions;
  for (const auto& Bj : B) {
    members.push_back(Window::compose_affine(h, Bj, std::vector<double>(h.dim(), 0.0)));
    regions.push_back(Region::linear_image(mat_inverse(Bj), h.support()));
  }
  Rpu r = explicit_list(std::move(members), std::move(labels));
  r.declare_regions(std::move(regions));
  return r;
}

Rpu Rpu::translation_family(const Window& h, const std::vector<double>& step,
                            int j_min, int j_max) {
  if (j_min > j_max) fail(ErrorCode::domain, "Rpu: empty index range");
  std::vector<Window> members;
  std::vector<int> labels;
  for (int j = j_min; j <= j_max; ++j) {
    std::vector<double> shift(step.size());
    for (size_t i = 0; i < step.size(); ++i) shift[i] = -step[i] * j;
    members.push_back(Window::compose_affine(h, Mat::identity(h.dim()), shift));
    labels.push_back(j);
  }
  return explicit_list(std::move(members), std::move(labels));
}

Rpu Rpu::normalized(Rpu base, std::optional<Region> declared_union) {
  base.normalized_ = true;
  base.declared_union_ = std::move(declared_union);
  return base;
}

Rpu Rpu::conjugated() const {
  Rpu r = *this;
  for (auto& w : r.members_) w = Window::conjugated(w);
  return r;
}

int Rpu::dim() const { return members_.front().dim(); }

void Rpu::declare_regions(std::vector<Region> regions) {
  if (regions.size() != members_.size()) fail(ErrorCode::domain, "Rpu: region count mismatch");
  regions_ = std::move(regions);
}

cplx Rpu::member_value(size_t i, const std::vector<double>& x) const {
  cplx v = members_[i].value(x);
  if (!normalized_) return v;
  if (v == cplx(0.0, 0.0)) return v;  // supports preserved exactly
  double s = 0.0;
  for (const auto& m : members_) s += m.abs2(x);
  if (s < 1e-300) {
    if (declared_union_ && declared_union_->contains(x))
      fail(ErrorCode::evaluation,
           "normalized RPU: zero denominator inside declared union at " + format_point(x));
    return cplx(0.0, 0.0);
  }
  return v / std::sqrt(s);
}

double Rpu::member_abs2(size_t i, const std::vector<double>& x) const {
  return std::norm(member_value(i, x));
}

double Rpu::sum_squares(const std::vector<double>& x) const {
  double s = 0.0;
  for (const auto& m : members_) s += m.abs2(x);
  if (!normalized_) return s;
  if (s < 1e-300) {
    if (declared_union_ && declared_union_->contains(x))
      fail(ErrorCode::evaluation,
           "normalized RPU: zero denominator inside declared union at " + format_point(x));
    return 0.0;
  }
  return 1.0;
}

std::optional<std::pair<int, std::vector<double>>> Rpu::find_support_violation(
    int samples_per_axis) const {
  if (regions_.empty()) fail(ErrorCode::config, "find_support_violation: no declared regions");
  for (size_t i = 0; i < members_.size(); ++i) {
    BoxD bb = members_[i].support().bounding_box();
    int d = dim();
    std::vector<long> steps(d, samples_per_axis);
    size_t total = 1;
    for (int a = 0; a < d; ++a) total *= size_t(steps[a]);
    std::vector<double> x(d);
    for (size_t flat = 0; flat < total; ++flat) {
      size_t rest = flat;
      for (int a = 0; a < d; ++a) {
        long ix = long(rest % size_t(steps[a]));
        rest /= size_t(steps[a]);
        x[a] = bb.lo[a] + (ix + 0.5) * bb.width(a) / steps[a];
      }
      if (members_[i].abs2(x) > 1e-24 && !regions_[i].contains(x))
        return std::make_pair(int(i), x);
    }
  }
  return std::nullopt;
}

RpuBounds rpu_bounds(const Rpu& H, const Region& region, double probe_step) {
  if (region.dim() != H.dim()) fail(ErrorCode::domain, "rpu_bounds: dimension mismatch");
  BoxD bb = region.bounding_box();
  int d = region.dim();
  if (probe_step <= 0.0) {
    double diag = 0.0;
    for (int i = 0; i < d; ++i) diag += bb.width(i) * bb.width(i);
    probe_step = std::sqrt(diag) / 2048.0;
  }
  std::vector<long> steps(d);
  size_t total = 1;
  for (int i = 0; i < d; ++i) {
    steps[i] = std::max<long>(1, long(std::ceil(bb.width(i) / probe_step)));
    total *= size_t(steps[i]);
  }
  if (total > size_t(6e7))
    fail(ErrorCode::config, "rpu_bounds: probe grid too large; increase probe_step");

  struct Slot {
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    std::vector<double> argmin, argmax;
    size_t count = 0;
  };
  std::vector<Slot> slots(64);
  parallel_for(total, [&](size_t chunk, size_t b, size_t e) {
    Slot& s = slots[chunk];
    std::vector<double> x(d);
    for (size_t flat = b; flat < e; ++flat) {
      size_t rest = flat;
      for (int i = 0; i < d; ++i) {
        long ix = long(rest % size_t(steps[i]));
        rest /= size_t(steps[i]);
        x[i] = bb.lo[i] + (ix + 0.5) * bb.width(i) / steps[i];
      }
      if (!region.contains(x)) continue;
      double v = H.sum_squares(x);
      s.count++;
      if (v < s.mn) { s.mn = v; s.argmin = x; }
      if (v > s.mx) { s.mx = v; s.argmax = x; }
    }
  });

  RpuBounds out;
  out.probe_step = probe_step;
  bool first = true;
  for (const auto& s : slots) {
    if (s.count == 0) continue;
    out.probe_count += s.count;
    if (first || s.mn < out.p_hat) { out.p_hat = s.mn; out.argmin = s.argmin; }
    if (first || s.mx > out.P_hat) { out.P_hat = s.mx; out.argmax = s.argmax; }
    first = false;
  }
  if (first) fail(ErrorCode::domain, "rpu_bounds: probe region contains no grid points");
  out.violated = out.p_hat <= 1e-14;
  return out;
}

DilationRpuResult build_dilation_rpu(const Window& h, const Mat& A, const Region& Q,
                                     double eps, double c1, double c2,
                                     int j_min, int j_max) {
  if (!(c1 > 0.0) || !(c2 >= c1)) fail(ErrorCode::domain, "build_dilation_rpu: bad constants");
  if (!is_expansive(A))
    fail(ErrorCode::precondition, "build_dilation_rpu: hypothesis (i) failed: A not expansive");
  if (eps > 0.0 && !(Q.distance_origin() > eps))
    fail(ErrorCode::precondition,
         "build_dilation_rpu: hypothesis (ii) failed: dist(0, Q) <= eps");
  if (eps == 0.0 && !(Q.distance_origin() > 0.0))
    fail(ErrorCode::precondition,
         "build_dilation_rpu: hypothesis (ii) failed: 0 lies in Q");

  int d = Q.dim();
  // (a) |h|^2 <= c2 everywhere (probed on the support box)
  // (b) |h|^2 >= c1 on Q
  BoxD sb = h.support().bounding_box();
  const int S = d == 1 ? 4096 : 192;
  {
    std::vector<long> steps(d, S);
    size_t total = 1;
    for (int i = 0; i < d; ++i) total *= size_t(steps[i]);
    std::vector<double> x(d);
    for (size_t flat = 0; flat < total; ++flat) {
      size_t rest = flat;
      for (int i = 0; i < d; ++i) {
        long ix = long(rest % size_t(steps[i]));
        rest /= size_t(steps[i]);
        x[i] = sb.lo[i] + (ix + 0.5) * sb.width(i) / steps[i];
      }
      double v = h.abs2(x);
      if (v > c2 * (1.0 + 1e-9))
        fail(ErrorCode::precondition,
             "build_dilation_rpu: hypothesis (a) failed: |h|^2 > c2 at " + format_point(x));
      // (c) support containment in the eps-fattening of Q
      if (v > 1e-20 && !Q.contains_dilated(x, eps * (1.0 + 1e-6) + 1e-12))
        fail(ErrorCode::precondition,
             "build_dilation_rpu: hypothesis (c) failed: h != 0 outside Q_eps at " +
                 format_point(x));
    }
  }
  {
    BoxD qb = Q.bounding_box();
    std::vector<long> steps(d, S);
    size_t total = 1;
    for (int i = 0; i < d; ++i) total *= size_t(steps[i]);
    std::vector<double> x(d);
    for (size_t flat = 0; flat < total; ++flat) {
      size_t rest = flat;
      for (int i = 0; i < d; ++i) {
        long ix = long(rest % size_t(steps[i]));
        rest /= size_t(steps[i]);
        x[i] = qb.lo[i] + (ix + 0.5) * qb.width(i) / steps[i];
      }
      if (!Q.contains(x)) continue;
      if (h.abs2(x) < c1 * (1.0 - 1e-9))
        fail(ErrorCode::precondition,
             "build_dilation_rpu: hypothesis (b) failed: |h|^2 < c1 on Q at " + format_point(x));
    }
  }

  DilationRpuResult out{Rpu::dilation_family(h, A, j_min, j_max), 0.0, 0.0, 0};

  // Upper bound from the covering index of the fattened supports; a middle
  // band of dilates is probed to avoid the truncation edges.
  int mid_lo = j_min + (j_max - j_min) / 3;
  int mid_hi = j_max - (j_max - j_min) / 3;
  std::vector<Region> probe_parts;
  for (int j = mid_lo; j <= mid_hi; ++j)
    probe_parts.push_back(Region::linear_image(mat_pow(A, j), h.support()));
  Region probe = Region::set_union(std::move(probe_parts));
  Covering cov = Covering::dilated(A, h.support(), j_min, j_max);
  BoxD pb = probe.bounding_box();
  double diag = 0.0;
  for (int i = 0; i < d; ++i) diag += pb.width(i) * pb.width(i);
  out.covering_index = covering_index(cov, probe, std::sqrt(diag) / (d == 1 ? 4096.0 : 384.0));
  out.predicted_p = c1;
  out.predicted_P = out.covering_index * c2;
  return out;
}

}  // namespace wf
