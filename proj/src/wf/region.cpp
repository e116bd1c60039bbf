#include "wf/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wf/covering.hpp"

namespace wf {

struct Region::Node {
  Kind kind;
  int dim = 0;

  BoxD box;
  SectorParams sector{};
  SpiralParams spiral{};

  Mat M, Minv;
  std::vector<double> offset;
  std::vector<Region> parts;     // union parts, affine/difference operands
  bool nested = false;           // difference: inner known to sit inside outer
};

namespace {

double wrap_angle(double t) {
  double w = std::fmod(t, TWO_PI);
  if (w < 0) w += TWO_PI;
  return w;
}

double segment_distance(double px, double py, double ax, double ay, double bx, double by) {
  double vx = bx - ax, vy = by - ay;
  double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((px - ax) * vx + (py - ay) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  double dx = px - (ax + t * vx), dy = py - (ay + t * vy);
  return std::hypot(dx, dy);
}

}  // namespace

Region Region::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.empty() || lo.size() != hi.size()) fail(ErrorCode::domain, "region box: bad extents");
  for (size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] <= hi[i])) fail(ErrorCode::domain, "region box: lo > hi");
  auto n = std::make_shared<Node>();
  n->kind = Kind::box;
  n->dim = int(lo.size());
  n->box = BoxD{std::move(lo), std::move(hi)};
  return Region(n);
}

Region Region::interval(double lo, double hi) { return box({lo}, {hi}); }

Region Region::annulus_sector(double r0, double r1, double theta0, double theta1) {
  if (!(0.0 <= r0 && r0 <= r1)) fail(ErrorCode::domain, "annulus_sector: bad radii");
  if (!(theta0 <= theta1 && theta1 - theta0 <= TWO_PI + 1e-12))
    fail(ErrorCode::domain, "annulus_sector: bad angles");
  auto n = std::make_shared<Node>();
  n->kind = Kind::annulus_sector;
  n->dim = 2;
  n->sector = SectorParams{r0, r1, theta0, theta1};
  return Region(n);
}

Region Region::spiral_sector(double a, double b, double l0, double l1, double t0, double t1) {
  if (!(a > 1.0) || !(b > 0.0) || !(0.0 < l0 && l0 <= l1) || !(t0 <= t1))
    fail(ErrorCode::domain, "spiral_sector: bad parameters");
  auto n = std::make_shared<Node>();
  n->kind = Kind::spiral_sector;
  n->dim = 2;
  n->spiral = SpiralParams{a, b, l0, l1, t0, t1};
  return Region(n);
}

Region Region::affine_image(const Mat& M, std::vector<double> offset, Region base) {
  if (M.rows != M.cols || M.rows != base.dim() || int(offset.size()) != M.rows)
    fail(ErrorCode::domain, "affine_image: shape mismatch");
  auto n = std::make_shared<Node>();
  n->kind = Kind::affine;
  n->dim = M.rows;
  n->M = M;
  n->Minv = mat_inverse(M);
  n->offset = std::move(offset);
  n->parts.push_back(std::move(base));
  return Region(n);
}

Region Region::linear_image(const Mat& M, Region base) {
  return affine_image(M, std::vector<double>(M.rows, 0.0), std::move(base));
}

Region Region::set_union(std::vector<Region> parts) {
  if (parts.empty()) fail(ErrorCode::domain, "set_union: empty");
  int d = parts.front().dim();
  for (const auto& p : parts)
    if (p.dim() != d) fail(ErrorCode::domain, "set_union: mixed dimensions");
  auto n = std::make_shared<Node>();
  n->kind = Kind::set_union;
  n->dim = d;
  n->parts = std::move(parts);
  return Region(n);
}

Region Region::with_negation(const Region& base) {
  return set_union({base, linear_image(Mat::scalar(base.dim(), -1.0), base)});
}

Region Region::difference(Region outer, Region inner, bool nested) {
  if (outer.dim() != inner.dim()) fail(ErrorCode::domain, "difference: mixed dimensions");
  auto n = std::make_shared<Node>();
  n->kind = Kind::difference;
  n->dim = outer.dim();
  n->nested = nested;
  n->parts.push_back(std::move(outer));
  n->parts.push_back(std::move(inner));
  return Region(n);
}

Region Region::product(Region a, Region b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::product;
  n->dim = a.dim() + b.dim();
  n->parts.push_back(std::move(a));
  n->parts.push_back(std::move(b));
  return Region(n);
}

int Region::dim() const { return node_->dim; }
Region::Kind Region::kind() const { return node_->kind; }
const std::vector<Region>& Region::parts() const { return node_->parts; }
const Region& Region::base() const { return node_->parts.at(0); }
const Region& Region::inner() const { return node_->parts.at(1); }
bool Region::difference_nested() const { return node_->nested; }
const Mat& Region::matrix() const { return node_->M; }
const std::vector<double>& Region::offset() const { return node_->offset; }
const BoxD& Region::box_params() const { return node_->box; }
const Region::SectorParams& Region::sector_params() const { return node_->sector; }
const Region::SpiralParams& Region::spiral_params() const { return node_->spiral; }
const Region& Region::product_first() const { return node_->parts.at(0); }
const Region& Region::product_second() const { return node_->parts.at(1); }

bool Region::contains(const std::vector<double>& x) const {
  if (int(x.size()) != dim()) fail(ErrorCode::domain, "contains: dimension mismatch");
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::box:
      for (int i = 0; i < n.dim; ++i)
        if (x[i] < n.box.lo[i] || x[i] > n.box.hi[i]) return false;
      return true;
    case Kind::annulus_sector: {
      double r = std::hypot(x[0], x[1]);
      if (r < n.sector.r0 || r > n.sector.r1) return false;
      double span = n.sector.theta1 - n.sector.theta0;
      if (span >= TWO_PI - 1e-15) return true;
      if (r == 0.0) return n.sector.r0 == 0.0;
      double t = wrap_angle(std::atan2(x[1], x[0]) - n.sector.theta0);
      return t <= span + 1e-15;
    }
    case Kind::spiral_sector: {
      double r = std::hypot(x[0], x[1]);
      if (r <= 0.0) return false;
      const auto& s = n.spiral;
      double theta = std::atan2(x[1], x[0]);
      double la = std::log(s.a);
      // branches t = (theta + 2 pi k)/b inside [t0, t1]
      double kmin = std::ceil((s.t0 * s.b - theta) / TWO_PI - 1e-12);
      double kmax = std::floor((s.t1 * s.b - theta) / TWO_PI + 1e-12);
      for (double k = kmin; k <= kmax; k += 1.0) {
        double t = (theta + TWO_PI * k) / s.b;
        double lambda = r * std::exp(-t * la);
        if (lambda >= s.l0 - 1e-12 && lambda <= s.l1 + 1e-12) return true;
      }
      return false;
    }
    case Kind::affine: {
      std::vector<double> y(n.dim);
      for (int i = 0; i < n.dim; ++i) y[i] = x[i] - n.offset[i];
      return n.parts[0].contains(mat_apply(n.Minv, y));
    }
    case Kind::set_union:
      for (const auto& p : n.parts)
        if (p.contains(x)) return true;
      return false;
    case Kind::difference:
      return n.parts[0].contains(x) && !n.parts[1].contains(x);
    case Kind::product: {
      int d1 = n.parts[0].dim();
      std::vector<double> x1(x.begin(), x.begin() + d1);
      std::vector<double> x2(x.begin() + d1, x.end());
      return n.parts[0].contains(x1) && n.parts[1].contains(x2);
    }
  }
  return false;
}

BoxD Region::bounding_box() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::box:
      return n.box;
    case Kind::annulus_sector: {
      double r = n.sector.r1;
      return BoxD{{-r, -r}, {r, r}};
    }
    case Kind::spiral_sector: {
      double r = n.spiral.l1 * std::pow(n.spiral.a, std::max(n.spiral.t0, n.spiral.t1));
      return BoxD{{-r, -r}, {r, r}};
    }
    case Kind::affine: {
      BoxD bb = n.parts[0].bounding_box();
      int d = n.dim;
      BoxD out{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
      bool first = true;
      for (int corner = 0; corner < (1 << d); ++corner) {
        std::vector<double> c(d);
        for (int i = 0; i < d; ++i) c[i] = (corner >> i) & 1 ? bb.hi[i] : bb.lo[i];
        std::vector<double> y = mat_apply(n.M, c);
        for (int i = 0; i < d; ++i) y[i] += n.offset[i];
        for (int i = 0; i < d; ++i) {
          if (first || y[i] < out.lo[i]) out.lo[i] = y[i];
          if (first || y[i] > out.hi[i]) out.hi[i] = y[i];
        }
        first = false;
      }
      return out;
    }
    case Kind::set_union: {
      BoxD out = n.parts[0].bounding_box();
      for (size_t p = 1; p < n.parts.size(); ++p) {
        BoxD bb = n.parts[p].bounding_box();
        for (int i = 0; i < n.dim; ++i) {
          out.lo[i] = std::min(out.lo[i], bb.lo[i]);
          out.hi[i] = std::max(out.hi[i], bb.hi[i]);
        }
      }
      return out;
    }
    case Kind::difference:
      return n.parts[0].bounding_box();
    case Kind::product: {
      BoxD b1 = n.parts[0].bounding_box();
      BoxD b2 = n.parts[1].bounding_box();
      BoxD out = b1;
      out.lo.insert(out.lo.end(), b2.lo.begin(), b2.lo.end());
      out.hi.insert(out.hi.end(), b2.hi.begin(), b2.hi.end());
      return out;
    }
  }
  fail(ErrorCode::domain, "bounding_box: unknown kind");
}

double Region::measure() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::box:
      return n.box.volume();
    case Kind::annulus_sector: {
      const auto& s = n.sector;
      return 0.5 * (s.theta1 - s.theta0) * (s.r1 * s.r1 - s.r0 * s.r0);
    }
    case Kind::spiral_sector: {
      const auto& s = n.spiral;
      double la = std::log(s.a);
      double lam = 0.5 * (s.l1 * s.l1 - s.l0 * s.l0);
      double bet = (std::exp(2.0 * s.t1 * la) - std::exp(2.0 * s.t0 * la)) / (2.0 * la);
      return s.b * lam * bet;
    }
    case Kind::affine:
      return std::abs(mat_det(n.M)) * n.parts[0].measure();
    case Kind::set_union: {
      double m = 0.0;
      for (const auto& p : n.parts) m += p.measure();
      return m;
    }
    case Kind::difference: {
      if (n.nested) return n.parts[0].measure() - n.parts[1].measure();
      // Monte-Carlo fallback for non-nested differences; fixed seed, sample
      // count documented in the README.
      const size_t samples = 400000;
      Rng rng(0x5EEDull);
      BoxD bb = n.parts[0].bounding_box();
      size_t hit = 0;
      std::vector<double> x(n.dim);
      for (size_t s = 0; s < samples; ++s) {
        for (int i = 0; i < n.dim; ++i) x[i] = rng.uniform(bb.lo[i], bb.hi[i]);
        if (contains(x)) ++hit;
      }
      return bb.volume() * double(hit) / double(samples);
    }
    case Kind::product:
      return n.parts[0].measure() * n.parts[1].measure();
  }
  fail(ErrorCode::domain, "measure: unknown kind");
}

std::vector<std::vector<double>> Region::boundary_samples(int per_edge) const {
  const Node& n = *node_;
  std::vector<std::vector<double>> out;
  switch (n.kind) {
    case Kind::box: {
      if (n.dim == 1) {
        out.push_back({n.box.lo[0]});
        out.push_back({n.box.hi[0]});
        return out;
      }
      for (int axis = 0; axis < n.dim; ++axis) {
        for (int side = 0; side < 2; ++side) {
          for (int s = 0; s <= per_edge; ++s) {
            if (n.dim == 2) {
              int other = 1 - axis;
              std::vector<double> x(2);
              x[axis] = side ? n.box.hi[axis] : n.box.lo[axis];
              x[other] = n.box.lo[other] + n.box.width(other) * s / per_edge;
              out.push_back(x);
            } else {
              for (int t = 0; t <= per_edge; ++t) {
                std::vector<double> x(n.dim);
                x[axis] = side ? n.box.hi[axis] : n.box.lo[axis];
                int o1 = (axis + 1) % n.dim, o2 = (axis + 2) % n.dim;
                x[o1] = n.box.lo[o1] + n.box.width(o1) * s / per_edge;
                x[o2] = n.box.lo[o2] + n.box.width(o2) * t / per_edge;
                out.push_back(x);
              }
            }
          }
        }
      }
      return out;
    }
    case Kind::annulus_sector: {
      const auto& s = n.sector;
      for (int i = 0; i <= per_edge; ++i) {
        double t = s.theta0 + (s.theta1 - s.theta0) * i / per_edge;
        out.push_back({s.r0 * std::cos(t), s.r0 * std::sin(t)});
        out.push_back({s.r1 * std::cos(t), s.r1 * std::sin(t)});
      }
      if (s.theta1 - s.theta0 < TWO_PI - 1e-15) {
        for (int i = 0; i <= per_edge; ++i) {
          double r = s.r0 + (s.r1 - s.r0) * i / per_edge;
          out.push_back({r * std::cos(s.theta0), r * std::sin(s.theta0)});
          out.push_back({r * std::cos(s.theta1), r * std::sin(s.theta1)});
        }
      }
      return out;
    }
    case Kind::spiral_sector: {
      const auto& s = n.spiral;
      auto curve = [&](double lambda, double t) {
        double r = lambda * std::pow(s.a, t);
        return std::vector<double>{r * std::cos(s.b * t), r * std::sin(s.b * t)};
      };
      for (int i = 0; i <= per_edge; ++i) {
        double t = s.t0 + (s.t1 - s.t0) * i / per_edge;
        out.push_back(curve(s.l0, t));
        out.push_back(curve(s.l1, t));
        double lambda = s.l0 + (s.l1 - s.l0) * i / per_edge;
        out.push_back(curve(lambda, s.t0));
        out.push_back(curve(lambda, s.t1));
      }
      return out;
    }
    case Kind::affine: {
      auto base = n.parts[0].boundary_samples(per_edge);
      for (auto& x : base) {
        std::vector<double> y = mat_apply(n.M, x);
        for (int i = 0; i < n.dim; ++i) y[i] += n.offset[i];
        out.push_back(std::move(y));
      }
      return out;
    }
    case Kind::set_union:
    case Kind::difference: {
      for (const auto& p : n.parts) {
        auto s = p.boundary_samples(per_edge);
        out.insert(out.end(), s.begin(), s.end());
      }
      return out;
    }
    case Kind::product:
      fail(ErrorCode::domain, "boundary_samples: unsupported for product regions");
  }
  return out;
}

double Region::distance(const std::vector<double>& x) const {
  if (contains(x)) return 0.0;
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::box: {
      double s = 0.0;
      for (int i = 0; i < n.dim; ++i) {
        double d = std::max({n.box.lo[i] - x[i], x[i] - n.box.hi[i], 0.0});
        s += d * d;
      }
      return std::sqrt(s);
    }
    case Kind::annulus_sector: {
      const auto& s = n.sector;
      double r = std::hypot(x[0], x[1]);
      double span = s.theta1 - s.theta0;
      double t = wrap_angle(std::atan2(x[1], x[0]) - s.theta0);
      if (span >= TWO_PI - 1e-15 || t <= span)
        return std::max({s.r0 - r, r - s.r1, 0.0});
      double d0 = segment_distance(x[0], x[1], s.r0 * std::cos(s.theta0), s.r0 * std::sin(s.theta0),
                                   s.r1 * std::cos(s.theta0), s.r1 * std::sin(s.theta0));
      double d1 = segment_distance(x[0], x[1], s.r0 * std::cos(s.theta1), s.r0 * std::sin(s.theta1),
                                   s.r1 * std::cos(s.theta1), s.r1 * std::sin(s.theta1));
      return std::min(d0, d1);
    }
    case Kind::set_union: {
      double best = n.parts[0].distance(x);
      for (size_t p = 1; p < n.parts.size(); ++p) best = std::min(best, n.parts[p].distance(x));
      return best;
    }
    case Kind::product: {
      int d1 = n.parts[0].dim();
      std::vector<double> x1(x.begin(), x.begin() + d1);
      std::vector<double> x2(x.begin() + d1, x.end());
      double a = n.parts[0].distance(x1), b = n.parts[1].distance(x2);
      return std::hypot(a, b);
    }
    default: {
      auto samples = boundary_samples(192);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& s : samples) {
        double d2 = 0.0;
        for (int i = 0; i < n.dim; ++i) d2 += (x[i] - s[i]) * (x[i] - s[i]);
        best = std::min(best, d2);
      }
      return std::sqrt(best);
    }
  }
}

double Region::distance_origin() const {
  const Node& n = *node_;
  std::vector<double> zero(n.dim, 0.0);
  switch (n.kind) {
    case Kind::box:
    case Kind::annulus_sector:
    case Kind::product:
      return distance(zero);
    case Kind::spiral_sector:
      return n.spiral.l0 * std::pow(n.spiral.a, std::min(n.spiral.t0, n.spiral.t1));
    case Kind::set_union: {
      double best = n.parts[0].distance_origin();
      for (size_t p = 1; p < n.parts.size(); ++p)
        best = std::min(best, n.parts[p].distance_origin());
      return best;
    }
    default:
      return distance(zero);
  }
}

bool Region::contains_dilated(const std::vector<double>& x, double eps) const {
  return distance(x) <= eps;
}

Region dilation_ring(const Mat& A, const Region& V) {
  if (A.rows != V.dim()) fail(ErrorCode::domain, "dilation_ring: dimension mismatch");
  if (!is_expansive(A)) fail(ErrorCode::precondition, "dilation_ring: matrix is not expansive");
  std::vector<double> zero(V.dim(), 0.0);
  if (!V.contains(zero))
    fail(ErrorCode::precondition, "dilation_ring: 0 must lie in the interior of V");
  for (int i = 0; i < V.dim(); ++i) {
    for (double s : {-1.0, 1.0}) {
      std::vector<double> probe(V.dim(), 0.0);
      probe[i] = s * 1e-9;
      if (!V.contains(probe))
        fail(ErrorCode::precondition, "dilation_ring: 0 must lie in the interior of V");
    }
  }
  Region AV = Region::linear_image(A, V);
  // nested measure (mu(AV) - mu(V)) is exact when V is inside AV; probe a
  // coarse grid of V to decide.
  BoxD bb = V.bounding_box();
  bool nested = true;
  const int steps = 12;
  std::vector<double> x(V.dim());
  std::vector<int> idx(V.dim(), 0);
  for (;;) {
    for (int i = 0; i < V.dim(); ++i)
      x[i] = bb.lo[i] + (idx[i] + 0.5) * bb.width(i) / steps;
    if (V.contains(x) && !AV.contains(x)) { nested = false; break; }
    int axis = 0;
    while (axis < V.dim() && ++idx[axis] == steps) idx[axis++] = 0;
    if (axis == V.dim()) break;
  }
  return Region::difference(AV, V, nested);
}

}  // namespace wf
