#include "wf/window.hpp"

#include <algorithm>
#include <cmath>

namespace wf {

double bspline_eval(int degree, double t) {
  if (degree < 0) fail(ErrorCode::domain, "bspline_eval: negative degree");
  if (t < 0.0 || t > degree + 1.0) return 0.0;
  // de Boor triangle over integer shifts
  std::vector<double> b(degree + 1);
  for (int i = 0; i <= degree; ++i) {
    double u = t - i;
    b[i] = (u >= 0.0 && u < 1.0) ? 1.0 : 0.0;
  }
  if (degree == 0) return b[0];
  for (int m = 1; m <= degree; ++m) {
    for (int i = 0; i + m <= degree; ++i) {
      double u = t - i;
      b[i] = (u / m) * b[i] + ((m + 1.0 - u) / m) * b[i + 1];
    }
  }
  return b[0];
}

double smoothstep(int r, double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double t2 = t * t;
  switch (std::clamp(r, 0, 5)) {
    case 0: return t;
    case 1: return t2 * (3.0 - 2.0 * t);
    case 2: return t2 * t * (10.0 + t * (-15.0 + 6.0 * t));
    case 3: return t2 * t2 * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
    case 4: return t2 * t2 * t * (126.0 + t * (-420.0 + t * (540.0 + t * (-315.0 + 70.0 * t))));
    default:
      return t2 * t2 * t2 *
             (462.0 + t * (-1980.0 + t * (3465.0 + t * (-3080.0 + t * (1386.0 - 252.0 * t)))));
  }
}

namespace {

// up-down plateau: 0 below lo-m, ramps to 1 at lo, 1 until hi, back to 0 at
// hi+m. Zero margin degrades to a sharp cut.
double plateau(int r, double x, double lo, double hi, double m_lo, double m_hi) {
  if (x < lo) {
    if (m_lo <= 0.0) return x >= lo ? 1.0 : 0.0;
    return smoothstep(r, (x - (lo - m_lo)) / m_lo);
  }
  if (x > hi) {
    if (m_hi <= 0.0) return x <= hi ? 1.0 : 0.0;
    return smoothstep(r, ((hi + m_hi) - x) / m_hi);
  }
  return 1.0;
}

}  // namespace

struct Window::Node {
  enum class Kind {
    indicator, bspline1d, radial_bspline, tensor, bump_box, bump_sector,
    bump_spiral, bump_box_ring, mirror, affine, scaled, conjugated
  } kind;
  int dim = 0;
  Region support = Region::interval(0.0, 1.0);

  // bspline1d
  int degree = 0;
  double scale = 1.0, shift = 0.0;
  cplx amp{1.0, 0.0};
  // bumps
  BoxD core;
  BoxD inner_core;
  std::vector<double> margins;
  int smooth = 2;
  Region::SectorParams sector{};
  Region::SpiralParams spiral{};
  double tau_margin = 0.0, t_margin = 0.0;
  // composite
  std::vector<Window> children;
  Mat M;
  std::vector<double> offset;
};

Window Window::indicator(Region support) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::indicator;
  n->dim = support.dim();
  n->support = std::move(support);
  return Window(n);
}

Window Window::bspline_1d(int degree, double scale, double shift, cplx amp) {
  if (degree < 0 || !(scale > 0.0)) fail(ErrorCode::domain, "bspline_1d: bad parameters");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::bspline1d;
  n->dim = 1;
  n->degree = degree;
  n->scale = scale;
  n->shift = shift;
  n->amp = amp;
  n->support = Region::interval(shift, shift + (degree + 1.0) / scale);
  return Window(n);
}

Window Window::radial_bspline(int degree, int dim) {
  if (degree < 1 || dim < 1) fail(ErrorCode::domain, "radial_bspline: bad parameters");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::radial_bspline;
  n->dim = dim;
  n->degree = degree;
  // support: |x|^2 in [1/4, 5/4]
  if (dim == 2) {
    n->support = Region::annulus(0.5, std::sqrt(1.25));
  } else {
    double r = std::sqrt(1.25);
    n->support = Region::box(std::vector<double>(dim, -r), std::vector<double>(dim, r));
  }
  return Window(n);
}

Window Window::tensor(std::vector<Window> factors_1d) {
  if (factors_1d.empty()) fail(ErrorCode::domain, "tensor: no factors");
  std::vector<double> lo, hi;
  for (const auto& f : factors_1d) {
    if (f.dim() != 1) fail(ErrorCode::domain, "tensor: factors must be 1-D");
    BoxD bb = f.support().bounding_box();
    lo.push_back(bb.lo[0]);
    hi.push_back(bb.hi[0]);
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::tensor;
  n->dim = int(factors_1d.size());
  n->children = std::move(factors_1d);
  n->support = Region::box(std::move(lo), std::move(hi));
  return Window(n);
}

Window Window::bump_box(BoxD core, std::vector<double> margins, int smoothness) {
  if (core.dim() == 0 || int(margins.size()) != core.dim())
    fail(ErrorCode::domain, "bump_box: bad parameters");
  std::vector<double> lo = core.lo, hi = core.hi;
  for (int i = 0; i < core.dim(); ++i) {
    lo[i] -= margins[i];
    hi[i] += margins[i];
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::bump_box;
  n->dim = core.dim();
  n->core = std::move(core);
  n->margins = std::move(margins);
  n->smooth = smoothness;
  n->support = Region::box(std::move(lo), std::move(hi));
  return Window(n);
}

Window Window::bump_sector(double r0, double r1, double theta0, double theta1,
                           double radial_margin, double angular_margin, int smoothness) {
  if (!(r0 - radial_margin >= 0.0)) fail(ErrorCode::domain, "bump_sector: margin crosses 0");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::bump_sector;
  n->dim = 2;
  n->sector = Region::SectorParams{r0, r1, theta0, theta1};
  n->margins = {radial_margin, angular_margin};
  n->smooth = smoothness;
  double span = (theta1 - theta0) + 2.0 * angular_margin;
  if (span >= TWO_PI)
    n->support = Region::annulus(r0 - radial_margin, r1 + radial_margin);
  else
    n->support = Region::annulus_sector(r0 - radial_margin, r1 + radial_margin,
                                        theta0 - angular_margin, theta1 + angular_margin);
  return Window(n);
}

Window Window::bump_spiral(double a, double b, double l0, double l1, double t0, double t1,
                           double tau_margin, double t_margin, int smoothness) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::bump_spiral;
  n->dim = 2;
  n->spiral = Region::SpiralParams{a, b, l0, l1, t0, t1};
  n->tau_margin = tau_margin;
  n->t_margin = t_margin;
  n->smooth = smoothness;
  double fat = std::pow(a, tau_margin);
  n->support = Region::spiral_sector(a, b, l0 / fat, l1 * fat, t0 - t_margin, t1 + t_margin);
  return Window(n);
}

Window Window::bump_box_ring(BoxD outer_core, double outer_margin, BoxD inner_core,
                             double inner_margin, int smoothness) {
  if (outer_core.dim() != inner_core.dim())
    fail(ErrorCode::domain, "bump_box_ring: dimension mismatch");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::bump_box_ring;
  n->dim = outer_core.dim();
  n->core = outer_core;
  n->margins = {outer_margin, inner_margin};
  n->smooth = smoothness;
  std::vector<double> lo = outer_core.lo, hi = outer_core.hi;
  for (int i = 0; i < n->dim; ++i) {
    lo[i] -= outer_margin;
    hi[i] += outer_margin;
  }
  n->inner_core = inner_core;
  // the hole ramps live inside inner_core; h vanishes only on the shrunk box
  std::vector<double> ilo = inner_core.lo, ihi = inner_core.hi;
  for (int i = 0; i < n->dim; ++i) {
    ilo[i] += inner_margin;
    ihi[i] -= inner_margin;
    if (!(ilo[i] < ihi[i])) fail(ErrorCode::domain, "bump_box_ring: inner margin too large");
  }
  n->support = Region::difference(Region::box(lo, hi), Region::box(ilo, ihi), true);
  return Window(n);
}

Window Window::mirror(Window base) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::mirror;
  n->dim = base.dim();
  n->support = Region::with_negation(base.support());
  n->children.push_back(std::move(base));
  return Window(n);
}

Window Window::compose_affine(Window base, const Mat& M, std::vector<double> shift) {
  if (M.rows != base.dim() || int(shift.size()) != base.dim())
    fail(ErrorCode::domain, "compose_affine: shape mismatch");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::affine;
  n->dim = base.dim();
  n->M = M;
  n->offset = shift;
  // supp h(Mx + c) = M^{-1}(supp h - c)
  Mat Minv = mat_inverse(M);
  std::vector<double> moved(base.dim());
  std::vector<double> neg(shift.size());
  for (size_t i = 0; i < shift.size(); ++i) neg[i] = -shift[i];
  n->support = Region::affine_image(Minv, mat_apply(Minv, neg), base.support());
  n->children.push_back(std::move(base));
  return Window(n);
}

Window Window::scaled(Window base, cplx amp) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::scaled;
  n->dim = base.dim();
  n->amp = amp;
  n->support = base.support();
  n->children.push_back(std::move(base));
  return Window(n);
}

Window Window::conjugated(Window base) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::conjugated;
  n->dim = base.dim();
  n->support = base.support();
  n->children.push_back(std::move(base));
  return Window(n);
}

int Window::dim() const { return node_->dim; }
const Region& Window::support() const { return node_->support; }

cplx Window::value(const std::vector<double>& x) const {
  const Node& n = *node_;
  if (int(x.size()) != n.dim) fail(ErrorCode::domain, "window value: dimension mismatch");
  switch (n.kind) {
    case Node::Kind::indicator:
      return n.support.contains(x) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
    case Node::Kind::bspline1d:
      return n.amp * bspline_eval(n.degree, n.scale * (x[0] - n.shift));
    case Node::Kind::radial_bspline: {
      double r2 = 0.0;
      for (double c : x) r2 += c * c;
      return cplx(n.degree * bspline_eval(n.degree - 1, n.degree * (r2 - 0.25)), 0.0);
    }
    case Node::Kind::tensor: {
      cplx v(1.0, 0.0);
      for (int i = 0; i < n.dim; ++i) {
        v *= n.children[i].value({x[i]});
        if (v == cplx(0.0, 0.0)) return v;
      }
      return v;
    }
    case Node::Kind::bump_box: {
      double v = 1.0;
      for (int i = 0; i < n.dim; ++i) {
        v *= plateau(n.smooth, x[i], n.core.lo[i], n.core.hi[i], n.margins[i], n.margins[i]);
        if (v == 0.0) return cplx(0.0, 0.0);
      }
      return cplx(v, 0.0);
    }
    case Node::Kind::bump_sector: {
      double r = std::hypot(x[0], x[1]);
      double vr = plateau(n.smooth, r, n.sector.r0, n.sector.r1, n.margins[0], n.margins[0]);
      if (vr == 0.0) return cplx(0.0, 0.0);
      double span = n.sector.theta1 - n.sector.theta0;
      if (span + 2.0 * n.margins[1] >= TWO_PI) return cplx(vr, 0.0);
      if (r == 0.0) return cplx(0.0, 0.0);
      double t = std::atan2(x[1], x[0]) - n.sector.theta0;
      t = std::fmod(t, TWO_PI);
      if (t < 0) t += TWO_PI;
      // bring into [-pi, span + pi) so both margins are visible
      if (t > span + PI) t -= TWO_PI;
      double va = plateau(n.smooth, t, 0.0, span, n.margins[1], n.margins[1]);
      return cplx(vr * va, 0.0);
    }
    case Node::Kind::bump_spiral: {
      double r = std::hypot(x[0], x[1]);
      if (r <= 0.0) return cplx(0.0, 0.0);
      const auto& s = n.spiral;
      double la = std::log(s.a);
      double theta = std::atan2(x[1], x[0]);
      double tau_lo = std::log(s.l0) / la, tau_hi = std::log(s.l1) / la;
      double kmin = std::ceil(((s.t0 - n.t_margin) * s.b - theta) / TWO_PI - 1e-12);
      double kmax = std::floor(((s.t1 + n.t_margin) * s.b - theta) / TWO_PI + 1e-12);
      double v = 0.0;
      for (double k = kmin; k <= kmax; k += 1.0) {
        double t = (theta + TWO_PI * k) / s.b;
        double tau = std::log(r) / la - t;  // log_a lambda for this branch
        double vt = plateau(n.smooth, t, s.t0, s.t1, n.t_margin, n.t_margin);
        double vtau = plateau(n.smooth, tau, tau_lo, tau_hi, n.tau_margin, n.tau_margin);
        v += vt * vtau;
      }
      return cplx(v, 0.0);
    }
    case Node::Kind::bump_box_ring: {
      double outer = 1.0;
      for (int i = 0; i < n.dim && outer != 0.0; ++i)
        outer *= plateau(n.smooth, x[i], n.core.lo[i], n.core.hi[i], n.margins[0], n.margins[0]);
      if (outer == 0.0) return cplx(0.0, 0.0);
      double hole = 1.0;
      for (int i = 0; i < n.dim && hole != 0.0; ++i)
        hole *= plateau(n.smooth, x[i], n.inner_core.lo[i] + n.margins[1],
                        n.inner_core.hi[i] - n.margins[1], n.margins[1], n.margins[1]);
      return cplx(outer * (1.0 - hole), 0.0);
    }
    case Node::Kind::mirror: {
      std::vector<double> nx(x.size());
      for (size_t i = 0; i < x.size(); ++i) nx[i] = -x[i];
      return n.children[0].value(x) + n.children[0].value(nx);
    }
    case Node::Kind::affine: {
      std::vector<double> y = mat_apply(n.M, x);
      for (int i = 0; i < n.dim; ++i) y[i] += n.offset[i];
      return n.children[0].value(y);
    }
    case Node::Kind::scaled:
      return n.amp * n.children[0].value(x);
    case Node::Kind::conjugated:
      return std::conj(n.children[0].value(x));
  }
  return cplx(0.0, 0.0);
}

double Window::abs2(const std::vector<double>& x) const {
  cplx v = value(x);
  return std::norm(v);
}

WindowInfo WindowInfo::of(const Window& w) {
  const auto& n = *w.node_;
  WindowInfo out;
  using K = Window::Node::Kind;
  switch (n.kind) {
    case K::indicator: out.kind = "indicator"; break;
    case K::bspline1d: out.kind = "bspline_1d"; break;
    case K::radial_bspline: out.kind = "radial_bspline"; break;
    case K::tensor: out.kind = "tensor"; break;
    case K::bump_box: out.kind = "bump_box"; break;
    case K::bump_sector: out.kind = "bump_sector"; break;
    case K::bump_spiral: out.kind = "bump_spiral"; break;
    case K::bump_box_ring: out.kind = "bump_box_ring"; break;
    case K::mirror: out.kind = "mirror"; break;
    case K::affine: out.kind = "affine_arg"; break;
    case K::scaled: out.kind = "scaled"; break;
    case K::conjugated: out.kind = "conjugated"; break;
  }
  out.degree = n.degree;
  out.scale = n.scale;
  out.shift = n.shift;
  out.amp = n.amp;
  out.core = n.core;
  out.inner_core = n.inner_core;
  out.margins = n.margins;
  out.smooth = n.smooth;
  out.sector = n.sector;
  out.spiral = n.spiral;
  out.tau_margin = n.tau_margin;
  out.t_margin = n.t_margin;
  out.M = n.M;
  out.offset = n.offset;
  out.children = n.children;
  out.region = n.support;
  return out;
}

}  // namespace wf
