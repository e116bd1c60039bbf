#pragma once

#include <memory>
#include <vector>

#include "wf/common.hpp"
#include "wf/region.hpp"

namespace wf {

// Cardinal B-spline beta_n = chi_[0,1] convolved with itself n times;
// support [0, n+1]. Evaluated by the degree-elevation recursion.
double bspline_eval(int degree, double t);

// Polynomial unit ramp of smoothness class C^r (r in 0..5): 0 below 0,
// 1 above 1.
double smoothstep(int r, double t);

// Closed-form window h on R^d, evaluable pointwise, zero outside support().
class Window {
public:
  static Window indicator(Region support);
  // amp * beta_degree(scale * (x - shift)), 1-D
  static Window bspline_1d(int degree, double scale, double shift, cplx amp = cplx(1.0, 0.0));
  // degree * beta_{degree-1}(degree * (|x|^2 - 1/4)) on R^d
  static Window radial_bspline(int degree, int dim);
  static Window tensor(std::vector<Window> factors_1d);
  // Plateau exactly 1 on `core`, C^r ramps over the margins.
  static Window bump_box(BoxD core, std::vector<double> margins, int smoothness);
  static Window bump_sector(double r0, double r1, double theta0, double theta1,
                            double radial_margin, double angular_margin, int smoothness);
  // Margins in the spiral's (log_a lambda, t) parameterization.
  static Window bump_spiral(double a, double b, double l0, double l1, double t0, double t1,
                            double tau_margin, double t_margin, int smoothness);
  // Plateau on the box ring outer \ inner: outer ramps point outward, the
  // hole ramps live between the inner core and the hole boundary.
  static Window bump_box_ring(BoxD outer_core, double outer_margin, BoxD inner_core,
                              double inner_margin, int smoothness);
  static Window mirror(Window base);                      // h(x) + h(-x)
  static Window compose_affine(Window base, const Mat& M, std::vector<double> shift);
  static Window scaled(Window base, cplx amp);
  static Window conjugated(Window base);

  int dim() const;
  cplx value(const std::vector<double>& x) const;
  double abs2(const std::vector<double>& x) const;
  const Region& support() const;

private:
  struct Node;
  std::shared_ptr<const Node> node_;
  explicit Window(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  friend struct WindowInfo;
};

// flattened construction parameters, for serialization
struct WindowInfo {
  std::string kind;
  int degree = 0;
  double scale = 1.0, shift = 0.0;
  cplx amp{1.0, 0.0};
  BoxD core, inner_core;
  std::vector<double> margins;
  int smooth = 0;
  Region::SectorParams sector{};
  Region::SpiralParams spiral{};
  double tau_margin = 0.0, t_margin = 0.0;
  Mat M;
  std::vector<double> offset;
  std::vector<Window> children;
  Region region = Region::interval(0.0, 1.0);

  static WindowInfo of(const Window& w);
};

}  // namespace wf
