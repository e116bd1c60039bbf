#pragma once

#include <memory>
#include <vector>

#include "wf/common.hpp"
#include "wf/linalg.hpp"

namespace wf {

struct BoxD {
  std::vector<double> lo, hi;
  int dim() const { return int(lo.size()); }
  double width(int axis) const { return hi[axis] - lo[axis]; }
  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= width(i);
    return v;
  }
};

// Symbolic description of a measurable frequency-domain set. Membership is
// total on R^d and treats regions as closed (boundary points are inside,
// except for set differences which exclude the closed inner set). Unions are
// assumed essentially disjoint for measure purposes.
class Region {
public:
  enum class Kind { box, annulus_sector, spiral_sector, affine, set_union, difference, product };

  static Region box(std::vector<double> lo, std::vector<double> hi);
  static Region interval(double lo, double hi);  // 1-D box
  // radii (not squared); angles in radians, theta0 <= theta1, span <= 2*pi
  static Region annulus_sector(double r0, double r1, double theta0, double theta1);
  static Region annulus(double r0, double r1) { return annulus_sector(r0, r1, 0.0, TWO_PI); }
  // points lambda*(a^t cos(bt), a^t sin(bt)), lambda in [l0,l1], t in [t0,t1]
  static Region spiral_sector(double a, double b, double l0, double l1, double t0, double t1);
  static Region affine_image(const Mat& M, std::vector<double> offset, Region base);
  static Region linear_image(const Mat& M, Region base);
  static Region set_union(std::vector<Region> parts);
  static Region with_negation(const Region& base);  // base ∪ (-base)
  static Region difference(Region outer, Region inner, bool nested);
  static Region product(Region a, Region b);

  int dim() const;
  Kind kind() const;
  bool contains(const std::vector<double>& x) const;
  BoxD bounding_box() const;
  double measure() const;
  // Euclidean distance from x to the region (0 inside). Exact for boxes and
  // annulus sectors, boundary-sampled otherwise (resolution documented).
  double distance(const std::vector<double>& x) const;
  double distance_origin() const;
  bool contains_dilated(const std::vector<double>& x, double eps) const;

  const std::vector<Region>& parts() const;               // union members
  const Region& base() const;                             // affine / difference outer
  const Region& inner() const;                            // difference inner
  bool difference_nested() const;
  const Mat& matrix() const;                              // affine map
  const std::vector<double>& offset() const;              // affine offset

  // Structural parameters, valid for the matching kind.
  struct SpiralParams { double a, b, l0, l1, t0, t1; };
  struct SectorParams { double r0, r1, theta0, theta1; };
  const BoxD& box_params() const;
  const SectorParams& sector_params() const;
  const SpiralParams& spiral_params() const;
  const Region& product_first() const;
  const Region& product_second() const;

  std::vector<std::vector<double>> boundary_samples(int per_edge) const;

private:
  struct Node;
  std::shared_ptr<const Node> node_;
  explicit Region(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

// The set A*V \ V ("ring" swept by one dilation step). Membership excludes
// the closed inner set V. `A` must be expansive and 0 must lie in the
// interior of V; both are checked.
Region dilation_ring(const Mat& A, const Region& V);

}  // namespace wf
