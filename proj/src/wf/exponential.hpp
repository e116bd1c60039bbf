#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wf/linalg.hpp"
#include "wf/point_set.hpp"
#include "wf/region.hpp"

namespace wf {

struct FrameBounds {
  double m = 0.0;
  double M = 0.0;
  enum class Kind { certified_sufficient, gram_estimate, empirical } kind = Kind::gram_estimate;
  double truncation_R = 0.0;   // point-window half-width used, 0 = full/illimited
  uint64_t ensemble_seed = 0;  // empirical estimates only
  std::string note;
};

std::string to_string(FrameBounds::Kind k);

// exp integral over a region: I(delta) = \int_Q e^{-2 pi i delta . xi} d xi.
// Closed forms for boxes/affine images/unions, panelled Gauss rules for
// sectors. This is the Gram-entry kernel.
cplx region_exp_integral(const Region& Q, const std::vector<double>& delta);

// System {amp * e_{x_k} chi_Q}. e_x(xi) = exp(-i 2 pi x.xi).
class ExponentialSystem {
public:
  enum class Normalization { raw, measure_normalized };

  ExponentialSystem(PointSet points, Region region,
                    Normalization norm = Normalization::raw, double extra_amp = 1.0);

  int dim() const { return region_.dim(); }
  const PointSet& points() const { return points_; }
  const Region& region() const { return region_; }
  Normalization normalization() const { return norm_; }
  double amplitude() const { return amp_; }  // effective scalar on every atom
  double region_measure() const { return measure_; }

  cplx atom_value(size_t k, const std::vector<double>& xi) const;

  CMat gram() const;

  const std::optional<FrameBounds>& carried_bounds() const { return carried_; }
  void carry_bounds(FrameBounds b) { carried_ = std::move(b); }

private:
  PointSet points_;
  Region region_;
  Normalization norm_;
  double amp_;
  double measure_;
  std::optional<FrameBounds> carried_;
};

// (m, M) = extreme nonzero eigenvalues of the Gram matrix; the upper bound is
// valid on K_Q, the lower bound only on the span of the truncated system.
FrameBounds frame_bounds_gram(const ExponentialSystem& sys, double rel_eig_cutoff = 1e-10);

// min/max of sum_k |<f, g_k>|^2 / ||f||^2 over an ensemble drawn inside the
// span of the system (random coefficients plus the extreme Gram
// eigenvectors, so the estimate meets the Gram extremes).
FrameBounds frame_bounds_empirical_span(const ExponentialSystem& sys, int n_random,
                                        uint64_t seed);

// Same ratio over random band-limited bumps whose support stays strictly
// inside the region (2% inset per side, so boundary truncation cannot leak
// into the lower bound). Coefficients come from midpoint quadrature over the
// region at `grid_per_axis` samples; bump supports are sample-checked
// against the region and escape raises a precondition error.
FrameBounds frame_bounds_empirical_bandlimited(const ExponentialSystem& sys, int count,
                                               uint64_t seed, long grid_per_axis = 4096);

// --- sufficient-condition certificates ---------------------------------

// 1-D: estimated lower density (minus its error bar 2*max(1,D)/r) must
// exceed a; certifies the frame property for K_[-a/2, a/2].
bool check_beurling_1d(const PointSet& X, double a, double density_r = 40.0,
                       double center_step = 0.0);

// d-D ball: r * gap(X) < 1/4 certifies the frame property for K_{B_r(0)}.
bool check_beurling_ball(const PointSet& X, double r, const Region& gap_domain,
                         double probe_step = 0.0);

// Kadec 1/4: max_k |x_k - k s| <= L and L < s/4. The index alignment
// k = round(x/s) must be bijective.
bool check_kadec(const PointSet& X, double spacing, double L);

// Regular tensor grids with spacing s_i whose region fits a box of side
// 1/s_i per axis are tight with bound prod 1/s_i.
std::optional<double> tight_bound_box_fit(const std::vector<double>& spacing, const Region& Q);

// --- transports ----------------------------------------------------------

ExponentialSystem transport_translate(const ExponentialSystem& sys,
                                      const std::vector<double>& y);
// {|det A|^{-1/2} g(A^{-1} .)}: points map through A^{-T}, region through A;
// carried bounds are preserved.
ExponentialSystem transport_dilate(const ExponentialSystem& sys, const Mat& A);

struct C1Map {
  std::function<std::vector<double>(const std::vector<double>&)> apply;
  std::function<double(const std::vector<double>&)> jacobian_det;
  bool affine = false;
  Mat A;  // affine case: T(x) = A x + b
  std::vector<double> b;
};
C1Map affine_map(const Mat& A, std::vector<double> b);

struct C1TransportResult {
  double alpha = 0.0;  // inf |det T'|^{-1}
  double beta = 0.0;   // sup |det T'|^{-1}
  FrameBounds predicted;
  bool exact = false;  // closed-form (affine) extremes
};
C1TransportResult transport_c1(const FrameBounds& base, const C1Map& T, const Region& U,
                               double probe_step = 0.0);

// Tensor product system on E1 x E2 with predicted bounds (m1 m2, M1 M2).
struct ProductFrame {
  ExponentialSystem system;
  FrameBounds predicted;
};
ProductFrame product_frame(const ExponentialSystem& s1, const FrameBounds& b1,
                           const ExponentialSystem& s2, const FrameBounds& b2);

}  // namespace wf
