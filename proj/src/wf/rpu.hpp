#pragma once

#include <optional>
#include <vector>

#include "wf/window.hpp"

namespace wf {

// Riesz partition of unity candidate: a finite window family {h_j} with
// probe-grid certification of p <= sum |h_j|^2 <= P. Families are either
// explicit or generated from a base window through per-member affine
// argument maps.
class Rpu {
public:
  static Rpu explicit_list(std::vector<Window> windows, std::vector<int> labels);
  // h_j(x) = h(A^{-j} x), j in [j_min, j_max]
  static Rpu dilation_family(const Window& h, const Mat& A, int j_min, int j_max);
  // h_j(x) = h(B_j x) for given matrices (wavelet pullback form)
  static Rpu pullback_family(const Window& h, const std::vector<Mat>& B, std::vector<int> labels);
  // h_j(x) = h(x - j*step)
  static Rpu translation_family(const Window& h, const std::vector<double>& step,
                                int j_min, int j_max);
  // members scaled to h_j / sqrt(sum |h_i|^2); preserves supports exactly
  static Rpu normalized(Rpu base, std::optional<Region> declared_union = std::nullopt);
  Rpu conjugated() const;

  int dim() const;
  size_t size() const { return members_.size(); }
  int label(size_t i) const { return labels_[i]; }
  const Window& member(size_t i) const { return members_[i]; }
  cplx member_value(size_t i, const std::vector<double>& x) const;
  double member_abs2(size_t i, const std::vector<double>& x) const;
  double sum_squares(const std::vector<double>& x) const;
  bool level_set_contains(size_t i, double c, const std::vector<double>& x) const {
    return member_abs2(i, x) > c;
  }

  // associated regions (supp h_j ⊆ S_j), when declared
  void declare_regions(std::vector<Region> regions);
  bool has_regions() const { return !regions_.empty(); }
  const Region& region(size_t i) const { return regions_.at(i); }
  // samples member supports and verifies containment in the declared
  // regions; returns the offending member index and a witness point
  std::optional<std::pair<int, std::vector<double>>> find_support_violation(
      int samples_per_axis = 48) const;

  bool normalized() const { return normalized_; }
  const std::optional<Region>& declared_union() const { return declared_union_; }

private:
  std::vector<Window> members_;
  std::vector<int> labels_;
  std::vector<Region> regions_;
  bool normalized_ = false;
  std::optional<Region> declared_union_;
};

struct RpuBounds {
  double p_hat = 0.0;
  double P_hat = 0.0;
  std::vector<double> argmin, argmax;
  double probe_step = 0.0;
  size_t probe_count = 0;
  bool violated = false;  // p_hat == 0 within tolerance
};

// min/max of sum |h_j|^2 over a midpoint probe grid of `region`.
// probe_step <= 0 picks bounding-box diagonal / 2048.
RpuBounds rpu_bounds(const Rpu& H, const Region& region, double probe_step = 0.0);

struct DilationRpuResult {
  Rpu rpu;
  double predicted_p = 0.0;  // c1
  double predicted_P = 0.0;  // covering index * c2
  int covering_index = 0;
};

// The dilation-family construction: verifies (i) A expansive, (ii)
// dist(0, Q) > eps, (a) |h|^2 <= c2, (b) |h|^2 >= c1 on Q, (c) h = 0 outside
// the eps-fattening of Q, then returns {h(A^{-j} x)} with predicted bounds.
DilationRpuResult build_dilation_rpu(const Window& h, const Mat& A, const Region& Q,
                                     double eps, double c1, double c2,
                                     int j_min, int j_max);

}  // namespace wf
