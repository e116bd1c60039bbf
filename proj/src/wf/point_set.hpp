#pragma once

#include <string>
#include <vector>

#include "wf/common.hpp"
#include "wf/region.hpp"

namespace wf {

// Finite list of d-dimensional sampling points (a truncation of a countable
// grid). Immutable after construction.
class PointSet {
public:
  PointSet(int dim, std::vector<std::vector<double>> points);

  static PointSet from_csv(const std::string& path);
  static PointSet lattice_1d(double spacing, double lo, double hi);

  int dim() const { return dim_; }
  size_t size() const { return points_.size(); }
  const std::vector<double>& point(size_t k) const { return points_[k]; }
  const std::vector<std::vector<double>>& points() const { return points_; }
  BoxD bounding_box() const;

  void to_csv(const std::string& path) const;

private:
  int dim_;
  std::vector<std::vector<double>> points_;
};

// min over pairs of Euclidean distances; 0 signals duplicated points
// (callers report separated=false).
double separation(const PointSet& X);

struct DensityEstimate {
  double lower = 0.0;     // min window count / (2r)^d
  double upper = 0.0;
  double r = 0.0;
  double center_step = 0.0;
  bool separated = true;  // false when duplicate points were detected
};

// Finite-r window-count densities. Window centers run over a grid of the
// given step, restricted so windows stay inside the data's bounding box.
// center_step <= 0 selects separation(X)/4.
DensityEstimate density_estimate(const PointSet& X, double r, double center_step = 0.0);

// max over a probe grid of the distance to the nearest point of X;
// approximation error is bounded by probe_step * sqrt(d) / 2.
double gap(const PointSet& X, const Region& domain, double probe_step);

}  // namespace wf
