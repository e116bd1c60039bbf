#pragma once

#include <vector>

#include "wf/linalg.hpp"
#include "wf/region.hpp"

namespace wf {

// true iff every eigenvalue modulus exceeds 1 + tol; borderline matrices are
// rejected because iterated dilates then fail to expand numerically.
bool is_expansive(const Mat& A, double tol = 1e-10);

// Finite family of regions, either explicit or generated as A^j Q over an
// index window.
class Covering {
public:
  static Covering explicit_list(std::vector<Region> members);
  static Covering dilated(const Mat& A, const Region& base, int j_min, int j_max);

  int dim() const;
  size_t size() const { return members_.size(); }
  const Region& member(size_t i) const { return members_[i]; }
  int label(size_t i) const { return labels_[i]; }

  size_t multiplicity(const std::vector<double>& x) const;

private:
  std::vector<Region> members_;
  std::vector<int> labels_;
};

// max over a probe grid (midpoint cells of the probe's bounding box,
// restricted to the probe region) of the membership count. Boundary points
// count as members.
int covering_index(const Covering& C, const Region& probe, double probe_step);

// Same statistic over an explicit list of probe points.
struct CoverStats {
  int max_multiplicity = 0;
  int min_multiplicity = 0;
  std::vector<double> witness_uncovered;  // empty when min > 0
};
CoverStats covering_stats(const Covering& C, const std::vector<std::vector<double>>& probes);

}  // namespace wf
