#include "wf/covering.hpp"

#include <algorithm>
#include <cmath>

namespace wf {

bool is_expansive(const Mat& A, double tol) {
  if (A.rows != A.cols || A.rows == 0)
    fail(ErrorCode::domain, "is_expansive: square matrix required");
  auto mods = eigenvalue_moduli(A);
  return mods.front() > 1.0 + tol;
}

Covering Covering::explicit_list(std::vector<Region> members) {
  if (members.empty()) return Covering{};
  int d = members.front().dim();
  for (const auto& m : members)
    if (m.dim() != d) fail(ErrorCode::domain, "Covering: mixed dimensions");
  Covering c;
  for (size_t i = 0; i < members.size(); ++i) c.labels_.push_back(int(i));
  c.members_ = std::move(members);
  return c;
}

Covering Covering::dilated(const Mat& A, const Region& base, int j_min, int j_max) {
  if (j_min > j_max) fail(ErrorCode::domain, "Covering: empty index range");
  Covering c;
  for (int j = j_min; j <= j_max; ++j) {
    c.members_.push_back(Region::linear_image(mat_pow(A, j), base));
    c.labels_.push_back(j);
  }
  return c;
}

int Covering::dim() const {
  if (members_.empty()) fail(ErrorCode::domain, "Covering: empty");
  return members_.front().dim();
}

size_t Covering::multiplicity(const std::vector<double>& x) const {
  size_t n = 0;
  for (const auto& m : members_)
    if (m.contains(x)) ++n;
  return n;
}

int covering_index(const Covering& C, const Region& probe, double probe_step) {
  if (C.size() == 0) return 0;
  if (!(probe_step > 0.0)) fail(ErrorCode::domain, "covering_index: probe_step must be positive");
  if (probe.dim() != C.dim()) fail(ErrorCode::domain, "covering_index: dimension mismatch");
  int d = probe.dim();
  BoxD bb = probe.bounding_box();
  std::vector<long> steps(d);
  size_t total = 1;
  for (int i = 0; i < d; ++i) {
    steps[i] = std::max<long>(1, long(std::ceil(bb.width(i) / probe_step)) + 1);
    total *= size_t(steps[i]);
  }
  if (total > size_t(2e8))
    fail(ErrorCode::config, "covering_index: probe grid too large; increase probe_step");

  // The grid includes the box edges so shared boundaries (closed regions) are
  // seen, matching the closed-set membership convention.
  std::vector<int> best(64, 0);
  parallel_for(total, [&](size_t chunk, size_t b, size_t e) {
    int w = best[chunk];
    std::vector<double> x(d);
    for (size_t flat = b; flat < e; ++flat) {
      size_t rest = flat;
      for (int i = 0; i < d; ++i) {
        long ix = long(rest % size_t(steps[i]));
        rest /= size_t(steps[i]);
        x[i] = steps[i] == 1 ? 0.5 * (bb.lo[i] + bb.hi[i])
                             : bb.lo[i] + ix * bb.width(i) / (steps[i] - 1);
      }
      if (!probe.contains(x)) continue;
      w = std::max(w, int(C.multiplicity(x)));
    }
    best[chunk] = w;
  });
  return *std::max_element(best.begin(), best.end());
}

CoverStats covering_stats(const Covering& C, const std::vector<std::vector<double>>& probes) {
  CoverStats st;
  if (probes.empty()) return st;
  st.min_multiplicity = int(C.multiplicity(probes.front()));
  for (const auto& x : probes) {
    int m = int(C.multiplicity(x));
    st.max_multiplicity = std::max(st.max_multiplicity, m);
    if (m < st.min_multiplicity) st.min_multiplicity = m;
    if (m == 0 && st.witness_uncovered.empty()) st.witness_uncovered = x;
  }
  return st;
}

}  // namespace wf
