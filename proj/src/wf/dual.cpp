#include "wf/dual.hpp"

#include <cmath>

namespace wf {

DualSystem DualSystem::build(const ExponentialSystem& sys, Method method, double rel_cutoff,
                             double cg_tol, int cg_max_iter) {
  DualSystem d;
  d.method_ = method;
  // Work with conj(G): with the G[k][l] = <g_k, g_l> convention, the
  // synthesis-side normal matrix T*T is the conjugate of G, and canonical
  // dual coefficients are conj(G)^+ c.
  d.gram_ = sys.gram();
  for (auto& z : d.gram_.a) z = std::conj(z);
  d.cg_tol_ = cg_tol;
  d.cg_max_iter_ = cg_max_iter;
  if (method == Method::canonical) {
    PinvResult p = hermitian_pinv(d.gram_, rel_cutoff);
    d.pinv_ = std::move(p.pinv);
    d.rank_ = p.rank;
    d.eig_min_ = p.eig_min_retained;
    d.eig_max_ = p.eig_max;
  } else {
    HermitianEig eig = hermitian_eig(d.gram_, false);
    d.eig_max_ = eig.values.back();
    double cutoff = d.eig_max_ * rel_cutoff;
    for (double v : eig.values)
      if (v > cutoff) {
        d.eig_min_ = v;
        break;
      }
    d.rank_ = int(std::count_if(eig.values.begin(), eig.values.end(),
                                [&](double v) { return v > cutoff; }));
    if (d.rank_ == 0)
      fail(ErrorCode::conditioning,
           "dual_exponential_frame: Gram numerically zero (max eig " +
               std::to_string(d.eig_max_) + ")");
  }
  return d;
}

std::vector<cplx> DualSystem::apply(const std::vector<cplx>& c) const {
  if (method_ == Method::canonical) return cmat_apply(pinv_, c);
  std::vector<cplx> d;
  // On effectively singular spans the residual plateaus at the size of the
  // coefficient components along the discarded directions; those synthesize
  // to numerically negligible functions, so only gross failures abort.
  double res = cg_solve(gram_, c, d, cg_tol_, cg_max_iter_);
  if (res > 1e-3)
    fail(ErrorCode::conditioning,
         "dual apply: conjugate gradient stalled at residual " + std::to_string(res));
  return d;
}

double DualSystem::residual(int n_functions, uint64_t seed) const {
  // gram_ holds conj(G) = T*T, so for f = sum b_l g_l the analysis
  // coefficients are c = gram_ * b and ||f||^2 = b* gram_ b.
  int n = gram_.rows;
  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < n_functions; ++t) {
    std::vector<cplx> b(n);
    for (auto& v : b) v = rng.complex_normal();
    // keep the test function inside the numerically retained span
    std::vector<cplx> bb = cmat_apply(gram_, b);
    std::vector<cplx> c = cmat_apply(gram_, bb);
    std::vector<cplx> d = apply(c);
    std::vector<cplx> e(n);
    for (int i = 0; i < n; ++i) e[i] = bb[i] - d[i];
    std::vector<cplx> Ge = cmat_apply(gram_, e);
    std::vector<cplx> Gb = cmat_apply(gram_, bb);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      num += std::real(std::conj(e[i]) * Ge[i]);
      den += std::real(std::conj(bb[i]) * Gb[i]);
    }
    if (den <= 0.0) continue;
    worst = std::max(worst, std::sqrt(std::max(0.0, num) / den));
  }
  return worst;
}

}  // namespace wf
