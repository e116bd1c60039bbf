#pragma once

#include "wf/exponential.hpp"
#include "wf/linalg.hpp"

namespace wf {

// Dual coefficients for an exponential frame: canonical duals through the
// Gram pseudo-inverse, or conjugate-gradient solves of G d = c per call.
class DualSystem {
public:
  enum class Method { canonical, cg };

  static DualSystem build(const ExponentialSystem& sys, Method method,
                          double rel_cutoff = 1e-8, double cg_tol = 1e-10,
                          int cg_max_iter = 4000);

  // map analysis coefficients to dual (synthesis) coefficients
  std::vector<cplx> apply(const std::vector<cplx>& c) const;

  Method method() const { return method_; }
  int rank() const { return rank_; }
  double eig_min_retained() const { return eig_min_; }
  double eig_max() const { return eig_max_; }
  // duality residual over random span functions (seeded)
  double residual(int n_functions, uint64_t seed) const;

private:
  Method method_ = Method::canonical;
  CMat gram_;
  CMat pinv_;
  int rank_ = 0;
  double eig_min_ = 0.0, eig_max_ = 0.0;
  double cg_tol_ = 1e-10;
  int cg_max_iter_ = 4000;
};

}  // namespace wf
