#pragma once

#include <functional>
#include <vector>

#include "wf/common.hpp"

namespace wf {

// Composite Gauss-Legendre rules. Panels are sized so oscillatory integrands
// keep at most ~one cycle per panel, which drives the 16-point rule to
// machine accuracy.
struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

const GaussRule& gauss16();

// Integrate f over [a, b] with at least `min_panels` panels, sized for
// `cycles` oscillations across the interval.
cplx integrate_1d(const std::function<cplx(double)>& f, double a, double b,
                  double cycles, int min_panels = 2);

// Tensor product rule over [a1,b1] x [a2,b2].
cplx integrate_2d(const std::function<cplx(double, double)>& f, double a1, double b1,
                  double a2, double b2, double cycles1, double cycles2,
                  int min_panels = 2);

}  // namespace wf
