#include "wf/quadrature.hpp"

#include <cmath>

namespace wf {

namespace {

GaussRule make_gauss(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n from the Chebyshev initial guess.
    double x = std::cos(PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return rule;
}

int panel_count(double cycles, int min_panels) {
  double want = std::ceil(std::abs(cycles) * 1.25) + 1.0;
  return std::max<int>(min_panels, int(want));
}

}  // namespace

const GaussRule& gauss16() {
  static const GaussRule rule = make_gauss(16);
  return rule;
}

cplx integrate_1d(const std::function<cplx(double)>& f, double a, double b,
                  double cycles, int min_panels) {
  if (!(b > a)) return cplx(0.0, 0.0);
  const GaussRule& g = gauss16();
  int panels = panel_count(cycles, min_panels);
  double h = (b - a) / panels;
  KahanSum re, im;
  for (int p = 0; p < panels; ++p) {
    double lo = a + p * h;
    double mid = lo + 0.5 * h;
    for (size_t q = 0; q < g.nodes.size(); ++q) {
      cplx v = f(mid + 0.5 * h * g.nodes[q]) * (0.5 * h * g.weights[q]);
      re.add(v.real());
      im.add(v.imag());
    }
  }
  return cplx(re.value(), im.value());
}

cplx integrate_2d(const std::function<cplx(double, double)>& f, double a1, double b1,
                  double a2, double b2, double cycles1, double cycles2, int min_panels) {
  if (!(b1 > a1) || !(b2 > a2)) return cplx(0.0, 0.0);
  const GaussRule& g = gauss16();
  int p1 = panel_count(cycles1, min_panels);
  int p2 = panel_count(cycles2, min_panels);
  double h1 = (b1 - a1) / p1;
  double h2 = (b2 - a2) / p2;
  KahanSum re, im;
  for (int i = 0; i < p1; ++i) {
    double m1 = a1 + (i + 0.5) * h1;
    for (size_t qi = 0; qi < g.nodes.size(); ++qi) {
      double x = m1 + 0.5 * h1 * g.nodes[qi];
      double wx = 0.5 * h1 * g.weights[qi];
      for (int j = 0; j < p2; ++j) {
        double m2 = a2 + (j + 0.5) * h2;
        for (size_t qj = 0; qj < g.nodes.size(); ++qj) {
          double y = m2 + 0.5 * h2 * g.nodes[qj];
          cplx v = f(x, y) * (wx * 0.5 * h2 * g.weights[qj]);
          re.add(v.real());
          im.add(v.imag());
        }
      }
    }
  }
  return cplx(re.value(), im.value());
}

}  // namespace wf
