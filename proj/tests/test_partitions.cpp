#include <doctest.h>

#include <cmath>

#include "wf/covering.hpp"
#include "wf/rpu.hpp"
#include "wf/window.hpp"

using namespace wf;

TEST_CASE("bspline evaluation") {
  CHECK(bspline_eval(0, 0.5) == doctest::Approx(1.0));
  CHECK(bspline_eval(1, 1.0) == doctest::Approx(1.0));
  CHECK(bspline_eval(1, 0.5) == doctest::Approx(0.5));
  CHECK(bspline_eval(3, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(bspline_eval(3, -0.1) == 0.0);
  CHECK(bspline_eval(3, 4.1) == 0.0);

  // numerical convolution oracle: chi_[0,1] convolved with itself 3 times
  const int n = 4000;
  double h = 4.0 / n;
  std::vector<double> cur(n, 0.0), nxt(n, 0.0);
  for (int i = 0; i < n; ++i) cur[i] = (i * h < 1.0) ? 1.0 : 0.0;
  for (int pass = 0; pass < 3; ++pass) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j <= i; ++j) {
        double u = j * h;
        if (u > 1.0) break;
        s += cur[i - j];
      }
      nxt[i] = s * h;
    }
    cur.swap(nxt);
  }
  CHECK(cur[size_t(2.0 / h)] == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("rpu sum of squares") {
  // indicator tiling
  std::vector<Window> tiles;
  for (int j = -5; j <= 5; ++j)
    tiles.push_back(Window::indicator(Region::interval(j, j + 1.0)));
  Rpu tiling = Rpu::explicit_list(tiles, {});
  CHECK(tiling.sum_squares({0.3}) == doctest::Approx(1.0));

  // dyadic mirror tiling
  Window h = Window::mirror(Window::indicator(Region::interval(0.5, 1.0)));
  Rpu dyadic = Rpu::dilation_family(h, Mat::scalar(1, 2.0), -6, 6);
  CHECK(dyadic.sum_squares({0.7}) == doctest::Approx(1.0));

  // smooth profile versus a direct summation oracle
  Window hp = Window::bspline_1d(3, 4.0, 0.25, cplx(4.0, 0.0));
  Rpu smooth = Rpu::dilation_family(hp, Mat::scalar(1, 2.0), -8, 8);
  double x = 0.9;
  double direct = 0.0;
  for (int j = -8; j <= 8; ++j)
    direct += std::norm(4.0 * bspline_eval(3, 4.0 * (std::ldexp(x, -j) - 0.25)));
  CHECK(smooth.sum_squares({x}) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("rpu bounds") {
  Window h = Window::mirror(Window::indicator(Region::interval(0.5, 1.0)));
  Rpu dyadic = Rpu::dilation_family(h, Mat::scalar(1, 2.0), -4, 4);
  RpuBounds b = rpu_bounds(dyadic, Region::interval(0.125, 8.0), 1e-4);
  CHECK(b.p_hat == doctest::Approx(1.0));
  CHECK(b.P_hat == doctest::Approx(1.0));
  CHECK_FALSE(b.violated);

  // smooth family, regression constants from the dense probe oracle
  Window hp = Window::bspline_1d(3, 4.0, 0.25, cplx(4.0, 0.0));
  Rpu smooth = Rpu::dilation_family(hp, Mat::scalar(1, 2.0), -10, 10);
  RpuBounds sb = rpu_bounds(smooth, Region::interval(0.25, 4.0), 1e-4);
  CHECK(sb.p_hat == doctest::Approx(0.830789773689).epsilon(1e-6));
  CHECK(sb.P_hat == doctest::Approx(7.118076003877).epsilon(1e-6));

  // violation diagnostic carries the witness
  Rpu narrow = Rpu::dilation_family(h, Mat::scalar(1, 2.0), 0, 1);
  RpuBounds vb = rpu_bounds(narrow, Region::interval(0.125, 8.0), 1e-3);
  CHECK(vb.violated);
  CHECK(vb.p_hat == doctest::Approx(0.0));
  CHECK(vb.argmin.size() == 1);
  CHECK(narrow.sum_squares(vb.argmin) == doctest::Approx(0.0));
}

TEST_CASE("normalized rpu") {
  Window hp = Window::bspline_1d(3, 4.0, 0.25, cplx(4.0, 0.0));
  Rpu smooth = Rpu::dilation_family(hp, Mat::scalar(1, 2.0), -8, 8);
  Rpu normalized = Rpu::normalized(smooth);
  Rng rng(77);
  for (int t = 0; t < 1000; ++t) {
    double x = rng.uniform(0.5, 2.0);
    CHECK(std::abs(normalized.sum_squares({x}) - 1.0) < 1e-10);
  }
  RpuBounds nb = rpu_bounds(normalized, Region::interval(0.25, 4.0), 1e-3);
  CHECK(nb.p_hat == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(nb.P_hat == doctest::Approx(1.0).epsilon(1e-10));

  // idempotence on an already regular family
  Window tile = Window::mirror(Window::indicator(Region::interval(0.5, 1.0)));
  Rpu regular = Rpu::dilation_family(tile, Mat::scalar(1, 2.0), -4, 4);
  Rpu renorm = Rpu::normalized(regular);
  for (double x : {0.3, 0.7, 1.4, -2.5}) {
    CHECK(std::abs(renorm.member_value(2, {x}) - regular.member_value(2, {x})) < 1e-12);
  }

  // two identical overlapping indicators scale by 1/sqrt(2)
  Window ind = Window::indicator(Region::interval(0.0, 1.0));
  Rpu two = Rpu::normalized(Rpu::explicit_list({ind, ind}, {0, 1}));
  CHECK(std::abs(two.member_value(0, {0.5})) == doctest::Approx(1.0 / std::sqrt(2.0)));

  // supports are preserved exactly
  CHECK(two.member_value(0, {1.5}) == cplx(0.0, 0.0));

  // zero denominator inside a declared union raises with the point
  Rpu gappy = Rpu::normalized(Rpu::explicit_list({ind}, {0}),
                              Region::interval(0.0, 2.0));
  CHECK_THROWS_AS(gappy.sum_squares({1.5}), Error);
}

TEST_CASE("conjugate family has identical bounds") {
  Window hp = Window::scaled(Window::bspline_1d(3, 4.0, 0.25, cplx(4.0, 0.0)),
                             cplx(0.6, 0.8));  // unimodular complex amp
  Rpu family = Rpu::dilation_family(hp, Mat::scalar(1, 2.0), -4, 4);
  Rpu conj_family = family.conjugated();
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    double x = rng.uniform(0.3, 3.0);
    CHECK(std::abs(family.sum_squares({x}) - conj_family.sum_squares({x})) < 1e-12);
  }
}

TEST_CASE("sum of squares bounded by covering index times sup") {
  Window hp = Window::bspline_1d(3, 4.0, 0.25, cplx(4.0, 0.0));
  Rpu family = Rpu::dilation_family(hp, Mat::scalar(1, 2.0), -6, 6);
  Covering cov = Covering::dilated(Mat::scalar(1, 2.0), hp.support(), -6, 6);
  double sup2 = std::norm(cplx(4.0 * bspline_eval(3, 2.0), 0.0));  // peak of the profile
  int rho = covering_index(cov, Region::interval(0.3, 3.0), 1e-3);
  Rng rng(9);
  for (int t = 0; t < 300; ++t) {
    double x = rng.uniform(0.3, 3.0);
    CHECK(family.sum_squares({x}) <= rho * sup2 * (1.0 + 1e-12));
  }
}

TEST_CASE("level sets carry the defining inequality") {
  Window hp = Window::bspline_1d(3, 4.0, 0.25, cplx(4.0, 0.0));
  Rpu family = Rpu::dilation_family(hp, Mat::scalar(1, 2.0), -4, 4);
  double c = 0.4;
  Rng rng(13);
  for (int t = 0; t < 500; ++t) {
    double x = rng.uniform(0.2, 4.0);
    if (family.level_set_contains(4, c, {x})) CHECK(family.member_abs2(4, {x}) > c);
  }
}

TEST_CASE("dilation rpu construction checks its hypotheses by name") {
  Window hp = Window::mirror(Window::bspline_1d(3, 4.0, 0.25, cplx(4.0, 0.0)));
  Region Q = Region::with_negation(Region::interval(0.5, 1.0));
  Mat A = Mat::scalar(1, 2.0);

  // c1 below the actual floor of |h|^2 on Q, c2 at the peak
  double c1 = std::norm(4.0 * bspline_eval(3, 1.0)) * 0.99;
  double c2 = std::norm(4.0 * bspline_eval(3, 2.0)) * 1.01;
  DilationRpuResult res = build_dilation_rpu(hp, A, Q, 0.25, c1, c2, -4, 4);
  CHECK(res.predicted_p == doctest::Approx(c1));
  CHECK(res.covering_index == 3);
  CHECK(res.predicted_P == doctest::Approx(res.covering_index * c2));
  RpuBounds pb = rpu_bounds(res.rpu, Region::with_negation(Region::interval(0.25, 4.0)), 1e-3);
  CHECK(pb.p_hat >= c1 - 1e-9);
  CHECK(pb.P_hat <= res.predicted_P + 1e-9);

  // named hypothesis failures
  CHECK_THROWS_WITH_AS(
      build_dilation_rpu(hp, Mat::scalar(1, 1.0), Q, 0.25, c1, c2, -4, 4),
      doctest::Contains("(i)"), Error);
  CHECK_THROWS_WITH_AS(
      build_dilation_rpu(hp, A, Region::interval(-0.1, 1.0), 0.25, c1, c2, -4, 4),
      doctest::Contains("(ii)"), Error);
  CHECK_THROWS_WITH_AS(build_dilation_rpu(hp, A, Q, 0.25, 0.1, 0.2, -4, 4),
                       doctest::Contains("(a)"), Error);
  CHECK_THROWS_WITH_AS(build_dilation_rpu(hp, A, Q, 0.25, 10.0, 20.0, -4, 4),
                       doctest::Contains("(b)"), Error);
  CHECK_THROWS_WITH_AS(build_dilation_rpu(hp, A, Q, 0.01, c1, c2, -4, 4),
                       doctest::Contains("(c)"), Error);

  // the arithmetic of the prediction: claimed floor 0.25, cap 1, index 3
  Window ind = Window::mirror(Window::indicator(Region::interval(0.25, 1.25)));
  DilationRpuResult weak = build_dilation_rpu(
      ind, A, Region::with_negation(Region::interval(0.25, 1.25)), 0.0, 0.25, 1.0, -4, 4);
  CHECK(weak.covering_index == 3);
  CHECK(weak.predicted_P == doctest::Approx(3.0));
  CHECK(weak.predicted_p == doctest::Approx(0.25));
}

TEST_CASE("spiral bump plateau keeps the sum of squares above the floor") {
  Window h = Window::bump_spiral(2.0, TWO_PI, 1.0, 2.0, 0.0, 0.25, 0.10, 0.03, 3);
  Region Q = Region::spiral_sector(2.0, TWO_PI, 1.0, 2.0, 0.0, 0.25);
  Mat A = mat_mul(Mat::scalar(2, std::pow(2.0, 0.25)), Mat::rotation2d(TWO_PI * 0.25));
  DilationRpuResult res = build_dilation_rpu(h, A, Q, 0.55, 1.0, 1.9, -10, 10);
  RpuBounds b = rpu_bounds(res.rpu, Region::annulus(1.0, 2.0), 1.0 / 256.0);
  CHECK(b.p_hat >= 1.0 * (1.0 - 1e-6));
  CHECK(std::isfinite(b.P_hat));
}
