#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "wf/covering.hpp"
#include "wf/point_set.hpp"
#include "wf/region.hpp"

using namespace wf;

namespace {

PointSet random_points(int dim, int n, uint64_t seed, double lo = 0.0, double hi = 1.0) {
  Rng rng(seed);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < n; ++i) {
    std::vector<double> p(dim);
    for (auto& c : p) c = rng.uniform(lo, hi);
    pts.push_back(std::move(p));
  }
  return PointSet(dim, std::move(pts));
}

}  // namespace

TEST_CASE("separation") {
  CHECK(separation(PointSet(1, {{0.0}, {0.5}, {1.2}})) == doctest::Approx(0.5));
  CHECK(separation(PointSet(2, {{0, 0}, {1, 0}, {0, 1}})) == doctest::Approx(1.0));
  CHECK_THROWS_AS(separation(PointSet(1, {{0.0}})), Error);

  // brute-force oracle on 64 uniform points
  PointSet X = random_points(2, 64, 99);
  double brute = 1e300;
  for (size_t i = 0; i < X.size(); ++i)
    for (size_t j = i + 1; j < X.size(); ++j) {
      double d = std::hypot(X.point(i)[0] - X.point(j)[0], X.point(i)[1] - X.point(j)[1]);
      brute = std::min(brute, d);
    }
  CHECK(separation(X) == doctest::Approx(brute).epsilon(1e-14));
}

TEST_CASE("densities of lattices") {
  PointSet Z = PointSet::lattice_1d(1.0, -100.0, 100.0);
  DensityEstimate d = density_estimate(Z, 10.0, 0.1);
  CHECK(d.lower == doctest::Approx(1.0).epsilon(0.1));
  CHECK(d.upper == doctest::Approx(1.0).epsilon(0.1));
  CHECK(d.lower <= d.upper);

  PointSet third = PointSet::lattice_1d(1.0 / 3.0, -100.0, 100.0);
  d = density_estimate(third, 20.0);
  CHECK(std::abs(d.lower - 3.0) <= 1.0 / 20.0);
  CHECK(std::abs(d.upper - 3.0) <= 1.0 / 20.0);

  CHECK_THROWS_AS(density_estimate(PointSet(1, {}), 1.0), Error);
}

TEST_CASE("density of a perturbed half-integer grid against a window-count oracle") {
  Rng rng(17);
  std::vector<std::vector<double>> pts;
  for (int k = -200; k <= 200; ++k) pts.push_back({k / 2.0 + 0.1 * rng.uniform(-1.0, 1.0)});
  PointSet X(1, pts);
  const double r = 25.0;
  DensityEstimate d = density_estimate(X, r);
  CHECK(std::abs(d.lower - 2.0) <= 2.0 / r);
  CHECK(std::abs(d.upper - 2.0) <= 2.0 / r);

  // independent oracle: window counts over all integer-aligned centers
  size_t cmin = SIZE_MAX, cmax = 0;
  for (int y = -75; y <= 75; ++y) {
    size_t count = 0;
    for (const auto& p : pts)
      if (std::abs(p[0] - y) <= r) ++count;
    cmin = std::min(cmin, count);
    cmax = std::max(cmax, count);
  }
  CHECK(d.lower <= double(cmin) / (2.0 * r) + 1e-12);
  CHECK(d.upper >= double(cmax) / (2.0 * r) - 1e-12);
}

TEST_CASE("gap") {
  // integer grid on [0,4]^2, probed on [1,3]^2: worst point is a cell center
  std::vector<std::vector<double>> pts;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j) pts.push_back({double(i), double(j)});
  PointSet Z2(2, pts);
  double g = gap(Z2, Region::box({1.0, 1.0}, {3.0, 3.0}), 0.01);
  CHECK(g == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(0.02));

  CHECK(gap(PointSet(1, {{0.0}}), Region::interval(0.0, 1.0), 1e-4) ==
        doctest::Approx(1.0).epsilon(1e-3));

  // dense-grid oracle on a random 2-D set
  PointSet X = random_points(2, 50, 5);
  Region dom = Region::box({0.2, 0.2}, {0.8, 0.8});
  double got = gap(X, dom, 0.005);
  double oracle = 0.0;
  for (int i = 0; i < 120; ++i)
    for (int j = 0; j < 120; ++j) {
      double x = 0.2 + (i + 0.5) * 0.6 / 120, y = 0.2 + (j + 0.5) * 0.6 / 120;
      double best = 1e300;
      for (const auto& p : X.points()) best = std::min(best, std::hypot(x - p[0], y - p[1]));
      oracle = std::max(oracle, best);
    }
  CHECK(got == doctest::Approx(oracle).epsilon(0.03));
  CHECK_THROWS_AS(gap(PointSet(2, {}), dom, 0.01), Error);
}

TEST_CASE("gap shrinks weakly under refinement and bounds the density from below") {
  PointSet coarse = PointSet::lattice_1d(1.0, -40.0, 40.0);
  Region dom = Region::interval(-30.0, 30.0);
  double g1 = gap(coarse, dom, 0.01);
  auto pts = coarse.points();
  pts.push_back({0.25});
  pts.push_back({-7.6});
  double g2 = gap(PointSet(1, std::move(pts)), dom, 0.01);
  CHECK(g2 <= g1 + 1e-12);

  // lattice: estimated lower density stays above 1/(2 gap) - 2/r
  for (double r : {10.0, 20.0, 40.0}) {
    DensityEstimate d = density_estimate(coarse, r);
    CHECK(d.lower >= 1.0 / (2.0 * g1) - 2.0 / r - 1e-9);
  }
}

TEST_CASE("covering index") {
  // disjoint dyadic tiles: multiplicity 1 away from shared endpoints
  Region tile = Region::with_negation(Region::interval(0.5, 1.0));
  Covering dyadic = Covering::dilated(Mat::scalar(1, 2.0), tile, -4, 4);
  Region probe = Region::with_negation(Region::interval(1.0 / 16.0, 16.0));
  CHECK(covering_index(dyadic, probe, 0.0101) == 1);

  // eps-fattened dyadic family reaches multiplicity 3
  Region fat = Region::interval(0.25, 1.25);
  Covering fat_cov = Covering::dilated(Mat::scalar(1, 2.0), fat, -4, 4);
  CHECK(covering_index(fat_cov, Region::interval(0.5, 4.0), 0.001) == 3);

  // adjacent unit intervals share endpoints (closed sets)
  std::vector<Region> intervals;
  for (int j = -5; j <= 5; ++j) intervals.push_back(Region::interval(j, j + 1.0));
  CHECK(covering_index(Covering::explicit_list(intervals), Region::interval(-3.0, 3.0), 0.5) ==
        2);

  CHECK(covering_index(Covering{}, probe, 0.01) == 0);
}

TEST_CASE("covering index is invariant under a joint affine map") {
  Region base = Region::box({0.0, 0.0}, {1.0, 0.7});
  std::vector<Region> members;
  for (int j = 0; j < 4; ++j)
    members.push_back(Region::affine_image(Mat::identity(2), {0.6 * j, 0.2 * j}, base));
  Region probe = Region::box({-0.5, -0.5}, {3.0, 3.0});
  int before = covering_index(Covering::explicit_list(members), probe, 0.02);

  Mat A(2, 2);
  A(0, 0) = 1.3;
  A(0, 1) = -0.4;
  A(1, 0) = 0.2;
  A(1, 1) = 0.9;
  std::vector<Region> mapped;
  for (const auto& m : members) mapped.push_back(Region::linear_image(A, m));
  int after = covering_index(Covering::explicit_list(mapped),
                             Region::linear_image(A, probe), 0.02);
  CHECK(before == after);
}

TEST_CASE("is_expansive") {
  CHECK(is_expansive(Mat::scalar(2, 2.0)));
  Mat rot(2, 2);
  rot(0, 1) = -2.0;
  rot(1, 0) = 2.0;  // eigenvalues +-2i
  CHECK(is_expansive(rot));
  Mat shear(2, 2);
  shear(0, 0) = 1;
  shear(0, 1) = 1;
  shear(1, 1) = 1;
  CHECK_FALSE(is_expansive(shear));
  CHECK_THROWS_AS(is_expansive(Mat(2, 3)), Error);
}

TEST_CASE("dilation ring") {
  Region V = Region::box({-1.0, -1.0}, {1.0, 1.0});
  Region ring = dilation_ring(Mat::scalar(2, 2.0), V);
  CHECK(ring.measure() == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(ring.contains({1.5, 0.0}));
  CHECK_FALSE(ring.contains({0.5, 0.5}));
  CHECK_FALSE(ring.contains({1.0, 1.0}));  // closed inner set is excluded
  CHECK(ring.contains({2.0, 2.0}));

  // 1-D: [-2,-1) u (1,2]
  Region r1 = dilation_ring(Mat::scalar(1, 2.0), Region::interval(-1.0, 1.0));
  CHECK(r1.contains({2.0}));
  CHECK(r1.contains({-2.0}));
  CHECK(r1.contains({1.5}));
  CHECK_FALSE(r1.contains({1.0}));
  CHECK_FALSE(r1.contains({0.0}));
  CHECK(r1.measure() == doctest::Approx(2.0).epsilon(1e-12));

  // nested case: iterated rings stay disjoint away from shared boundaries
  Covering rings = Covering::dilated(Mat::scalar(2, 2.0), ring, -2, 2);
  Region probe = Region::annulus(0.6, 3.5);
  CHECK(covering_index(rings, probe, 0.0101) == 1);

  // rotation-dilation: the ring family is NOT pairwise disjoint
  Mat A(2, 2);
  A(0, 1) = -2.0;
  A(1, 0) = 2.0;
  Region V2 = Region::box({-3.0, -1.0}, {3.0, 1.0});
  Region ring2 = dilation_ring(A, V2);
  Covering rings2 = Covering::dilated(A, ring2, -2, 2);
  Rng rng(31);
  int max_mult = 0;
  for (int t = 0; t < 20000; ++t) {
    std::vector<double> x{rng.uniform(-6.0, 6.0), rng.uniform(-6.0, 6.0)};
    max_mult = std::max(max_mult, int(rings2.multiplicity(x)));
  }
  CHECK(max_mult >= 2);

  CHECK_THROWS_AS(dilation_ring(Mat::scalar(2, 1.0), V), Error);       // not expansive
  CHECK_THROWS_AS(dilation_ring(Mat::scalar(2, 2.0),
                                Region::box({0.5, 0.5}, {1.0, 1.0})), Error);  // 0 outside V
}

TEST_CASE("region algebra basics") {
  Region spiral = Region::spiral_sector(2.0, TWO_PI, 1.0, 2.0, 0.0, 0.25);
  CHECK(spiral.measure() == doctest::Approx(PI * 3.0 * (std::pow(2.0, 0.5) - 1.0) /
                                            (2.0 * std::log(2.0)))
                                .epsilon(1e-12));
  // a point on the generating curve is inside
  double t = 0.1;
  std::vector<double> on{1.5 * std::pow(2.0, t) * std::cos(TWO_PI * t),
                         1.5 * std::pow(2.0, t) * std::sin(TWO_PI * t)};
  CHECK(spiral.contains(on));
  CHECK_FALSE(spiral.contains({-1.0, -1.0}));
  CHECK(spiral.distance_origin() == doctest::Approx(1.0));

  Region sector = Region::annulus_sector(1.0, 2.0, 0.0, PI / 4.0);
  CHECK(sector.measure() == doctest::Approx(PI / 4.0 * 1.5).epsilon(1e-12));
  CHECK(sector.contains({1.5, 0.0}));
  CHECK_FALSE(sector.contains({0.0, 1.5}));
  CHECK(sector.distance({0.5, 0.0}) == doctest::Approx(0.5).epsilon(1e-9));

  Region prod = Region::product(Region::interval(0.0, 1.0), Region::interval(2.0, 3.0));
  CHECK(prod.dim() == 2);
  CHECK(prod.measure() == doctest::Approx(1.0));
  CHECK(prod.contains({0.5, 2.5}));
  CHECK_FALSE(prod.contains({0.5, 1.5}));
}
