#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "wf/gallery.hpp"
#include "wf/serialize.hpp"

using namespace wf;

namespace {

std::string tmp_path(const std::string& name) {
  return std::string("io_test_") + name;
}

}  // namespace

TEST_CASE("region literals round trip") {
  std::vector<Region> cases{
      Region::interval(-1.5, 2.0),
      Region::box({-1.0, 0.0}, {1.0, 2.0}),
      Region::annulus_sector(0.5, 1.0, -0.3, 0.9),
      Region::spiral_sector(2.0, TWO_PI, 1.0, 2.0, 0.0, 0.25),
      Region::with_negation(Region::interval(0.5, 1.0)),
      Region::difference(Region::box({-2.0, -2.0}, {2.0, 2.0}),
                         Region::box({-1.0, -1.0}, {1.0, 1.0}), true),
      Region::product(Region::interval(0.0, 1.0), Region::interval(2.0, 3.0)),
      Region::linear_image(Mat::rotation2d(0.4), Region::box({0.0, 0.0}, {1.0, 1.0})),
  };
  Rng rng(1);
  for (const auto& r : cases) {
    Region back = region_from_json(region_to_json(r));
    CHECK(back.dim() == r.dim());
    CHECK(back.measure() == doctest::Approx(r.measure()).epsilon(1e-9));
    BoxD bb = r.bounding_box();
    for (int t = 0; t < 200; ++t) {
      std::vector<double> x(r.dim());
      for (int i = 0; i < r.dim(); ++i)
        x[i] = rng.uniform(bb.lo[i] - 0.5, bb.hi[i] + 0.5);
      CHECK(back.contains(x) == r.contains(x));
    }
  }
}

TEST_CASE("point sets: json and csv with comments") {
  PointSet p(2, {{0.0, 1.0}, {2.5, -3.0}});
  PointSet back = pointset_from_json(pointset_to_json(p));
  CHECK(back.size() == 2);
  CHECK(back.point(1)[1] == doctest::Approx(-3.0));

  std::string path = tmp_path("points.csv");
  {
    std::ofstream out(path);
    out << "# comment line\n1.0, 2.0\n3.0, 4.0  # trailing comment\n\n";
  }
  PointSet csv = PointSet::from_csv(path);
  CHECK(csv.size() == 2);
  CHECK(csv.dim() == 2);
  CHECK(csv.point(1)[0] == doctest::Approx(3.0));
  std::remove(path.c_str());
}

TEST_CASE("window and rpu literals round trip") {
  Window cases[] = {
      Window::indicator(Region::with_negation(Region::interval(0.5, 1.0))),
      Window::mirror(Window::bspline_1d(3, 4.0, 0.25, cplx(4.0, 0.0))),
      Window::radial_bspline(4, 2),
      Window::bump_sector(0.5, 1.0, -0.4, 0.4, 0.15, 0.2, 3),
      Window::bump_spiral(2.0, TWO_PI, 1.0, 2.0, 0.0, 0.25, 0.1, 0.03, 3),
      Window::bump_box_ring(BoxD{{-2.0, -2.0}, {2.0, 2.0}}, 0.25,
                            BoxD{{-1.0, -1.0}, {1.0, 1.0}}, 0.25, 3),
      Window::tensor({Window::bspline_1d(2, 1.0, 0.0), Window::bspline_1d(2, 1.0, 0.0)}),
      Window::compose_affine(Window::indicator(Region::interval(0.0, 1.0)),
                             Mat::scalar(1, 0.5), {0.25}),
  };
  Rng rng(2);
  for (const auto& w : cases) {
    Window back = window_from_json(window_to_json(w));
    BoxD bb = w.support().bounding_box();
    for (int t = 0; t < 200; ++t) {
      std::vector<double> x(w.dim());
      for (int i = 0; i < w.dim(); ++i) x[i] = rng.uniform(bb.lo[i] - 0.3, bb.hi[i] + 0.3);
      CHECK(std::abs(back.value(x) - w.value(x)) < 1e-14);
    }
  }

  Rpu family = Rpu::dilation_family(Window::mirror(Window::indicator(Region::interval(0.5, 1.0))),
                                    Mat::scalar(1, 2.0), -3, 3);
  Rpu back = rpu_from_json(rpu_to_json(family));
  CHECK(back.size() == family.size());
  for (double x : {0.3, 0.7, 2.5, -1.4})
    CHECK(back.sum_squares({x}) == doctest::Approx(family.sum_squares({x})));

  // generator-form literal
  json gen;
  gen["kind"] = "dilation";
  gen["window"] = window_to_json(Window::mirror(Window::indicator(Region::interval(0.5, 1.0))));
  gen["matrix"] = json::array({json::array({2.0})});
  gen["j_min"] = -3;
  gen["j_max"] = 3;
  Rpu gen_rpu = rpu_from_json(gen);
  CHECK(gen_rpu.sum_squares({0.7}) == doctest::Approx(1.0));
}

TEST_CASE("sampled fields round trip through csv and the binary grid") {
  BoxD box{{-1.0, 0.0}, {1.0, 2.0}};
  SampledField f(box, {16, 12});
  Rng rng(3);
  for (auto& z : f.data()) z = rng.complex_normal();

  std::string cpath = tmp_path("grid.csv");
  f.write_csv(cpath);
  SampledField fc = SampledField::read_csv(cpath);
  CHECK(relative_l2_error(fc, f) < 1e-12);
  std::remove(cpath.c_str());

  std::string bpath = tmp_path("grid.wfg");
  f.write_binary(bpath);
  SampledField fb = SampledField::read_auto(bpath);
  CHECK(fb.dims() == f.dims());
  CHECK(relative_l2_error(fb, f) < 1e-6);  // complex64 storage
  std::remove(bpath.c_str());
}

TEST_CASE("coefficients round trip against a planned layout") {
  GalleryEntry e = gabor_nonharmonic();
  auto fns = make_system_ensemble(e.system, 1, 88);
  SampledField f = SampledField::sample(fns[0], e.system.grid_box, e.system.grid_dims);
  AnalysisResult ar = analyze_field(e.system, f);
  std::string path = tmp_path("coeffs.csv");
  coeffs_write_csv(ar, path);

  SampledField zeros(e.system.grid_box, e.system.grid_dims);
  AnalysisResult plan = analyze_field(e.system, zeros);
  AnalysisResult back = coeffs_read_csv(path, plan);
  REQUIRE(back.levels.size() == ar.levels.size());
  for (size_t li = 0; li < ar.levels.size(); ++li) {
    REQUIRE(back.levels[li].c.size() == ar.levels[li].c.size());
    for (size_t k = 0; k < ar.levels[li].c.size(); ++k)
      CHECK(std::abs(back.levels[li].c[k] - ar.levels[li].c[k]) < 1e-12);
  }
  std::remove(path.c_str());
}

TEST_CASE("gram csv has interleaved real and imaginary columns") {
  ExponentialSystem sys(PointSet(1, {{0.0}, {0.4}}), Region::interval(0.0, 1.0));
  std::string path = tmp_path("gram.csv");
  gram_write_csv(sys.gram(), path);
  std::ifstream in(path);
  std::string line;
  REQUIRE(std::getline(in, line));
  int commas = int(std::count(line.begin(), line.end(), ','));
  CHECK(commas == 3);  // 2 columns x (re, im)
  std::remove(path.c_str());
}

TEST_CASE("reports carry the documented field names") {
  GalleryEntry e = shannon_1d(-2, 2);
  ValidationOptions opt;
  opt.ensemble = 4;
  opt.recon_signals = 1;
  json v = validation_to_json(validate_entry(e, opt));
  CHECK(v.contains("entry"));
  CHECK(v.contains("passed"));
  CHECK(v.contains("checks"));

  FrameBounds fb;
  fb.m = 1.0;
  fb.M = 2.0;
  fb.truncation_R = 16.0;
  fb.ensemble_seed = 7;
  json bj = bounds_to_json(fb);
  CHECK(bj.contains("m"));
  CHECK(bj.contains("M"));
  CHECK(bj.contains("kind"));
  CHECK(bj.contains("truncation_R"));
  CHECK(bj.contains("ensemble_seed"));

  Rpu family = Rpu::dilation_family(Window::mirror(Window::indicator(Region::interval(0.5, 1.0))),
                                    Mat::scalar(1, 2.0), -3, 3);
  json rj = rpu_bounds_to_json(rpu_bounds(family, Region::interval(0.25, 4.0), 1e-3));
  CHECK(rj.contains("p_hat"));
  CHECK(rj.contains("P_hat"));
  CHECK(rj.contains("probe_step"));
  CHECK(rj.contains("violations"));
}
