#include "wf/point_set.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace wf {

PointSet::PointSet(int dim, std::vector<std::vector<double>> points) : dim_(dim) {
  if (dim <= 0) fail(ErrorCode::domain, "PointSet: dimension must be positive");
  for (const auto& p : points)
    if (int(p.size()) != dim) fail(ErrorCode::domain, "PointSet: point with wrong dimension");
  points_ = std::move(points);
}

PointSet PointSet::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open points file: " + path);
  std::vector<std::vector<double>> pts;
  std::string line;
  int dim = -1;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r\n,") == std::string::npos) continue;
    std::vector<double> p;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        p.push_back(std::stod(cell));
      } catch (...) {
        fail(ErrorCode::io, path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (dim < 0) dim = int(p.size());
    if (int(p.size()) != dim)
      fail(ErrorCode::io, path + ":" + std::to_string(lineno) + ": inconsistent dimension");
    pts.push_back(std::move(p));
  }
  if (dim <= 0 || pts.empty()) fail(ErrorCode::io, path + ": no points");
  return PointSet(dim, std::move(pts));
}

PointSet PointSet::lattice_1d(double spacing, double lo, double hi) {
  if (!(spacing > 0.0) || !(lo <= hi)) fail(ErrorCode::domain, "lattice_1d: bad range");
  std::vector<std::vector<double>> pts;
  long kmin = long(std::ceil(lo / spacing - 1e-12));
  long kmax = long(std::floor(hi / spacing + 1e-12));
  for (long k = kmin; k <= kmax; ++k) pts.push_back({k * spacing});
  return PointSet(1, std::move(pts));
}

BoxD PointSet::bounding_box() const {
  if (points_.empty()) fail(ErrorCode::domain, "bounding_box: empty point set");
  BoxD bb{points_[0], points_[0]};
  for (const auto& p : points_)
    for (int i = 0; i < dim_; ++i) {
      bb.lo[i] = std::min(bb.lo[i], p[i]);
      bb.hi[i] = std::max(bb.hi[i], p[i]);
    }
  return bb;
}

void PointSet::to_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write points file: " + path);
  out.precision(17);
  for (const auto& p : points_) {
    for (int i = 0; i < dim_; ++i) out << (i ? "," : "") << p[i];
    out << "\n";
  }
}

double separation(const PointSet& X) {
  if (X.size() < 2) fail(ErrorCode::domain, "separation: need at least 2 points");
  const auto& pts = X.points();
  size_t n = pts.size();
  std::vector<double> best(64, std::numeric_limits<double>::infinity());
  parallel_for(n, [&](size_t chunk, size_t b, size_t e) {
    double m = best[chunk];
    for (size_t i = b; i < e; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        double d2 = 0.0;
        for (int c = 0; c < X.dim(); ++c) {
          double d = pts[i][c] - pts[j][c];
          d2 += d * d;
        }
        m = std::min(m, d2);
      }
    }
    best[chunk] = m;
  });
  double m = *std::min_element(best.begin(), best.end());
  return std::sqrt(m);
}

DensityEstimate density_estimate(const PointSet& X, double r, double center_step) {
  if (X.size() == 0) fail(ErrorCode::domain, "density_estimate: empty point set");
  if (!(r > 0.0)) fail(ErrorCode::domain, "density_estimate: r must be positive");
  DensityEstimate out;
  out.r = r;
  double sep = X.size() >= 2 ? separation(X) : 1.0;
  out.separated = sep > 0.0;
  if (center_step <= 0.0) center_step = out.separated ? sep / 4.0 : r / 32.0;
  out.center_step = center_step;

  int d = X.dim();
  BoxD bb = X.bounding_box();
  // Windows must fit inside the sampled box, otherwise truncation deflates
  // the minimum count.
  std::vector<long> steps(d);
  size_t total = 1;
  for (int i = 0; i < d; ++i) {
    double lo = bb.lo[i] + r, hi = bb.hi[i] - r;
    if (lo > hi) fail(ErrorCode::domain, "density_estimate: r exceeds the data extent");
    steps[i] = std::max<long>(1, long(std::floor((hi - lo) / center_step)) + 1);
    total *= size_t(steps[i]);
  }
  if (total > 4000000)
    fail(ErrorCode::config, "density_estimate: center grid too large; increase center_step");

  // 1-D fast path: sorted coordinates + binary search per window.
  std::vector<double> sorted1d;
  if (d == 1) {
    sorted1d.reserve(X.size());
    for (const auto& p : X.points()) sorted1d.push_back(p[0]);
    std::sort(sorted1d.begin(), sorted1d.end());
  }

  auto count_window = [&](const std::vector<double>& y) -> size_t {
    if (d == 1) {
      auto lo = std::lower_bound(sorted1d.begin(), sorted1d.end(), y[0] - r);
      auto hi = std::upper_bound(sorted1d.begin(), sorted1d.end(), y[0] + r);
      return size_t(hi - lo);
    }
    size_t c = 0;
    for (const auto& p : X.points()) {
      bool in = true;
      for (int i = 0; i < d; ++i)
        if (std::abs(p[i] - y[i]) > r) { in = false; break; }
      if (in) ++c;
    }
    return c;
  };

  MinMax mm = parallel_minmax(total, [&](size_t flat) {
    std::vector<double> y(d);
    size_t rest = flat;
    for (int i = 0; i < d; ++i) {
      long ix = long(rest % size_t(steps[i]));
      rest /= size_t(steps[i]);
      y[i] = bb.lo[i] + r + ix * center_step;
    }
    return double(count_window(y));
  });
  double vol = std::pow(2.0 * r, d);
  out.lower = mm.min_value / vol;
  out.upper = mm.max_value / vol;
  return out;
}

double gap(const PointSet& X, const Region& domain, double probe_step) {
  if (X.size() == 0) fail(ErrorCode::domain, "gap: empty point set");
  if (!(probe_step > 0.0)) fail(ErrorCode::domain, "gap: probe_step must be positive");
  if (domain.dim() != X.dim()) fail(ErrorCode::domain, "gap: dimension mismatch");
  int d = X.dim();
  BoxD bb = domain.bounding_box();
  std::vector<long> steps(d);
  size_t total = 1;
  for (int i = 0; i < d; ++i) {
    steps[i] = std::max<long>(1, long(std::ceil(bb.width(i) / probe_step)));
    total *= size_t(steps[i]);
  }
  if (total > size_t(2e8)) fail(ErrorCode::config, "gap: probe grid too large; increase probe_step");

  const auto& pts = X.points();
  std::vector<double> worst(64, 0.0);
  parallel_for(total, [&](size_t chunk, size_t b, size_t e) {
    double w = worst[chunk];
    std::vector<double> x(d);
    for (size_t flat = b; flat < e; ++flat) {
      size_t rest = flat;
      for (int i = 0; i < d; ++i) {
        long ix = long(rest % size_t(steps[i]));
        rest /= size_t(steps[i]);
        x[i] = bb.lo[i] + (ix + 0.5) * bb.width(i) / steps[i];
      }
      if (!domain.contains(x)) continue;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : pts) {
        double d2 = 0.0;
        for (int i = 0; i < d; ++i) {
          double t = x[i] - p[i];
          d2 += t * t;
        }
        best = std::min(best, d2);
      }
      w = std::max(w, best);
    }
    worst[chunk] = w;
  });
  double w = *std::max_element(worst.begin(), worst.end());
  return std::sqrt(w);
}

}  // namespace wf
