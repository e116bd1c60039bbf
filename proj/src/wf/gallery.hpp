#pragma once

#include <map>
#include <string>

#include "wf/analysis.hpp"
#include "wf/atom_system.hpp"
#include "wf/reconstruct.hpp"

namespace wf {

// Ready-made constructions. Every entry built with defaults passes its own
// validation: covering index >= 1, RPU bounds, empirical ratios inside the
// predicted interval, and reconstruction below the declared tolerance.
struct GalleryEntry {
  std::string name;
  AtomSystem system;
  bool grid_ensembles = true;   // run ensembles through the sampled-grid path
  double recon_tolerance = 1e-3;
  double ratio_inflation = 1e-3;
  bool expect_tight = false;
  BoxD recon_box;
  std::vector<long> recon_dims;
  std::string notes;
};

GalleryEntry shannon_1d(int j_min = -4, int j_max = 4, double density_factor = 2.0,
                        double jitter = 0.0, uint64_t seed = 7);
GalleryEntry kadec_riesz_1d(int j_min = -3, int j_max = 3, double L_fraction = 0.2,
                            uint64_t seed = 7);
GalleryEntry bspline_1d(int n = 4, int j_min = -4, int j_max = 4,
                        double density_factor = 16.0 / 15.0, double jitter = 0.0,
                        uint64_t seed = 42);
GalleryEntry radial_2d(const std::string& kind = "bspline", int n = 4, int j_min = -3,
                       int j_max = 3);
GalleryEntry directional_2d(int n_dirs = 4, int j_min = -3, int j_max = 3,
                            bool smooth = true);
GalleryEntry spiral_2d(double a = 2.0, int m = 4, int j_min = -8, int j_max = 8);
GalleryEntry gabor_nonharmonic(int j_min = -6, int j_max = 6, double jitter = 0.0,
                               uint64_t seed = 7);
// The single-dilation construction: V bounded with 0 in its interior, A
// expansive, h nonvanishing on closure(A^T V \ V) and supported in its
// eps-fattening, grid gap below 1/(2 diam(Q_eps)).
GalleryEntry recipe(const Region& V, const Mat& A, const Window& h, double eps,
                    const GridSpec& grid, int j_min = -1, int j_max = 1);
GalleryEntry recipe_default();

std::vector<std::string> gallery_names();

// name-based dispatch with numeric overrides (j_min, j_max, n, n_dirs,
// density_factor, jitter, seed, a, m, smooth)
GalleryEntry build_gallery_entry(const std::string& name,
                                 const std::map<std::string, double>& overrides = {});

// --- validation -----------------------------------------------------------

struct ValidationOptions {
  int ensemble = 40;
  uint64_t seed = 12345;
  int recon_signals = 2;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string details;
};

struct ValidationReport {
  std::string entry;
  bool passed = false;
  std::vector<CheckResult> checks;
  double p_hat = 0.0, P_hat = 0.0;
  FrameBounds predicted;
  double ratio_min = 0.0, ratio_max = 0.0;
  double recon_error = -1.0;
  std::vector<FrameBounds> per_level;
};

ValidationReport validate_entry(const GalleryEntry& entry, const ValidationOptions& opt = {});

}  // namespace wf
