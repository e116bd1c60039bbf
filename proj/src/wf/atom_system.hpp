#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wf/exponential.hpp"
#include "wf/test_function.hpp"
#include "wf/rpu.hpp"
#include "wf/window.hpp"

namespace wf {

// Translation nodes of one level, in pulled coordinates (the coordinates in
// which the level's window lives). `regular_full` means the arithmetic
// lattice spacing*Z^d truncated only by the analysis engine's per-level
// Nyquist range; explicit point lists carry their own truncation window.
struct GridSpec {
  enum class Kind { regular_full, explicit_points };
  Kind kind = Kind::explicit_points;
  std::vector<double> spacing;  // regular_full
  std::optional<PointSet> points;
  double truncation_R = 0.0;    // explicit: max |x| kept

  static GridSpec regular(std::vector<double> spacing);
  static GridSpec explicit_list(PointSet pts);
  // materialize lattice points |x|_inf <= R (regular grids)
  PointSet materialize(int dim, double R) const;
};

// One scale/direction of the system. Frequency-domain atom:
//   g_{j,k}(w) = amp * h(B w) * e_{x_k}(B w),   x_k from `grid`.
struct AtomLevel {
  std::vector<int> label;
  Mat B, Binv;
  double abs_det_B = 1.0;
  Window h;                 // pulled-coordinate window
  Region support_omega;     // B^{-1}(supp h): the level's frequency support
  double amp = 1.0;
  GridSpec grid;
  FrameBounds bounds;       // exponential-frame bounds of {e_x chi_supp(h)}
  bool bounds_certified = false;

  AtomLevel(Window w, const Mat& pull, double amplitude, GridSpec g);
  cplx atom_value(const std::vector<double>& x_node, const std::vector<double>& omega) const;
};

// Closed-form time profile of the pulled window's inverse transform, when
// one is known (set by the gallery builders).
struct TimeProfile {
  enum class Kind { numeric, shannon_mirror, bspline_mirror } kind = Kind::numeric;
  int n = 0;  // bspline_mirror order
};

// A finite family {(j,k) -> atom} with its RPU, certified bounds and the
// regions/grids needed to validate and reconstruct.
struct AtomSystem {
  int dim = 0;
  std::vector<AtomLevel> levels;
  Rpu rpu;                       // {w -> h_j(B_j w)}
  double p_hat = 0.0, P_hat = 0.0;
  double rpu_probe_step = 0.0;
  Region working_region = Region::interval(0.0, 1.0);  // RPU certification domain
  std::vector<BoxD> safe_boxes;  // truncation-safe islands for test ensembles
  SafeSpec safe_spec;            // multiscale alternative to plain boxes
  BoxD grid_box;                 // recommended analysis grid
  std::vector<long> grid_dims;
  long canonical_log2 = 10;      // canonical pulled-grid resolution (2^k per axis)
  FrameBounds predicted;
  double m_inf = 0.0, M_sup = 0.0;  // per-level uniform extremes
  std::string provenance;
  std::string bound_mode;        // which glue arithmetic produced `predicted`
  TimeProfile time_profile;

  AtomSystem() : rpu(Rpu::explicit_list({Window::indicator(Region::interval(0, 1))}, {0})) {}
};

// --- builders -------------------------------------------------------------

// Bound arithmetic of the gluing results: `rpu_general` predicts (p m, P M),
// `level_set`/`covering` predict (c m, P M).
enum class GlueMode { rpu_general, level_set, covering };
std::string to_string(GlueMode m);

FrameBounds glue_predicted_bounds(GlueMode mode, double p_hat, double P_hat, double m_inf,
                                  double M_sup, double c = 0.0);

struct WaveletLevelSpec {
  std::vector<int> label;
  Mat A;  // invertible; B = (A^T)^{-1}
  GridSpec grid;
  std::optional<FrameBounds> bounds;  // certified bounds if known
};

struct WaveletFrameSpec {
  Window h = Window::indicator(Region::interval(0.0, 1.0));  // per-level frame region window
  std::vector<WaveletLevelSpec> levels;
  Region working_region = Region::interval(0.0, 1.0);        // certification target
  std::vector<BoxD> safe_boxes;
  SafeSpec safe_spec;
  double rpu_probe_step = 0.0;
  BoxD grid_box;
  std::vector<long> grid_dims;
  long canonical_log2 = 10;
  std::string provenance = "wavelet-frame";
  int covering_probe_count = 4096;
  uint64_t probe_seed = 777;
};

// Checks: invertible matrices, covering of the working region (probabilistic
// probe, witness on holes), RPU bounds, uniform per-level frame bounds.
// Prediction: (m p, M P).
AtomSystem build_wavelet_frame(const WaveletFrameSpec& spec);

struct TfLevelSpec {
  std::vector<int> label;
  Window h = Window::indicator(Region::interval(0.0, 1.0));  // omega-space window
  Region S = Region::interval(0.0, 1.0);  // declared region with supp h inside S
  GridSpec grid;        // omega-space translation nodes
  std::optional<FrameBounds> bounds;
};

struct TfFrameSpec {
  std::vector<TfLevelSpec> levels;
  bool measure_normalize = true;  // atoms mu(S_j)^{-1/2} h_j e_x
  Region working_region = Region::interval(0.0, 1.0);
  std::vector<BoxD> safe_boxes;
  SafeSpec safe_spec;
  double rpu_probe_step = 0.0;
  BoxD grid_box;
  std::vector<long> grid_dims;
  long canonical_log2 = 10;
  std::string provenance = "tf-atoms";
  GlueMode mode = GlueMode::rpu_general;
  double level_set_c = 0.0;  // level_set / covering modes
};

// Time-frequency atoms over a covering with an associated RPU. Support
// violations name the offending level and a witness point.
AtomSystem build_tf_atoms(const TfFrameSpec& spec);

// glue an RPU with per-level exponential frames (general form of the
// union-frame results); levels are taken in omega coordinates.
AtomSystem glue_frames(const Rpu& H, const std::vector<Region>& regions,
                       const std::vector<ExponentialSystem>& per_level, GlueMode mode,
                       double c, const Region& working_region,
                       const std::vector<BoxD>& safe_boxes);

// Closed-form time-domain evaluation of wavelet atoms when the window admits
// one (Shannon / B-spline profiles); falls back to a quadrature inverse
// transform otherwise.
cplx atom_eval_time(const AtomSystem& sys, size_t level, const std::vector<double>& node,
                    const std::vector<double>& x);

}  // namespace wf
