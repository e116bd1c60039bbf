#pragma once

#include <string>
#include <vector>

#include "wf/atom_system.hpp"
#include "wf/field.hpp"

namespace wf {

// Coefficients of one level. Regular layouts index the arithmetic lattice
// spacing .* k over k in prod [kmin_i, kmin_i + kcount_i); explicit layouts
// follow the level's point list. FFT-backed layouts keep their embed
// geometry so synthesis can run through the inverse transform exactly.
struct LevelCoeffs {
  enum class Layout { regular, explicit_points } layout = Layout::explicit_points;
  std::string engine;  // fft-aligned | fft-canonical | nudft-pulled | nudft-grid
  std::vector<double> spacing;
  std::vector<long> kmin, kcount;
  std::vector<cplx> c;
  double truncation_R = 0.0;

  // explicit layouts carry their node list so synthesis stays consistent
  std::optional<PointSet> nodes;

  // embed geometry (fft layouts)
  std::vector<long> sel_lo, sel_count;  // source-grid index window (aligned)
  std::vector<long> embed_M;
  std::vector<long> embed_off;          // embed index of the first selected sample
  std::vector<double> embed_origin;     // pulled coordinate of embed cell 0 midpoint - step/2
  std::vector<double> period;           // L per axis
  std::vector<long> stride;             // P0 = s * L per axis
  std::vector<double> delta;            // pulled grid step per axis

  double energy() const;
  size_t count() const { return c.size(); }
};

struct AnalysisResult {
  std::vector<LevelCoeffs> levels;
  double f_norm2 = 0.0;
  double coeff_energy() const;
  double ratio() const;  // coeff_energy / f_norm2
};

// Grid-quadrature analysis; chooses per level between the exact aligned FFT
// path (regular dyadic pullbacks) and direct nonuniform transforms with a
// Nyquist check.
AnalysisResult analyze_field(const AtomSystem& sys, const SampledField& f);

// Closed-form analysis on per-level canonical pulled grids.
AnalysisResult analyze_function(const AtomSystem& sys, const TestFunction& f);

struct EmpiricalReport {
  FrameBounds bounds;
  std::vector<double> ratios;  // per ensemble member
};

// ensemble generator respecting the system's safe region descriptor
std::vector<TestFunction> make_system_ensemble(const AtomSystem& sys, int count,
                                               uint64_t seed);

// min/max of sum |<f, g_{j,k}>|^2 / ||f||^2 over a random band-limited
// ensemble drawn inside the system's safe region.
EmpiricalReport empirical_frame_bounds(const AtomSystem& sys, int count, uint64_t seed,
                                       bool via_grid = true);

// S f = sum c_{j,k} g_{j,k} on f's grid.
SampledField frame_operator_apply(const AtomSystem& sys, const SampledField& f);

// --- synthesis helpers shared with reconstruction -------------------------

// Accumulate  scale_j * h(B w) * sum_k d_k e_{x_k}(B w)  into `out` for one
// level; `d` must follow the layout of `lc`.
void synthesize_level(const AtomSystem& sys, size_t level, const LevelCoeffs& lc,
                      const std::vector<cplx>& d, double scale, SampledField& out);

// Separable order-8 Lagrange interpolation on a uniform midpoint grid.
cplx interp_lagrange8(const std::vector<cplx>& grid, const std::vector<long>& dims,
                      const std::vector<double>& origin, const std::vector<double>& step,
                      const std::vector<double>& u);

}  // namespace wf
