#include "wf/reconstruct.hpp"

#include <cmath>

namespace wf {

Reconstructor::Reconstructor(const AtomSystem& sys, ReconstructionOptions opt)
    : sys_(sys), opt_(opt), duals_(sys.levels.size()) {}

std::vector<cplx> Reconstructor::dual_coeffs(size_t li, const LevelCoeffs& lc) const {
  if (lc.layout == LevelCoeffs::Layout::regular) {
    // full-range FFT layouts with unit stride realize a discretely tight
    // exponential family: duals are the atoms over prod L_i
    double Lprod = 1.0;
    for (size_t i = 0; i < lc.period.size(); ++i) {
      if (lc.stride[i] != 1)
        fail(ErrorCode::config,
             "reconstruct: regular layout with stride > 1; use explicit points");
      Lprod *= lc.period[i];
    }
    std::vector<cplx> d(lc.c.size());
    for (size_t i = 0; i < d.size(); ++i) d[i] = lc.c[i] / Lprod;
    return d;
  }
  if (!lc.nodes) fail(ErrorCode::config, "reconstruct: missing node list");
  if (!duals_[li]) {
    ExponentialSystem es(*lc.nodes, sys_.levels[li].h.support());
    duals_[li] = std::make_shared<DualSystem>(
        DualSystem::build(es, opt_.dual_method, opt_.dual_rel_cutoff));
  }
  return duals_[li]->apply(lc.c);
}

SampledField Reconstructor::level(size_t li, const LevelCoeffs& lc, const BoxD& box,
                                  const std::vector<long>& dims) const {
  const AtomLevel& lv = sys_.levels.at(li);
  SampledField out(box, dims);
  if (lc.c.empty()) return out;
  std::vector<cplx> d = dual_coeffs(li, lc);
  synthesize_level(sys_, li, lc, d, lv.abs_det_B / lv.amp, out);
  return out;
}

SampledField Reconstructor::full(const AnalysisResult& coeffs, const BoxD& box,
                                 const std::vector<long>& dims, const SampledField* truth,
                                 ReconstructionReport* report) const {
  if (coeffs.levels.size() != sys_.levels.size())
    fail(ErrorCode::config, "reconstruct: level count mismatch");
  SampledField num(box, dims);
  if (report) {
    report->denom_threshold = opt_.denom_threshold;
    report->grid_dims = dims;
    report->level_rel_errors.clear();
    report->level_order.clear();
    report->level_engines.clear();
  }
  for (size_t li = 0; li < sys_.levels.size(); ++li) {
    SampledField lvl = level(li, coeffs.levels[li], box, dims);
    if (report) {
      report->level_order.push_back(sys_.levels[li].label);
      report->level_engines.push_back(coeffs.levels[li].engine);
      if (truth) {
        double nume = 0.0, den = 0.0;
        for (size_t i = 0; i < lvl.size(); ++i) {
          std::vector<double> u = mat_apply(sys_.levels[li].B, lvl.coord(i));
          double h2 = sys_.levels[li].h.abs2(u);
          cplx want = h2 * truth->data()[i];
          nume += std::norm(lvl.data()[i] - want);
          den += std::norm(want);
        }
        report->level_rel_errors.push_back(den > 0.0 ? std::sqrt(nume / den)
                                                     : std::sqrt(nume));
      }
    }
    num.axpy(cplx(1.0, 0.0), lvl);
  }

  // Reconstruction is certified on the working region only; outside it the
  // truncated family underflows and the division would amplify truncation
  // noise, so the output is zero there.
  SampledField out(box, dims);
  size_t n = out.size();
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> omega = num.coord(i);
    if (!sys_.working_region.contains(omega)) continue;
    double denom = sys_.rpu.sum_squares(omega);
    if (denom < opt_.denom_threshold)
      fail(ErrorCode::numeric, "reconstruct: RPU hole inside the working region at " +
                                   format_point(omega));
    out.data()[i] = num.data()[i] / denom;
  }
  if (report && truth) report->final_rel_error = relative_l2_error(out, *truth);
  return out;
}

SampledField reconstruct_level(const AtomSystem& sys, size_t level, const LevelCoeffs& lc,
                               const BoxD& box, const std::vector<long>& dims,
                               const ReconstructionOptions& opt) {
  return Reconstructor(sys, opt).level(level, lc, box, dims);
}

SampledField reconstruct_full(const AtomSystem& sys, const AnalysisResult& coeffs,
                              const BoxD& box, const std::vector<long>& dims,
                              const SampledField* truth, const ReconstructionOptions& opt,
                              ReconstructionReport* report) {
  return Reconstructor(sys, opt).full(coeffs, box, dims, truth, report);
}

SampledField reconstruct_tight(const AtomSystem& sys, const AnalysisResult& coeffs,
                               const BoxD& box, const std::vector<long>& dims) {
  double A0 = 0.5 * (sys.predicted.m + sys.predicted.M);
  if (!(sys.predicted.M - sys.predicted.m <= 1e-9 * A0))
    fail(ErrorCode::precondition, "reconstruct_tight: system is not tight");
  SampledField out(box, dims);
  for (size_t li = 0; li < sys.levels.size(); ++li)
    synthesize_level(sys, li, coeffs.levels[li], coeffs.levels[li].c,
                     sys.levels[li].amp / A0, out);
  return out;
}

}  // namespace wf
