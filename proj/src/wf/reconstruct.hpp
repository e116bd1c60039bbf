#pragma once

#include "wf/analysis.hpp"
#include "wf/dual.hpp"

namespace wf {

struct ReconstructionOptions {
  DualSystem::Method dual_method = DualSystem::Method::canonical;
  double dual_rel_cutoff = 1e-8;
  double denom_threshold = 1e-12;  // RPU-hole detector on the division step
};

struct ReconstructionReport {
  double final_rel_error = -1.0;            // vs supplied ground truth
  std::vector<double> level_rel_errors;     // vs |h_j|^2 * truth
  std::vector<std::vector<int>> level_order;
  std::vector<std::string> level_engines;
  double denom_threshold = 0.0;
  std::vector<long> grid_dims;
};

// Reconstruction driver; per-level dual systems are built lazily and reused
// across calls (levels are independent, duals depend only on the node list).
class Reconstructor {
public:
  Reconstructor(const AtomSystem& sys, ReconstructionOptions opt = {});

  SampledField level(size_t li, const LevelCoeffs& lc, const BoxD& box,
                     const std::vector<long>& dims) const;
  SampledField full(const AnalysisResult& coeffs, const BoxD& box,
                    const std::vector<long>& dims, const SampledField* truth = nullptr,
                    ReconstructionReport* report = nullptr) const;

private:
  const AtomSystem& sys_;
  ReconstructionOptions opt_;
  mutable std::vector<std::shared_ptr<DualSystem>> duals_;
  std::vector<cplx> dual_coeffs(size_t li, const LevelCoeffs& lc) const;
};

// Per-level recovery of |h_j|^2 fhat from the level's coefficients.
SampledField reconstruct_level(const AtomSystem& sys, size_t level, const LevelCoeffs& lc,
                               const BoxD& box, const std::vector<long>& dims,
                               const ReconstructionOptions& opt = {});

// Sum the level outputs and divide by sum_j |h_j|^2. Points of the working
// region where the denominator drops below the threshold raise an RPU-hole
// error carrying a witness.
SampledField reconstruct_full(const AtomSystem& sys, const AnalysisResult& coeffs,
                              const BoxD& box, const std::vector<long>& dims,
                              const SampledField* truth = nullptr,
                              const ReconstructionOptions& opt = {},
                              ReconstructionReport* report = nullptr);

// Tight-frame shortcut f = (1/A0) sum c g; valid when predicted m == M.
SampledField reconstruct_tight(const AtomSystem& sys, const AnalysisResult& coeffs,
                               const BoxD& box, const std::vector<long>& dims);

}  // namespace wf
