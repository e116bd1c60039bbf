#pragma once

#include <string>
#include <vector>

#include "wf/common.hpp"
#include "wf/region.hpp"
#include "wf/test_function.hpp"

namespace wf {

// Complex samples on a uniform midpoint grid over a box: sample i sits at
// lo + (i + 1/2) * step per axis, row-major storage (last axis fastest).
// Sums against the cell volume realize the midpoint quadrature rule.
class SampledField {
public:
  SampledField(BoxD box, std::vector<long> dims);

  static SampledField sample(const TestFunction& f, const BoxD& box,
                             const std::vector<long>& dims);

  int dim() const { return box_.dim(); }
  const BoxD& box() const { return box_; }
  const std::vector<long>& dims() const { return dims_; }
  double step(int axis) const { return box_.width(axis) / double(dims_[axis]); }
  double cell_volume() const;
  size_t size() const { return data_.size(); }

  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& data() { return data_; }

  std::vector<double> coord(size_t flat) const;
  size_t flat_index(const std::vector<long>& idx) const;

  double norm2() const;  // quadrature ||.||^2
  void axpy(cplx alpha, const SampledField& other);

  // one row per sample: coordinates..., re, im
  void write_csv(const std::string& path) const;
  static SampledField read_csv(const std::string& path);
  // binary grid: magic "WFG1", u32 dim, u32 dims[], f64 lo[], f64 hi[],
  // row-major complex64 (float32 re, float32 im), little-endian
  void write_binary(const std::string& path) const;
  static SampledField read_binary(const std::string& path);
  static SampledField read_auto(const std::string& path);

private:
  BoxD box_;
  std::vector<long> dims_;
  std::vector<cplx> data_;
};

double relative_l2_error(const SampledField& got, const SampledField& want);

}  // namespace wf
