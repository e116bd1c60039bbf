#include "wf/field.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace wf {

SampledField::SampledField(BoxD box, std::vector<long> dims)
    : box_(std::move(box)), dims_(std::move(dims)) {
  if (box_.dim() == 0 || int(dims_.size()) != box_.dim())
    fail(ErrorCode::domain, "SampledField: dimension mismatch");
  size_t n = 1;
  for (long d : dims_) {
    if (d <= 0) fail(ErrorCode::domain, "SampledField: bad grid dims");
    n *= size_t(d);
  }
  data_.assign(n, cplx(0.0, 0.0));
}

SampledField SampledField::sample(const TestFunction& f, const BoxD& box,
                                  const std::vector<long>& dims) {
  SampledField out(box, dims);
  size_t n = out.size();
  parallel_for(n, [&](size_t, size_t b, size_t e) {
    for (size_t i = b; i < e; ++i) out.data_[i] = f.value(out.coord(i));
  });
  return out;
}

double SampledField::cell_volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= step(i);
  return v;
}

std::vector<double> SampledField::coord(size_t flat) const {
  std::vector<double> x(dim());
  size_t rest = flat;
  for (int i = dim() - 1; i >= 0; --i) {
    long ix = long(rest % size_t(dims_[i]));
    rest /= size_t(dims_[i]);
    x[i] = box_.lo[i] + (ix + 0.5) * step(i);
  }
  return x;
}

size_t SampledField::flat_index(const std::vector<long>& idx) const {
  size_t flat = 0;
  for (int i = 0; i < dim(); ++i) {
    if (idx[i] < 0 || idx[i] >= dims_[i]) fail(ErrorCode::domain, "flat_index: out of range");
    flat = flat * size_t(dims_[i]) + size_t(idx[i]);
  }
  return flat;
}

double SampledField::norm2() const {
  double s = parallel_sum(data_.size(), [&](size_t i) { return std::norm(data_[i]); });
  return s * cell_volume();
}

void SampledField::axpy(cplx alpha, const SampledField& other) {
  if (other.data_.size() != data_.size()) fail(ErrorCode::domain, "axpy: size mismatch");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += alpha * other.data_[i];
}

void SampledField::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write field: " + path);
  out << "# dims:";
  for (long d : dims_) out << " " << d;
  out << " box:";
  out.precision(17);
  for (int i = 0; i < dim(); ++i) out << " " << box_.lo[i] << " " << box_.hi[i];
  out << "\n";
  for (size_t i = 0; i < data_.size(); ++i) {
    auto x = coord(i);
    for (double c : x) out << c << ",";
    out << data_[i].real() << "," << data_[i].imag() << "\n";
  }
}

SampledField SampledField::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open field: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# dims:", 0) != 0)
    fail(ErrorCode::io, path + ": missing grid header");
  std::vector<long> dims;
  BoxD box;
  {
    std::stringstream ss(line.substr(7));
    std::string tok;
    std::vector<double> nums;
    bool in_box = false;
    std::vector<long> ds;
    while (ss >> tok) {
      if (tok == "box:") { in_box = true; continue; }
      if (!in_box) ds.push_back(std::stol(tok));
      else nums.push_back(std::stod(tok));
    }
    if (ds.empty() || nums.size() != 2 * ds.size()) fail(ErrorCode::io, path + ": bad header");
    dims = ds;
    for (size_t i = 0; i < ds.size(); ++i) {
      box.lo.push_back(nums[2 * i]);
      box.hi.push_back(nums[2 * i + 1]);
    }
  }
  SampledField out(box, dims);
  size_t i = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (i >= out.size()) fail(ErrorCode::io, path + ": too many samples");
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    if (int(vals.size()) != out.dim() + 2) fail(ErrorCode::io, path + ": bad row");
    out.data_[i] = cplx(vals[out.dim()], vals[out.dim() + 1]);
    ++i;
  }
  if (i != out.size()) fail(ErrorCode::io, path + ": sample count mismatch");
  return out;
}

namespace {
constexpr char kMagic[4] = {'W', 'F', 'G', '1'};
}

void SampledField::write_binary(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write field: " + path);
  out.write(kMagic, 4);
  uint32_t d = uint32_t(dim());
  out.write(reinterpret_cast<const char*>(&d), 4);
  for (long n : dims_) {
    uint32_t v = uint32_t(n);
    out.write(reinterpret_cast<const char*>(&v), 4);
  }
  for (int i = 0; i < dim(); ++i) {
    double lo = box_.lo[i], hi = box_.hi[i];
    out.write(reinterpret_cast<const char*>(&lo), 8);
    out.write(reinterpret_cast<const char*>(&hi), 8);
  }
  for (const cplx& z : data_) {
    float re = float(z.real()), im = float(z.imag());
    out.write(reinterpret_cast<const char*>(&re), 4);
    out.write(reinterpret_cast<const char*>(&im), 4);
  }
}

SampledField SampledField::read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open field: " + path);
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) fail(ErrorCode::io, path + ": not a WFG1 grid");
  uint32_t d = 0;
  in.read(reinterpret_cast<char*>(&d), 4);
  if (d == 0 || d > 8) fail(ErrorCode::io, path + ": bad dimension");
  std::vector<long> dims(d);
  for (auto& n : dims) {
    uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    n = long(v);
  }
  BoxD box;
  for (uint32_t i = 0; i < d; ++i) {
    double lo = 0, hi = 0;
    in.read(reinterpret_cast<char*>(&lo), 8);
    in.read(reinterpret_cast<char*>(&hi), 8);
    box.lo.push_back(lo);
    box.hi.push_back(hi);
  }
  SampledField out(box, dims);
  for (auto& z : out.data_) {
    float re = 0, im = 0;
    in.read(reinterpret_cast<char*>(&re), 4);
    in.read(reinterpret_cast<char*>(&im), 4);
    z = cplx(re, im);
  }
  if (!in) fail(ErrorCode::io, path + ": truncated grid");
  return out;
}

SampledField SampledField::read_auto(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open field: " + path);
  char magic[4] = {0, 0, 0, 0};
  in.read(magic, 4);
  in.close();
  if (std::memcmp(magic, kMagic, 4) == 0) return read_binary(path);
  return read_csv(path);
}

double relative_l2_error(const SampledField& got, const SampledField& want) {
  if (got.size() != want.size()) fail(ErrorCode::domain, "relative_l2_error: size mismatch");
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < got.size(); ++i) {
    num += std::norm(got.data()[i] - want.data()[i]);
    den += std::norm(want.data()[i]);
  }
  if (den == 0.0) return std::sqrt(num);
  return std::sqrt(num / den);
}

}  // namespace wf
