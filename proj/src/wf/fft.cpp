#include "wf/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace wf {

namespace {

// FFTW plan creation is not thread-safe; executions via fftw_execute_dft on
// caller-owned arrays are. Plans are cached per (rank, dims, sign).
std::mutex plan_mutex;

fftw_plan get_plan_1d(size_t n, int sign) {
  static std::map<std::pair<size_t, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<cplx> tmp(n);
  fftw_plan p = fftw_plan_dft_1d(int(n), reinterpret_cast<fftw_complex*>(tmp.data()),
                                 reinterpret_cast<fftw_complex*>(tmp.data()),
                                 sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, p);
  return p;
}

fftw_plan get_plan_2d(size_t rows, size_t cols, int sign) {
  static std::map<std::tuple<size_t, size_t, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_tuple(rows, cols, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<cplx> tmp(rows * cols);
  fftw_plan p = fftw_plan_dft_2d(int(rows), int(cols),
                                 reinterpret_cast<fftw_complex*>(tmp.data()),
                                 reinterpret_cast<fftw_complex*>(tmp.data()),
                                 sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, p);
  return p;
}

}  // namespace

void fft(std::vector<cplx>& data, int sign) {
  if (data.empty()) return;
  fftw_plan p = get_plan_1d(data.size(), sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data.data()),
                   reinterpret_cast<fftw_complex*>(data.data()));
}

void fft2(std::vector<cplx>& data, size_t rows, size_t cols, int sign) {
  if (data.empty()) return;
  if (data.size() != rows * cols) fail(ErrorCode::domain, "fft2: size mismatch");
  fftw_plan p = get_plan_2d(rows, cols, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data.data()),
                   reinterpret_cast<fftw_complex*>(data.data()));
}

}  // namespace wf
