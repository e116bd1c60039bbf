#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wf {

using cplx = std::complex<double>;
using std::size_t;

inline constexpr double PI = 3.141592653589793238462643383279502884;
inline constexpr double TWO_PI = 2.0 * PI;

// Error taxonomy shared by the whole library and mirrored by the C API codes.
enum class ErrorCode {
  domain = 1,        // invalid argument / math domain
  precondition,      // a stated hypothesis of a construction failed
  construction,      // a builder could not certify its output
  numeric,           // non-finite values, quadrature failure
  resolution,        // grid too coarse for the requested oscillation
  conditioning,      // Gram matrix numerically singular
  evaluation,        // pointwise evaluation failure (carries the point)
  config,            // inconsistent run configuration
  io,                // file parse / write problems
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

// Deterministic RNG (splitmix64 seeded xoshiro256**). Distributions are
// hand-rolled so streams are identical across standard libraries.
class Rng {
public:
  explicit Rng(uint64_t seed);
  // Independent substream; used for per-level jitter etc.
  Rng stream(uint64_t stream_id) const;

  uint64_t next_u64();
  double uniform01();                       // [0, 1)
  double uniform(double a, double b);
  double normal();                          // standard normal, Box-Muller
  cplx complex_normal();
  int uniform_int(int lo, int hi);          // inclusive

private:
  uint64_t s_[4];
  uint64_t seed_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Fixed-chunk parallel map: the index range is split into a fixed number of
// chunks independent of the worker count, so reductions that combine chunk
// results in order are deterministic regardless of parallelism.
void parallel_for(size_t n, const std::function<void(size_t, size_t, size_t)>& body,
                  size_t chunks = 64);

// Ordered compensated reduction over fixed chunks.
double parallel_sum(size_t n, const std::function<double(size_t)>& term);

struct MinMax {
  double min_value = 0.0;
  double max_value = 0.0;
  size_t argmin = 0;
  size_t argmax = 0;
};
MinMax parallel_minmax(size_t n, const std::function<double(size_t)>& term);

// Compensated (Kahan) accumulator.
class KahanSum {
public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

private:
  double s_ = 0.0;
  double c_ = 0.0;
};

std::string format_point(const std::vector<double>& x);

}  // namespace wf
