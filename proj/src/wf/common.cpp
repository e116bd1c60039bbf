#include "wf/common.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

namespace wf {

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

namespace {

uint64_t splitmix64(uint64_t& x) {
  x += 0x9E3779B97F4A7C15ull;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(uint64_t seed) : seed_(seed) {
  uint64_t x = seed;
  for (auto& s : s_) s = splitmix64(x);
}

Rng Rng::stream(uint64_t stream_id) const {
  uint64_t x = seed_ ^ (0xD1B54A32D192ED03ull + stream_id * 0x9E3779B97F4A7C15ull);
  return Rng(x);
}

uint64_t Rng::next_u64() {
  uint64_t result = rotl(s_[1] * 5, 7) * 9;
  uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double a, double b) { return a + (b - a) * uniform01(); }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  do { u = uniform01(); } while (u <= 0.0);
  double v = uniform01();
  double r = std::sqrt(-2.0 * std::log(u));
  have_spare_ = true;
  spare_ = r * std::sin(TWO_PI * v);
  return r * std::cos(TWO_PI * v);
}

cplx Rng::complex_normal() {
  double re = normal();
  double im = normal();
  return cplx(re, im) / std::sqrt(2.0);
}

int Rng::uniform_int(int lo, int hi) {
  if (hi < lo) fail(ErrorCode::domain, "uniform_int: empty range");
  uint64_t span = uint64_t(hi - lo) + 1;
  return lo + int(next_u64() % span);
}

void parallel_for(size_t n, const std::function<void(size_t, size_t, size_t)>& body,
                  size_t chunks) {
  if (n == 0) return;
  chunks = std::min(chunks, n);
  unsigned hw = std::thread::hardware_concurrency();
  size_t workers = std::max<size_t>(1, std::min<size_t>(hw ? hw : 1, chunks));
  if (workers == 1) {
    for (size_t c = 0; c < chunks; ++c) {
      size_t b = c * n / chunks, e = (c + 1) * n / chunks;
      if (b < e) body(c, b, e);
    }
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  auto run = [&]() {
    for (;;) {
      size_t c = next.fetch_add(1);
      if (c >= chunks) break;
      size_t b = c * n / chunks, e = (c + 1) * n / chunks;
      if (b < e) body(c, b, e);
    }
  };
  pool.reserve(workers - 1);
  for (size_t w = 0; w + 1 < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

double parallel_sum(size_t n, const std::function<double(size_t)>& term) {
  const size_t chunks = 64;
  std::vector<double> partial(chunks, 0.0);
  parallel_for(n, [&](size_t c, size_t b, size_t e) {
    KahanSum acc;
    for (size_t i = b; i < e; ++i) acc.add(term(i));
    partial[c] = acc.value();
  }, chunks);
  KahanSum total;
  for (double p : partial) total.add(p);
  return total.value();
}

MinMax parallel_minmax(size_t n, const std::function<double(size_t)>& term) {
  if (n == 0) fail(ErrorCode::domain, "parallel_minmax: empty range");
  const size_t chunks = 64;
  std::vector<MinMax> partial(std::min(chunks, n));
  std::vector<char> used(std::min(chunks, n), 0);
  parallel_for(n, [&](size_t c, size_t b, size_t e) {
    MinMax mm;
    mm.min_value = mm.max_value = term(b);
    mm.argmin = mm.argmax = b;
    for (size_t i = b + 1; i < e; ++i) {
      double v = term(i);
      if (v < mm.min_value) { mm.min_value = v; mm.argmin = i; }
      if (v > mm.max_value) { mm.max_value = v; mm.argmax = i; }
    }
    partial[c] = mm;
    used[c] = 1;
  }, chunks);
  MinMax out;
  bool first = true;
  for (size_t c = 0; c < partial.size(); ++c) {
    if (!used[c]) continue;
    if (first) { out = partial[c]; first = false; continue; }
    if (partial[c].min_value < out.min_value) { out.min_value = partial[c].min_value; out.argmin = partial[c].argmin; }
    if (partial[c].max_value > out.max_value) { out.max_value = partial[c].max_value; out.argmax = partial[c].argmax; }
  }
  return out;
}

std::string format_point(const std::vector<double>& x) {
  std::string s = "(";
  char buf[64];
  for (size_t i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12g", x[i]);
    if (i) s += ", ";
    s += buf;
  }
  s += ")";
  return s;
}

}  // namespace wf
