#pragma once

#include <vector>

#include "wf/common.hpp"

namespace wf {

// In-place complex FFT, sign = -1 forward (e^{-i2pi kn/N}), +1 inverse kernel
// (no 1/N normalization). Backed by FFTW with a process-wide plan cache; safe
// to call concurrently.
void fft(std::vector<cplx>& data, int sign);

// 2-D transform of row-major data (rows x cols), same sign convention.
void fft2(std::vector<cplx>& data, size_t rows, size_t cols, int sign);

}  // namespace wf
