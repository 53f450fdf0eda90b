// Multi-dimensional complex DFT on an m x ... x m grid, used by the
// fft-subset fast path of the measurement operator. Backed by FFTW with a
// process-wide plan cache; execution is reentrant.

#pragma once

#include <complex>
#include <vector>

namespace strig::detail {

// out[g] = sum_k in[k] e^{-2pi i <k,g>/m}  (sign = -1, "forward")
// out[g] = sum_k in[k] e^{+2pi i <k,g>/m}  (sign = +1, "backward")
// dims = {m, m, ..., m}; in/out have prod(dims) entries and may not alias.
void grid_dft(const std::vector<int>& dims, int sign,
              const std::complex<double>* in, std::complex<double>* out);

}  // namespace strig::detail
