// Shared helpers for the unit suites. Oracle computations here derive
// everything from sampling points and frequency lists directly, independent
// of the operator fast paths they are checking.

#pragma once

#include <cmath>
#include <complex>
#include <memory>

#include "strig/measurement.hpp"
#include "strig/spectrum.hpp"

namespace testutil {

using strig::Complex;
using strig::Index;

// e^{i k.x} straight from the definition.
inline Complex entry_oracle(const strig::SamplingSet& x,
                            const strig::FrequencySet& gamma, Index j, Index k) {
  double phase = 0.0;
  const auto f = gamma.freq(k);
  for (int i = 0; i < gamma.dim(); ++i) phase += double(f[i]) * x.coord(j, i);
  return std::polar(1.0, phase);
}

inline Eigen::MatrixXcd dense_oracle(const strig::SamplingSet& x,
                                     const strig::FrequencySet& gamma) {
  Eigen::MatrixXcd a(x.size(), gamma.size());
  for (Index j = 0; j < x.size(); ++j)
    for (Index k = 0; k < gamma.size(); ++k) a(j, k) = entry_oracle(x, gamma, j, k);
  return a;
}

inline std::shared_ptr<const strig::FrequencySet> centered(Index d) {
  return std::make_shared<strig::FrequencySet>(strig::FrequencySet::centered_line(d));
}

}  // namespace testutil
