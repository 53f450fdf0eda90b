#include "strig/fft_grid.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace strig::detail {

namespace {

// FFTW plan creation is not thread safe; execution via fftw_execute_dft is.
// Plans are created once per (dims, sign) with FFTW_ESTIMATE (deterministic
// plan choice) and FFTW_UNALIGNED (valid for arbitrary caller buffers), and
// kept for the lifetime of the process.
class PlanCache {
 public:
  static fftw_plan get(const std::vector<int>& dims, int sign) {
    static PlanCache cache;
    std::lock_guard<std::mutex> lock(cache.mutex_);
    const Key key{dims, sign};
    auto it = cache.plans_.find(key);
    if (it != cache.plans_.end()) return it->second;

    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    fftw_complex* scratch = fftw_alloc_complex(total);
    if (!scratch) throw std::bad_alloc();
    fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()),
                                   dims.data(), scratch, scratch, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (!plan) throw std::runtime_error("grid_dft: fftw plan creation failed");
    cache.plans_.emplace(key, plan);
    return plan;
  }

 private:
  using Key = std::pair<std::vector<int>, int>;
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

}  // namespace

void grid_dft(const std::vector<int>& dims, int sign,
              const std::complex<double>* in, std::complex<double>* out) {
  const int fftw_sign = sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan = PlanCache::get(dims, fftw_sign);
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex*>(
                       const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace strig::detail
