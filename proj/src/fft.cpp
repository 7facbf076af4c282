#include "gev/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "gev/errors.hpp"

namespace gev {

namespace {

// FFTW planning is not thread safe; execution of a finished plan on new
// arrays is. Plans are created once with FFTW_ESTIMATE so results do not
// depend on timing measurements.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, bool inverse) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_pair(n, inverse);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* a = fftw_alloc_complex(n);
    auto* b = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), a, b, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
    if (plan == nullptr) throw Error("fft_error", "FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void fft(const cplx* in, cplx* out, std::size_t n, bool inverse) {
  if (n == 0) return;
  fftw_plan plan = cache().get(n, inverse);
  if (in == out) {
    std::vector<cplx> tmp(in, in + n);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(tmp.data()), reinterpret_cast<fftw_complex*>(out));
    return;
  }
  // FFTW does not write to `in` for out-of-place transforms.
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

std::vector<cplx> fft(const std::vector<cplx>& in, bool inverse) {
  std::vector<cplx> out(in.size());
  fft(in.data(), out.data(), in.size(), inverse);
  return out;
}

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

double fft_frequency(std::size_t k, std::size_t n, double dt) {
  const auto kk = static_cast<double>(k);
  const auto nn = static_cast<double>(n);
  return (2 * k < n ? kk : kk - nn) / (nn * dt);
}

}  // namespace gev
