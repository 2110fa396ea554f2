#include "kal/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace kal {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// One forward/backward plan pair per transform size and thread. FFTW's planner is not
// reentrant, so creation and destruction are serialized; execution is not.
struct PlanPair {
  int n = 0;
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit PlanPair(int size) : n(size) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    buf = fftw_alloc_complex(n);
    fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~PlanPair() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(buf);
  }
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;
};

PlanPair& plans_for(int n) {
  thread_local std::map<int, std::unique_ptr<PlanPair>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<PlanPair>(n);
  return *slot;
}

}  // namespace

std::vector<std::complex<double>> autocorrelation(const std::vector<std::complex<double>>& c) {
  const int n = static_cast<int>(c.size());
  if (n == 0) return {};
  int L = 1;
  while (L < 2 * n) L <<= 1;
  PlanPair& p = plans_for(L);
  std::memset(p.buf, 0, sizeof(fftw_complex) * L);
  for (int i = 0; i < n; ++i) {
    p.buf[i][0] = c[i].real();
    p.buf[i][1] = c[i].imag();
  }
  fftw_execute(p.fwd);
  for (int i = 0; i < L; ++i) {
    p.buf[i][0] = p.buf[i][0] * p.buf[i][0] + p.buf[i][1] * p.buf[i][1];
    p.buf[i][1] = 0.0;
  }
  fftw_execute(p.bwd);
  std::vector<std::complex<double>> r(n);
  for (int d = 0; d < n; ++d) r[d] = {p.buf[d][0] / L, p.buf[d][1] / L};
  return r;
}

void dft_inplace(std::vector<std::complex<double>>& x, bool inverse) {
  const int n = static_cast<int>(x.size());
  if (n == 0) return;
  PlanPair& p = plans_for(n);
  std::memcpy(p.buf, x.data(), sizeof(fftw_complex) * n);
  fftw_execute(inverse ? p.bwd : p.fwd);
  std::memcpy(static_cast<void*>(x.data()), p.buf, sizeof(fftw_complex) * n);
}

std::vector<std::complex<double>> autocorrelation_direct(const std::vector<std::complex<double>>& c) {
  const std::size_t n = c.size();
  std::vector<std::complex<double>> r(n);
  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t m = 0; m + d < n; ++m) r[d] += c[m + d] * std::conj(c[m]);
  return r;
}

}  // namespace kal
