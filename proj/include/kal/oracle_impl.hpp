#pragma once

#include "kal/fft.hpp"

namespace kal {

template <class Kernel>
Complex pair_sum(const std::vector<Complex>& c, const std::vector<double>& theta, bool affine, Kernel K) {
  const std::size_t n = c.size();
  if (n == 0) return {};
  if (affine && n >= 256) {
    const double delta = n > 1 ? (theta[n - 1] - theta[0]) / static_cast<double>(n - 1) : 0.0;
    const auto r = autocorrelation(c);
    Complex s = r[0] * Complex(K(0.0));
    for (std::size_t d = 1; d < n; ++d) {
      const double x = delta * static_cast<double>(d);
      s += r[d] * Complex(K(x)) + std::conj(r[d]) * Complex(K(-x));
    }
    return s;
  }
  Complex s{};
  for (std::size_t m = 0; m < n; ++m) {
    if (c[m] == Complex{}) continue;
    for (std::size_t q = 0; q < n; ++q) {
      if (c[q] == Complex{}) continue;
      s += c[m] * std::conj(c[q]) * Complex(K(theta[m] - theta[q]));
    }
  }
  return s;
}

}  // namespace kal
