#pragma once

#include <complex>
#include <vector>

namespace kal {

/// r[d] = sum_m c[m + d] conj(c[m]) for d = 0..n-1, via zero-padded FFT (FFTW).
/// Negative lags follow from r[-d] = conj(r[d]). Safe to call from several threads.
std::vector<std::complex<double>> autocorrelation(const std::vector<std::complex<double>>& c);

/// In-place unnormalized DFT: X[q] = sum_j x[j] e^{-+2 pi i j q / n} (sign - forward, + inverse).
void dft_inplace(std::vector<std::complex<double>>& x, bool inverse);

/// Direct O(n^2) version of the same sum; reference for tests and small inputs.
std::vector<std::complex<double>> autocorrelation_direct(const std::vector<std::complex<double>>& c);

}  // namespace kal
