#pragma once

#include <cstdint>
#include <vector>

#include "kal/brownian.hpp"
#include "kal/fields.hpp"

namespace kal {

enum class WeightMode { plain, thm41, thm41_general };

/// Spatial Fourier weight: |k|^{2s}, (|k| sqrt(l) / (sqrt(l) + |k|))^2, or
/// (|k|^{1/a} l^{1/2a} / (l^{1/2a} + |k|^{1/a}))^2.
struct SobolevWeight {
  WeightMode mode = WeightMode::plain;
  double s = 0.5;
  double lambda = 1.0;
  double alpha = 1.0;
  double operator()(double kmag) const;
};

/// sum_k weight(|k|) energy(k).
double weighted_space_energy(const std::vector<double>& energies, const std::vector<double>& kmags,
                             const SobolevWeight& weight);

/// Discrete temporal Gagliardo seminorm
///   sum_{i != j} w_i w_j |u_i - u_j|^2 / |t_i - t_j|^{1+2 beta}
/// with trapezoid cell weights w and the diagonal cells excluded. Uniform grids use an
/// FFT autocorrelation (O(n log n)); other grids the direct double sum.
double gagliardo_seminorm(const std::vector<Complex>& u, const std::vector<double>& times, double beta);
double gagliardo_seminorm_direct(const std::vector<Complex>& u, const std::vector<double>& times, double beta);

/// Contribution of the interval after the last node, where the (damped) samples are taken as
/// zero: 2 sum_i w_i |u_i|^2 (T_end - t_i)^{-2 beta} / (2 beta), T_end = t_n + dt/2.
double gagliardo_zero_tail(const std::vector<Complex>& u, const std::vector<double>& times, double beta);

/// Nonnegative physical initial datum on a periodic x-grid, one row per velocity node.
struct PhysicalDatum {
  double period = 1.0;
  std::size_t n_x = 0;
  std::vector<std::vector<double>> rows;  // rows[m][x]
};

/// Random sum of well-resolved periodized Gaussians per velocity node (all values >= 0).
PhysicalDatum random_nonnegative_datum(const SpectralGrid& grid, std::uint64_t seed, std::size_t n_x = 255,
                                       double period = 8.0);

struct PathwiseReport {
  bool l1_ok = true;
  bool linf_ok = true;
  double worst_l1_ratio = 0.0;    // max_t int |rho| / int int |f0|
  double worst_linf_ratio = 0.0;  // max_t sup |rho| / (||psi||_1 sup |f0|)
};

/// Transports each velocity row by B(t) a(xi) (exact Fourier shift on the torus), forms
/// rho_psi(x, t) = sum_m w_m psi_m f(x, xi_m, t) and checks the L1 and Linf bounds at every time node
/// with relative slack `slack`.
PathwiseReport pathwise_bounds_check(const SpectralGrid& grid, const PhysicalDatum& f0, const TestFunction& psi,
                                     const DrivingPath& path, const VelocityField& field, double slack = 1e-8);

}  // namespace kal
