#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kal/brownian.hpp"
#include "kal/fields.hpp"

namespace kal {

/// rho_hat_psi(k, t_j) for one path; values are row-major [k][t].
struct AverageTrace {
  std::size_t n_k = 0;
  std::size_t n_t = 0;
  std::vector<Complex> values;
  std::string data_id;
  std::uint64_t path_id = 0;
  double lambda = 0.0;  // damping is never applied inside the solver; kept for provenance

  Complex operator()(std::size_t k, std::size_t j) const { return values[k * n_t + j]; }
  Complex& operator()(std::size_t k, std::size_t j) { return values[k * n_t + j]; }
};

/// Characteristics representation of the Fourier-side velocity average:
///   rho(k,t_j) = sum_xi w psi [ f0 e^{-i B_j k.a} + int_0^{t_j} g(s) e^{-i (B_j - B_s) k.a} ds ]
/// with the time integral by the trapezoid rule on the grid nodes. Divergence-form sources
/// are split as psi div h = -h.grad psi + div(psi h); the second part integrates by parts
/// in xi into  i k.h psi (B_j - B_s) e^{-i (B_j - B_s) k.xi}  (identity field only).
AverageTrace solve_trace(const SpectralGrid& grid, const KineticData& data, const VelocityField& field,
                         const DrivingPath& path, const TestFunction& psi);

struct TimeEnergy {
  std::vector<double> per_k;
  bool tail_truncated = false;  // e^{-2 lambda T} exceeded tail_tol
};

/// Trapezoid value of int_0^T e^{-2 lambda t} |rho(k,t)|^2 dt for each k.
TimeEnergy damped_time_energy(const AverageTrace& trace, const std::vector<double>& times, double lambda,
                              double tail_tol = 1e-6);

/// Horizon with e^{-2 lambda T} = tail.
double horizon_for(double lambda, double tail = 1e-6);

}  // namespace kal
