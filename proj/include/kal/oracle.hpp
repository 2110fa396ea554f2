#pragma once

#include <limits>
#include <string>
#include <vector>

#include "kal/fields.hpp"
#include "kal/kernels.hpp"

namespace kal {

inline constexpr double kInfiniteHorizon = std::numeric_limits<double>::infinity();

/// sum_{m,n} c_m conj(c_n) K(theta_m - theta_n). When theta is affine in m (uniform
/// one-dimensional nodes) and the grid is large, the Toeplitz structure is used:
/// sum_d r[d] K(d delta) with r the autocorrelation of c.
template <class Kernel>
Complex pair_sum(const std::vector<Complex>& c, const std::vector<double>& theta, bool affine, Kernel K);

/// True when k.a(xi_m) is affine in the node index (identity curve on uniform 1-d nodes).
bool affine_phases(const SpectralGrid& grid, const VelocityField& field);

/// E int_0^T e^{-2 lambda t} |rho(k,t)|^2 dt for g = 0 under Brownian transport:
/// sum c_m conj(c_n) (1 - e^{-a T}) / a, a = 2 lambda + |k.(a_m - a_n)|^2 / 2.
/// With T = inf this is the double sum against multiplier_stochastic. lambda = 0 needs finite T.
double energy_g0_stochastic(const SpectralGrid& grid, const KineticData& data, const VelocityField& field,
                            const TestFunction& psi, double lambda, std::size_t k,
                            double horizon = kInfiniteHorizon);

/// Same for B(t) = t: Re sum c_m conj(c_n) / (2 lambda + i (theta_m - theta_n)).
double energy_g0_deterministic(const SpectralGrid& grid, const KineticData& data, const VelocityField& field,
                               const TestFunction& psi, double lambda, std::size_t k,
                               double horizon = kInfiniteHorizon);

/// f0 = 0, plain source g on the grid:
///   2 Re sum_{m,n} int W_mn(tau) G_m(tau) H_n(tau) d tau,
///   H_n(tau) = int_0^tau e^{-(tau - s) theta_n^2 / 2} conj(G_n(s)) ds,
///   W_mn(tau) = e^{-2 lambda tau} (1 - e^{-(T - tau) a_mn}) / a_mn,  a_mn = 2 lambda + (theta_m - theta_n)^2 / 2,
/// with G_m = w_m psi_m g(k, m, .) and both time integrals by the trapezoid rule on the grid.
double energy_f0zero_stochastic(const SpectralGrid& grid, const KineticData& data, const VelocityField& field,
                                const TestFunction& psi, double lambda, std::size_t k,
                                double horizon = kInfiniteHorizon);

/// Expected temporal Gagliardo seminorm (full (s,t) quadrant) of e^{-lambda t} rho(k,.), g = 0.
double gagliardo_g0(const SpectralGrid& grid, const KineticData& data, const VelocityField& field,
                    const TestFunction& psi, double lambda, double beta, std::size_t k);
/// Same for B(t) = t; beta may reach 1/2 and beyond.
double gagliardo_g0_deterministic(const SpectralGrid& grid, const KineticData& data, const VelocityField& field,
                                  const TestFunction& psi, double lambda, double beta, std::size_t k);

/// Squared L2 norms of the data entering the right-hand sides, all on the grid and over [0, T_grid].
struct DataNorms {
  double psi_f0 = 0.0;      // sum w |psi f0|^2
  double psi_g = 0.0;       // sum w int |psi g|^2
  double psi_g_damped = 0.0;  // sum w int e^{-2 lambda t} |psi g|^2
  double psi_h = 0.0;       // sum w int |psi h|^2
  double grad_psi_h = 0.0;  // sum w int |grad psi . h|^2
  double psi_f = 0.0;       // E sum w int |psi f(t)|^2 (the solution itself)
};

DataNorms data_norms(const SpectralGrid& grid, const KineticData& data, const VelocityField& field,
                     const TestFunction& psi, std::size_t k, double lambda = 0.0);

struct DivBound {
  double two_term = 0.0;    // (|k| / lambda^{5/2} + sqrt(lambda) / |k|) (||psi h||^2 + ||psi f||^2)
  double grad_term = 0.0;   // ||grad psi . h||^2 / (lambda^{3/2} |k|)
  double total = 0.0;       // two_term + grad_term (the constant is applied by the caller)
};

/// Shape of the divergence-case bound at damping lambda (use lambda = |k|^{2/3} for the balanced choice).
DivBound div_case_bound(const DataNorms& norms, double lambda, double kmag);

}  // namespace kal

#include "kal/oracle_impl.hpp"
