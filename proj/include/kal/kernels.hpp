#pragma once

#include <complex>

namespace kal {

using Complex = std::complex<double>;

enum class KernelMethod { closed_form, quadrature };

struct KernelEval {
  double value = 0.0;
  KernelMethod method = KernelMethod::closed_form;
  double abs_error = 0.0;
};

/// E e^{i theta (B(t) - B(t-s))} = e^{-theta^2 s / 2}.
double char_one_time(double theta, double s);
/// Two-increment characteristic function e^{-s1 p1^2/2} e^{-(s2-s1) p2^2/2}, 0 <= s1 <= s2.
double char_two_time(double p1, double p2, double s1, double s2);

/// 2 / (4 lambda + q) = int_0^inf e^{-2 lambda t - t q / 2} dt.
double multiplier_stochastic(double lambda, double q);
/// 1 / (2 lambda - i r) = int_0^inf e^{-2 lambda t + i r t} dt.
Complex multiplier_deterministic(double lambda, double r);

/// int_R d eta / (4 lambda + kmag^2 |eta|^{2 alpha}).
KernelEval kernel_l1_norm(double lambda, double kmag, double alpha,
                          KernelMethod method = KernelMethod::quadrature);

struct BoundCheck {
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// int_0^inf |u (1 - u q)| e^{-u (4 lambda + q)/2} du against c0 / (4 lambda + q)^2.
BoundCheck div_moment_kernel(double lambda, double q, double c0);
/// Analytic supremum of value * (4 lambda + q)^2 over all (lambda, q); used to sanity-check c0.
double div_moment_sup();

/// F(a,b) = int_0^inf (e^{-(a+b)u} - e^{-au} - e^{-bu} + 1) u^{-(1+2 beta)} du, Re a, Re b >= 0.
Complex f_bracket(Complex a, Complex b, double beta);

/// J = int_0^inf (e^{-A u} - e^{-B1 u} - e^{-B2 u} + 1) u^{-(1+2 beta)} du for real A, B1, B2 > 0, beta < 1/2.
double bracket_integral(double A, double B1, double B2, double beta);

struct TechnicCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// Time-regularity kernel: lhs = 2 pi / (2 lambda + kdd^2) * J(2 lambda + kdd^2/2, lambda + kd1^2/2,
/// lambda + kd2^2/2); rhs = c_beta lambda^{2 beta - 1} (1 + kt^{4 beta}) / (2 + kdd^2 / lambda) with
/// kt = max(|kd1|, |kd2|, |kdd|) / sqrt(lambda).
TechnicCheck technic_kernel(double lambda, double kd1, double kd2, double kdd, double beta, double c_beta);
/// Shape factor of the rhs above without the constant.
double technic_shape(double lambda, double kd1, double kd2, double kdd, double beta);

/// Pair kernel of the expected temporal Gagliardo seminorm of e^{-lambda t} rho under Brownian
/// transport (full (s,t) domain): 2 J / (2 lambda + (th1 - th2)^2 / 2).
double gagliardo_pair_stochastic(double lambda, double th1, double th2, double beta);
/// Same for B(t) = t (trace phase e^{-i theta t}): 2 F(lambda + i th1, lambda - i th2) / (2 lambda + i (th1 - th2)).
Complex gagliardo_pair_deterministic(double lambda, double th1, double th2, double beta);

}  // namespace kal
