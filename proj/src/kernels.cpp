#include "kal/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kal/quadrature.hpp"

namespace kal {

namespace {

constexpr double kTol = 1e-10;

void require_positive_lambda(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
}

// e^z - 1 without cancellation for small |z|.
Complex expm1c(Complex z) {
  const double x = z.real(), y = z.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

// int_U^inf e^{-z u} u^{-(1+2 beta)} du for Re z >= 0. The path is rotated onto the ray on
// which z t is real, so the oscillation becomes plain exponential decay:
//   e^{-z U} d int_0^inf e^{-|z| tau} (U + d tau)^{-(1+2 beta)} d tau,   d = conj(z) / |z|.
Complex exp_tail(Complex z, double U, double beta) {
  const double p = 1.0 + 2.0 * beta;
  const double r = std::abs(z);
  if (r == 0.0) return std::pow(U, -2.0 * beta) / (2.0 * beta);
  const Complex d = std::conj(z) / r;
  auto f = [&](double tau) { return std::exp(-r * tau) * std::pow(U + d * tau, -p); };
  auto res = quad::integrate_half_line(f, std::max(1.0 / r, 1e-300), kTol * std::pow(U, -2.0 * beta));
  return std::exp(-z * U) * d * res.value;
}

}  // namespace

double char_one_time(double theta, double s) {
  if (s < 0.0) throw std::invalid_argument("s must be >= 0");
  return std::exp(-0.5 * theta * theta * s);
}

double char_two_time(double p1, double p2, double s1, double s2) {
  if (s1 < 0.0 || s2 < s1) throw std::invalid_argument("need 0 <= s1 <= s2");
  return std::exp(-0.5 * s1 * p1 * p1) * std::exp(-0.5 * (s2 - s1) * p2 * p2);
}

double multiplier_stochastic(double lambda, double q) {
  require_positive_lambda(lambda);
  return 2.0 / (4.0 * lambda + q);
}

Complex multiplier_deterministic(double lambda, double r) {
  require_positive_lambda(lambda);
  return 1.0 / Complex(2.0 * lambda, -r);
}

KernelEval kernel_l1_norm(double lambda, double kmag, double alpha, KernelMethod method) {
  require_positive_lambda(lambda);
  if (!(kmag > 0.0)) throw std::invalid_argument("kmag must be positive");
  if (alpha < 1.0) throw std::invalid_argument("alpha must be >= 1");
  KernelEval out;
  out.method = method;
  if (method == KernelMethod::closed_form) {
    if (alpha != 1.0) throw std::invalid_argument("closed form only for alpha = 1");
    out.value = std::numbers::pi / (2.0 * std::sqrt(lambda) * kmag);
    return out;
  }
  // Split at the kernel's half-width so head and tail are both O(1) panels.
  const double width = std::pow(4.0 * lambda / (kmag * kmag), 1.0 / (2.0 * alpha));
  const double scale = width / (4.0 * lambda);
  auto f = [&](double eta) { return 1.0 / (4.0 * lambda + kmag * kmag * std::pow(eta, 2.0 * alpha)); };
  auto res = quad::integrate_half_line(f, width, kTol * scale, 1e-13);
  out.value = 2.0 * res.value;
  out.abs_error = 2.0 * res.error;
  return out;
}

BoundCheck div_moment_kernel(double lambda, double q, double c0) {
  require_positive_lambda(lambda);
  if (q < 0.0) throw std::invalid_argument("q must be >= 0");
  const double A = 4.0 * lambda + q;
  auto f = [&](double u) { return std::abs(u * (1.0 - u * q)) * std::exp(-0.5 * u * A); };
  const double scale = 1.0 / (A * A);
  double value = 0.0;
  if (q > 0.0) {
    // |1 - u q| has a kink at u = 1/q.
    const double kink = 1.0 / q;
    // When the kink sits far out in the decay tail a single panel can miss the mass near 0,
    // so walk out in doubling segments of the decay length.
    double lo = 0.0, hi = std::min(kink, 2.0 / A);
    while (lo < kink && lo < 100.0 / A) {
      value += quad::integrate(f, lo, hi, kTol * scale, 1e-13).value;
      lo = hi;
      hi = std::min(kink, 2.0 * hi);
    }
    value += quad::integrate_half_line([&](double v) { return f(kink + v); }, 2.0 / A, kTol * scale, 1e-13).value;
  } else {
    value = quad::integrate_half_line(f, 2.0 / A, kTol * scale, 1e-13).value;
  }
  BoundCheck out;
  out.value = value;
  out.bound = c0 / (A * A);
  out.pass = out.value <= out.bound;
  return out;
}

double div_moment_sup() {
  // With v = u A and x = q / A in [0, 1): value * A^2 = int v |1 - x v| e^{-v/2} dv
  // <= int v (1 + v) e^{-v/2} dv = 4 + 16.
  return 20.0;
}

Complex f_bracket(Complex a, Complex b, double beta) {
  if (a.real() < 0.0 || b.real() < 0.0) throw std::invalid_argument("f_bracket needs Re a, Re b >= 0");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0,1)");
  if (a == Complex{} && b == Complex{}) throw std::invalid_argument("f_bracket needs a or b nonzero");
  if (a == Complex{} || b == Complex{}) return Complex{};

  const double scale = std::max(std::abs(a), std::abs(b));
  const double U = 1.0 / scale;
  const double mag = std::pow(scale, 2.0 * beta);
  // Head: (1 - e^{-au})(1 - e^{-bu}) u^{-(1+2beta)} ~ ab u^{1-2beta}; u = U v^p, p = 1/(2-2beta) makes it smooth.
  const double p = 1.0 / (2.0 - 2.0 * beta);
  auto head = [&](double v) {
    if (v <= 0.0) return Complex{};
    const double u = U * std::pow(v, p);
    const Complex prod = expm1c(-a * u) * expm1c(-b * u);
    return prod * std::pow(u, -1.0 - 2.0 * beta) * (U * p * std::pow(v, p - 1.0));
  };
  Complex value = quad::integrate(head, 0.0, 1.0, kTol * mag, 1e-13).value;
  // Tail: expand the bracket and integrate each exponential along its decay ray.
  value += exp_tail(a + b, U, beta) - exp_tail(a, U, beta) - exp_tail(b, U, beta) + exp_tail(0.0, U, beta);
  return value;
}

double bracket_integral(double A, double B1, double B2, double beta) {
  if (!(beta > 0.0 && beta < 0.5)) throw std::invalid_argument("beta must lie in (0,1/2)");
  if (!(A > 0.0 && B1 > 0.0 && B2 > 0.0)) throw std::invalid_argument("rates must be positive");
  const double scale = std::max({A, B1, B2});
  const double U = 1.0 / scale;
  const double mag = std::pow(scale, 2.0 * beta);
  // Head integrand ~ (A - B1 - B2) u^{-2beta}; u = U v^p with p = 1/(1-2beta) removes the endpoint power.
  const double p = 1.0 / (1.0 - 2.0 * beta);
  auto head = [&](double v) {
    if (v <= 0.0) return 0.0;
    const double u = U * std::pow(v, p);
    const double br = std::expm1(-A * u) - std::expm1(-B1 * u) - std::expm1(-B2 * u);
    return br * std::pow(u, -1.0 - 2.0 * beta) * (U * p * std::pow(v, p - 1.0));
  };
  double value = quad::integrate(head, 0.0, 1.0, kTol * mag, 1e-13).value;
  value += (exp_tail(A, U, beta) - exp_tail(B1, U, beta) - exp_tail(B2, U, beta)).real() +
           std::pow(U, -2.0 * beta) / (2.0 * beta);
  return value;
}

TechnicCheck technic_kernel(double lambda, double kd1, double kd2, double kdd, double beta, double c_beta) {
  require_positive_lambda(lambda);
  if (!(beta > 0.0 && beta < 0.5)) throw std::invalid_argument("beta must lie in (0,1/2)");
  const double J = bracket_integral(2.0 * lambda + 0.5 * kdd * kdd, lambda + 0.5 * kd1 * kd1,
                                    lambda + 0.5 * kd2 * kd2, beta);
  TechnicCheck out;
  out.lhs = 2.0 * std::numbers::pi / (2.0 * lambda + kdd * kdd) * J;
  out.rhs = c_beta * technic_shape(lambda, kd1, kd2, kdd, beta);
  out.pass = std::abs(out.lhs) <= out.rhs;
  return out;
}

double technic_shape(double lambda, double kd1, double kd2, double kdd, double beta) {
  const double kt = std::max({std::abs(kd1), std::abs(kd2), std::abs(kdd)}) / std::sqrt(lambda);
  return std::pow(lambda, 2.0 * beta - 1.0) * (1.0 + std::pow(kt, 4.0 * beta)) / (2.0 + kdd * kdd / lambda);
}

double gagliardo_pair_stochastic(double lambda, double th1, double th2, double beta) {
  require_positive_lambda(lambda);
  const double d = th1 - th2;
  const double A = 2.0 * lambda + 0.5 * d * d;
  return 2.0 * bracket_integral(A, lambda + 0.5 * th1 * th1, lambda + 0.5 * th2 * th2, beta) / A;
}

Complex gagliardo_pair_deterministic(double lambda, double th1, double th2, double beta) {
  require_positive_lambda(lambda);
  const Complex F = f_bracket({lambda, th1}, {lambda, -th2}, beta);
  return 2.0 * F / Complex(2.0 * lambda, th1 - th2);
}

}  // namespace kal
