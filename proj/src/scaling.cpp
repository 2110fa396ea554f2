#include "kal/scaling.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace kal {

ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& sweep) {
  if (sweep.size() < 3) throw std::invalid_argument("fit needs at least 3 points");
  const std::size_t n = sweep.size();
  std::vector<double> X(n), Y(n);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [x, y] = sweep[i];
    if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("fit needs positive data");
    X[i] = std::log(x);
    Y[i] = std::log(y);
    mx += X[i];
    my += Y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
    syy += (Y[i] - my) * (Y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit needs distinct x values");
  ScalingFit f;
  f.sweep = sweep;
  f.exponent = sxy / sxx;
  f.intercept = my - f.exponent * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = Y[i] - (f.intercept + f.exponent * X[i]);
    sse += r * r;
  }
  f.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - sse / syy) : 1.0;
  if (n > 2) {
    const double se = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
    boost::math::students_t dist(static_cast<double>(n - 2));
    f.half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * se;
  }
  return f;
}

ScalingFit fit_exponent_guarded(const std::vector<std::pair<double, double>>& sweep,
                                const std::function<bool(double)>& in_regime, const char* regime_name) {
  for (const auto& [x, y] : sweep)
    if (!in_regime(x))
      throw std::domain_error(std::string("sweep point outside regime ") + regime_name + ": x = " + std::to_string(x));
  return fit_exponent(sweep);
}

double select_lambda(double norm_g, double norm_f) {
  if (!(norm_f > 0.0) || !(norm_g > 0.0)) throw std::invalid_argument("norms must be positive");
  return norm_g / norm_f;
}

double select_lambda_div(double kmag) {
  if (!(kmag > 0.0)) throw std::invalid_argument("|k| must be positive");
  return std::cbrt(kmag * kmag);
}

double div_two_term(double lambda, double kmag) { return kmag / std::pow(lambda, 2.5) + std::sqrt(lambda) / kmag; }

double minimize_lambda(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("need 0 < lo < hi");
  double a = std::log(lo), b = std::log(hi);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(std::exp(x1)), f2 = f(std::exp(x2));
  while (b - a > rel_tol) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1; x1 = b - g * (b - a); f1 = f(std::exp(x1));
    } else {
      a = x1; x1 = x2; f1 = f2; x2 = a + g * (b - a); f2 = f(std::exp(x2));
    }
  }
  return std::exp(0.5 * (a + b));
}

}  // namespace kal
