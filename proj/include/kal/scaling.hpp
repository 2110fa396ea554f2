#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace kal {

struct ScalingFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double half_width = 0.0;  // 95% confidence half-width of the slope
  std::vector<std::pair<double, double>> sweep;
};

/// Ordinary least squares of log y on log x. Needs >= 3 points, all positive.
ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& sweep);

/// Regime guard: throws std::domain_error if any sweep point violates `in_regime(x)`.
ScalingFit fit_exponent_guarded(const std::vector<std::pair<double, double>>& sweep,
                                const std::function<bool(double)>& in_regime, const char* regime_name);

/// lambda = ||g|| / ||f||.
double select_lambda(double norm_g, double norm_f);
/// lambda = |k|^{2/3}.
double select_lambda_div(double kmag);

/// |k| / lambda^{5/2} + sqrt(lambda) / |k|.
double div_two_term(double lambda, double kmag);

/// Golden-section minimization of f over log(lambda) in [lo, hi].
double minimize_lambda(const std::function<double(double)>& f, double lo, double hi, double rel_tol = 1e-12);

}  // namespace kal
