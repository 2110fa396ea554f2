#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "kal/oracle.hpp"
#include "kal/scaling.hpp"

using namespace kal;

TEST_SUITE("scaling") {
  TEST_CASE("exact power laws") {
    std::vector<std::pair<double, double>> s;
    for (double x : {1.0, 2.0, 4.0, 8.0}) s.emplace_back(x, 7.0 / (x * x));
    auto f = fit_exponent(s);
    CHECK(f.exponent == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(f.half_width < 1e-10);
    CHECK(std::exp(f.intercept) == doctest::Approx(7.0));
    s.clear();
    for (double x : {1.0, 3.0, 9.0}) s.emplace_back(x, std::sqrt(x));
    CHECK(fit_exponent(s).exponent == doctest::Approx(0.5));
  }

  TEST_CASE("noisy fits report a confidence half-width") {
    std::vector<std::pair<double, double>> s = {{1, 1.0}, {2, 0.55}, {4, 0.24}, {8, 0.13}, {16, 0.06}};
    const auto f = fit_exponent(s);
    CHECK(f.half_width > 0.0);
    CHECK(f.r_squared < 1.0);
    CHECK(std::abs(f.exponent + 1.0) < f.half_width + 0.1);
  }

  TEST_CASE("fit errors") {
    CHECK_THROWS(fit_exponent({{1, 1}, {2, 2}}));
    CHECK_THROWS(fit_exponent({{1, 1}, {2, -2}, {3, 1}}));
    CHECK_THROWS(fit_exponent({{1, 1}, {1, 2}, {1, 3}}));
    CHECK_THROWS_AS(fit_exponent_guarded({{1, 1}, {2, 2}, {3, 3}}, [](double x) { return x < 2.5; }, "x<2.5"),
                    std::domain_error);
  }

  TEST_CASE("lambda selection") {
    CHECK(select_lambda(2.0, 1.0) == 2.0);
    CHECK(select_lambda(1.0, 1.0) == 1.0);
    CHECK(select_lambda(6.0, 3.0) == select_lambda(2.0, 1.0));
    CHECK_THROWS(select_lambda(1.0, 0.0));
    CHECK(select_lambda_div(1.0) == 1.0);
    CHECK(select_lambda_div(8.0) == doctest::Approx(4.0).epsilon(1e-15));
  }

  TEST_CASE("golden-section minimizer on a known function") {
    // (log l - 1)^2 has its minimum at l = e.
    const double l = minimize_lambda([](double x) { return std::pow(std::log(x) - 1.0, 2); }, 1e-3, 1e3);
    CHECK(l == doctest::Approx(std::exp(1.0)).epsilon(1e-6));
    // |k| / l^{5/2} + sqrt(l) / |k| is minimized at (5 k^2)^{1/3}.
    for (double k : {2.0, 8.0, 16.0}) {
      const double m = minimize_lambda([&](double x) { return div_two_term(x, k); }, 1e-3, 1e4);
      CHECK(m == doctest::Approx(std::cbrt(5.0 * k * k)).epsilon(1e-6));
    }
  }

  TEST_CASE("oracle sweep gives the -1/2 law in its regime") {
    GridSpec s;
    s.wavenumbers = {{16.0, 0.0}};
    s.n_xi = 129;
    s.n_t = 4;
    const auto g = build_grid(s);
    const TestFunction psi(PsiKind::bump, 1.0);
    const auto d = gaussian_bump(g);
    std::vector<std::pair<double, double>> sweep;
    for (int e = -6; e <= -1; ++e) {
      const double l = std::ldexp(1.0, e);
      sweep.emplace_back(l, energy_g0_stochastic(g, d, VelocityField::identity(1), psi, l, 0));
    }
    const auto f = fit_exponent_guarded(sweep, [](double l) { return std::sqrt(l) <= 16.0 / 8.0; }, "sqrt(l)<=|k|/8");
    CHECK(f.exponent == doctest::Approx(-0.5).epsilon(0.1));
    CHECK(std::abs(f.exponent + 0.5) <= 0.05);
  }
}
