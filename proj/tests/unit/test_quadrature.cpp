#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "kal/quadrature.hpp"

using namespace kal;

TEST_SUITE("quadrature") {
  TEST_CASE("polynomials are exact on one panel") {
    auto r = quad::integrate([](double x) { return x * x * x * x - 3.0 * x; }, 0.0, 2.0);
    CHECK(r.value == doctest::Approx(32.0 / 5.0 - 6.0).epsilon(1e-14));
    CHECK(r.panels == 1);
  }

  TEST_CASE("endpoint singularity converges under subdivision") {
    auto r = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10, 0.0, 1000);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
  }

  TEST_CASE("half line with algebraic tail") {
    auto r = quad::integrate_half_line([](double x) { return 1.0 / (1.0 + x * x); });
    CHECK(r.value == doctest::Approx(std::numbers::pi / 2).epsilon(1e-10));
    auto e = quad::integrate_half_line([](double x) { return std::exp(-3.0 * x); }, 0.3);
    CHECK(e.value == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  }

  TEST_CASE("complex integrand") {
    using C = std::complex<double>;
    auto r = quad::integrate([](double x) { return std::exp(C(0.0, 5.0 * x)); }, 0.0, 1.0);
    const C exact = (std::exp(C(0.0, 5.0)) - 1.0) / C(0.0, 5.0);
    CHECK(std::abs(r.value - exact) < 1e-12);
  }

  TEST_CASE("error estimate is nonnegative") {
    auto r = quad::integrate([](double x) { return std::sin(30.0 * x); }, 0.0, 3.0);
    CHECK(r.error >= 0.0);
    CHECK(r.value == doctest::Approx((1.0 - std::cos(90.0)) / 30.0).epsilon(1e-10));
  }
}
