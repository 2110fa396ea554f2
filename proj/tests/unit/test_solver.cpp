#include <doctest.h>

#include <cmath>

#include "kal/quadrature.hpp"
#include "kal/solver.hpp"

using namespace kal;

namespace {

SpectralGrid make(int n_xi, int n_t, double T, std::vector<Vec2> ks = {{1.0, 0.0}}, double lo = -1.0,
                  double hi = 1.0) {
  GridSpec s;
  s.wavenumbers = std::move(ks);
  s.n_xi = n_xi;
  s.n_t = n_t;
  s.horizon = T;
  s.xi_lo = lo;
  s.xi_hi = hi;
  return build_grid(s);
}

const TestFunction kBump(PsiKind::bump, 1.0);
const VelocityField kId = VelocityField::identity(1);

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("frozen path keeps the initial average") {
    const auto g = make(9, 16, 2.0, {{1.0, 0.0}, {3.0, 0.0}});
    const auto d = gaussian_bump(g);
    const auto tr = solve_trace(g, d, kId, frozen_path(g), kBump);
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t j = 0; j < g.n_t(); ++j) CHECK(std::abs(tr(k, j) - tr(k, 0)) == 0.0);
  }

  TEST_CASE("single node has constant modulus") {
    const auto g = make(9, 32, 3.0);
    const auto d = two_point(g, 3, 3, Complex(0.7, 0.2), 0.0);
    const auto tr = solve_trace(g, d, kId, sample_path(g, 17), kBump);
    const double m0 = std::abs(g.velocity_weights[3] * kBump(g.velocity_nodes[3]) * Complex(0.7, 0.2));
    for (std::size_t j = 0; j < g.n_t(); ++j) CHECK(std::abs(tr(0, j)) == doctest::Approx(m0).epsilon(1e-14));
  }

  TEST_CASE("linear path with symmetric nodes gives a cosine") {
    const auto g = make(5, 64, 4.0, {{2.0, 0.0}});  // nodes -1, -.5, 0, .5, 1
    const auto d = two_point(g, 1, 3, 1.0, 1.0);
    const auto tr = solve_trace(g, d, kId, linear_path(g), kBump);
    const double c = g.velocity_weights[1] * kBump({0.5, 0.0});
    for (std::size_t j = 0; j < g.n_t(); ++j) {
      const double want = 2.0 * c * std::cos(g.times[j] * 2.0 * 0.5);
      CHECK(std::abs(tr(0, j) - want) < 1e-12);
    }
  }

  TEST_CASE("Hermitian symmetry across +-k") {
    const auto g = make(17, 64, 2.0, {{-2.0, 0.0}, {2.0, 0.0}});
    auto d = gaussian_bump(g);
    for (std::size_t m = 0; m < g.n_xi(); ++m) {
      d.f0(0, m) *= Complex(1.0, -0.3);
      d.f0(1, m) *= Complex(1.0, 0.3);
    }
    const auto tr = solve_trace(g, d, kId, sample_path(g, 5), kBump);
    for (std::size_t j = 0; j < g.n_t(); ++j) CHECK(std::abs(tr(0, j) - std::conj(tr(1, j))) < 1e-12);
  }

  TEST_CASE("linearity in the data") {
    const auto g = make(17, 64, 2.0);
    const auto path = sample_path(g, 9);
    auto a = gaussian_bump(g);
    auto b = time_box_source(g);
    b.f0_hat = two_point(g, 2, 11, 1.0, Complex(0.0, 2.0)).f0_hat;
    KineticData sum = b;
    for (std::size_t i = 0; i < sum.f0_hat.size(); ++i) sum.f0_hat[i] = 2.0 * a.f0_hat[i] - 3.0 * b.f0_hat[i];
    for (auto& v : sum.g_hat) v *= -3.0;
    const auto ta = solve_trace(g, a, kId, path, kBump);
    const auto tb = solve_trace(g, b, kId, path, kBump);
    const auto ts = solve_trace(g, sum, kId, path, kBump);
    for (std::size_t j = 0; j < g.n_t(); ++j) CHECK(std::abs(ts(0, j) - (2.0 * ta(0, j) - 3.0 * tb(0, j))) < 1e-12);
  }

  TEST_CASE("general field path agrees with direct evaluation") {
    const auto g = make(11, 32, 1.5);
    const auto field = VelocityField::curve(Curve::cubic, 1, 3.0, 0.25);
    const auto d = gaussian_bump(g);
    const auto path = sample_path(g, 4);
    const auto tr = solve_trace(g, d, field, path, kBump);
    for (std::size_t j = 0; j < g.n_t(); j += 7) {
      Complex want{};
      for (std::size_t m = 0; m < g.n_xi(); ++m) {
        const double xi = g.velocity_nodes[m].x;
        want += g.velocity_weights[m] * kBump({xi, 0.0}) * d.f0(0, m) *
                std::exp(Complex(0.0, -path.values[j] * xi * xi * xi));
      }
      CHECK(std::abs(tr(0, j) - want) < 1e-12);
    }
  }

  TEST_CASE("source quadrature converges at second order") {
    auto q_at_end = [](int n_t) {
      const auto g = make(9, n_t, 2.0);
      // A ramp source: its time derivative differs at the two ends, so no end-point cancellation
      // lifts the trapezoid rule above second order.
      auto d = time_box_source(g);
      for (std::size_t m = 0; m < g.n_xi(); ++m)
        for (std::size_t j = 0; j < g.n_t(); ++j) d.g(0, m, j) = Profile{}(g.velocity_nodes[m]) * (1.0 + g.times[j]);
      return solve_trace(g, d, kId, linear_path(g), kBump)(0, n_t);
    };
    const Complex ref = q_at_end(8192);
    const double e1 = std::abs(q_at_end(32) - ref), e2 = std::abs(q_at_end(64) - ref), e3 = std::abs(q_at_end(128) - ref);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
    CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.1));
  }

  TEST_CASE("divergence source equals the direct velocity integral of psi d_xi h") {
    const auto g = make(1025, 64, 1.5, {{3.0, 0.0}});
    const Profile prof;
    const auto d = div_source(g, prof, 1.0);
    const auto tr = solve_trace(g, d, kId, linear_path(g), kBump);
    // Direct route: analytic d_xi h against psi, adaptive quadrature in xi, trapezoid in time.
    for (std::size_t j : {16u, 40u, 64u}) {
      std::vector<Complex> inner(j + 1);
      for (std::size_t s = 0; s <= j; ++s) {
        const double dB = g.times[j] - g.times[s];
        const double tb = time_box(g.times[s], 1.0);
        inner[s] = quad::integrate(
                       [&](double xi) {
                         return kBump({xi, 0.0}) * prof.derivative_x({xi, 0.0}) * tb *
                                std::exp(Complex(0.0, -dB * 3.0 * xi));
                       },
                       -1.0, 1.0, 1e-13)
                       .value;
      }
      Complex want{};
      for (std::size_t s = 1; s <= j; ++s) want += 0.5 * (g.times[s] - g.times[s - 1]) * (inner[s] + inner[s - 1]);
      INFO("j=" << j << " got=" << tr(0, j) << " want=" << want);
      CHECK(std::abs(tr(0, j) - want) < 1e-9);
    }
  }

  TEST_CASE("divergence source is rejected for curved fields") {
    const auto g = make(9, 8, 1.0);
    const auto d = div_source(g);
    CHECK_THROWS(solve_trace(g, d, VelocityField::curve(Curve::cubic, 1, 3.0, 0.25), linear_path(g), kBump));
  }

  TEST_CASE("damped time energy") {
    AverageTrace tr;
    tr.n_k = 1;
    const auto g1 = make(3, 200, 1.0);
    tr.n_t = g1.n_t();
    tr.values.assign(tr.n_t, Complex(0.0, 1.0));
    CHECK(damped_time_energy(tr, g1.times, 0.0).per_k[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(damped_time_energy(tr, g1.times, 0.0).tail_truncated);

    const double T = horizon_for(1.0);
    CHECK(std::exp(-2.0 * T) == doctest::Approx(1e-6));
    const auto g2 = make(3, 20000, T);
    tr.n_t = g2.n_t();
    tr.values.assign(tr.n_t, 1.0);
    const auto e = damped_time_energy(tr, g2.times, 1.0);
    CHECK(std::abs(e.per_k[0] - 0.5) < 1e-6);
    CHECK_FALSE(e.tail_truncated);

    tr.values.assign(tr.n_t, 0.0);
    CHECK(damped_time_energy(tr, g2.times, 1.0).per_k[0] == 0.0);
  }

  TEST_CASE("deterministic transport conserves the weighted norm") {
    // |f_hat(k, xi, t)| = |f0_hat| for B(t) = t; check through the squared norm of the modulated data.
    const auto g = make(33, 16, 2.0);
    const auto d = gaussian_bump(g);
    const double n0 = initial_norm_sq(g, d, kBump, 0);
    for (std::size_t j = 0; j < g.n_t(); ++j) {
      double nj = 0.0;
      for (std::size_t m = 0; m < g.n_xi(); ++m) {
        const Complex f = d.f0(0, m) * std::exp(Complex(0.0, -g.times[j] * g.velocity_nodes[m].x));
        nj += g.velocity_weights[m] * std::norm(kBump(g.velocity_nodes[m]) * f);
      }
      CHECK(nj == doctest::Approx(n0).epsilon(1e-14));
    }
  }
}
