#include <doctest.h>

#include <cmath>
#include <random>

#include "kal/fields.hpp"

using namespace kal;

namespace {

GridSpec spec1d(int n_xi, int n_t, double T = 1.0) {
  GridSpec s;
  s.wavenumbers = {{1.0, 0.0}};
  s.n_xi = n_xi;
  s.n_t = n_t;
  s.horizon = T;
  return s;
}

}  // namespace

TEST_SUITE("fields") {
  TEST_CASE("three-node trapezoid grid") {
    const auto g = build_grid(spec1d(3, 2));
    REQUIRE(g.n_xi() == 3);
    CHECK(g.velocity_nodes[0].x == -1.0);
    CHECK(g.velocity_nodes[1].x == 0.0);
    CHECK(g.velocity_nodes[2].x == 1.0);
    CHECK(g.velocity_weights[0] == doctest::Approx(0.5));
    CHECK(g.velocity_weights[1] == doctest::Approx(1.0));
    CHECK(g.velocity_weights[2] == doctest::Approx(0.5));
    REQUIRE(g.n_t() == 3);
    CHECK(g.times[0] == 0.0);
    CHECK(g.times[1] == 0.5);
    CHECK(g.times[2] == 1.0);
  }

  TEST_CASE("two nodes are the endpoints with equal weights") {
    const auto g = build_grid(spec1d(2, 4));
    CHECK(g.velocity_nodes[0].x == -1.0);
    CHECK(g.velocity_nodes[1].x == 1.0);
    CHECK(g.velocity_weights[0] == g.velocity_weights[1]);
  }

  TEST_CASE("invalid grids are rejected") {
    auto s = spec1d(5, 4);
    s.xi_lo = s.xi_hi = 0.0;
    CHECK_THROWS(build_grid(s));
    s = spec1d(5, 4);
    s.wavenumbers.clear();
    CHECK_THROWS(build_grid(s));
    s = spec1d(5, 4, -1.0);
    CHECK_THROWS(build_grid(s));
    s = spec1d(5, 4);
    s.psi_radius = 2.0;  // support wider than the node range
    CHECK_THROWS(build_grid(s));
    s = spec1d(5, 4);
    s.wavenumbers = {{1.0, 0.0}, {1.0, 0.0}};
    CHECK_THROWS(build_grid(s));
    CHECK_THROWS(build_grid(spec1d(1, 4)));
    CHECK_THROWS(build_grid(spec1d(4, 1)));
  }

  TEST_CASE("weights sum to the range length and grids are reproducible") {
    for (int n : {2, 3, 17, 129}) {
      auto s = spec1d(n, 8);
      s.xi_lo = -0.7;
      s.xi_hi = 1.9;
      const auto a = build_grid(s), b = build_grid(s);
      double sum = 0.0;
      for (double w : a.velocity_weights) sum += w;
      CHECK(sum == doctest::Approx(2.6).epsilon(1e-14));
      for (std::size_t m = 0; m < a.n_xi(); ++m) {
        CHECK(a.velocity_nodes[m].x == b.velocity_nodes[m].x);
        CHECK(a.velocity_weights[m] == b.velocity_weights[m]);
      }
    }
  }

  TEST_CASE("two-dimensional tensor grid") {
    GridSpec s;
    s.dimension = 2;
    s.wavenumbers = {{1.0, 2.0}};
    s.n_xi = 5;
    const auto g = build_grid(s);
    CHECK(g.n_xi() == 25);
    double sum = 0.0;
    for (double w : g.velocity_weights) sum += w;
    CHECK(sum == doctest::Approx(4.0));
  }

  TEST_CASE("geometric time grid") {
    auto s = spec1d(3, 10, 5.0);
    s.time_grading = TimeGrading::geometric;
    s.t_min = 1e-3;
    const auto g = build_grid(s);
    CHECK(g.times[0] == 0.0);
    CHECK(g.times[1] == doctest::Approx(1e-3));
    CHECK(g.times.back() == 5.0);
    for (std::size_t j = 1; j < g.n_t(); ++j) CHECK(g.times[j] > g.times[j - 1]);
    const double r = g.times[3] / g.times[2];
    CHECK(g.times[5] / g.times[4] == doctest::Approx(r));
  }

  TEST_CASE("test functions vanish outside their support") {
    for (auto kind : {PsiKind::bump, PsiKind::hat, PsiKind::indicator}) {
      TestFunction psi(kind, 0.8);
      CHECK(psi({0.81, 0.0}) == 0.0);
      CHECK(psi({-2.0, 0.0}) == 0.0);
      CHECK(psi({0.0, 0.0}) == doctest::Approx(1.0));
      CHECK(psi({0.3, 0.0}) == psi({0.3, 0.0}));
    }
    TestFunction bump(PsiKind::bump, 1.0);
    CHECK(bump({1.0, 0.0}) == 0.0);
    CHECK(bump({0.5, 0.0}) == doctest::Approx(std::exp(1.0 - 1.0 / 0.75)));
  }

  TEST_CASE("bump gradient matches central differences") {
    TestFunction psi(PsiKind::bump, 1.3);
    for (double x : {-1.1, -0.6, -0.1, 0.0, 0.4, 0.9, 1.2}) {
      const double h = 1e-6;
      const double fd = (psi({x + h, 0.0}) - psi({x - h, 0.0})) / (2.0 * h);
      CHECK(psi.gradient({x, 0.0}).x == doctest::Approx(fd).epsilon(1e-6));
    }
  }

  TEST_CASE("non-degeneracy of the identity field") {
    auto g = build_grid(spec1d(9, 4));
    const auto r = check_nondegeneracy(VelocityField::identity(1), g.velocity_nodes);
    CHECK(r.a_empirical == doctest::Approx(1.0));
    CHECK(r.pass);
    std::vector<Vec2> scattered = {{-0.3, 0.0}, {0.11, 0.0}, {0.8, 0.0}};
    CHECK(check_nondegeneracy(VelocityField::identity(1), scattered).a_empirical == doctest::Approx(1.0));
  }

  TEST_CASE("cubic curve satisfies the alpha = 3 condition with A = 1/4") {
    const auto field = VelocityField::curve(Curve::cubic, 1, 3.0, 0.25);
    auto s = spec1d(201, 4);
    s.scalar_velocity = true;
    const auto g = build_grid(s);
    const auto r = check_nondegeneracy(field, g.velocity_nodes);
    // Independent lower bound: |x^3 - y^3| / |x - y|^3 = (x^2 + xy + y^2) / (x - y)^2 >= 1/4.
    double brute = 1e300;
    for (std::size_t i = 0; i < g.n_xi(); ++i)
      for (std::size_t j = i + 1; j < g.n_xi(); ++j) {
        const double x = g.velocity_nodes[i].x, y = g.velocity_nodes[j].x;
        brute = std::min(brute, (x * x + x * y + y * y) / ((x - y) * (x - y)));
      }
    CHECK(r.a_empirical == doctest::Approx(brute).epsilon(1e-12));
    CHECK(r.a_empirical >= 0.25 * (1.0 - 1e-9));
    CHECK(r.pass);
    CHECK(r.xi_lo == -1.0);
    CHECK(r.xi_hi == 1.0);
  }

  TEST_CASE("symmetric collision of the quadratic curve") {
    const auto field = VelocityField::curve(Curve::quadratic, 1, 1.0, 1.0);
    const auto r = check_nondegeneracy(field, {{-1.0, 0.0}, {1.0, 0.0}});
    CHECK(r.a_empirical == 0.0);
    CHECK_FALSE(r.pass);
  }

  TEST_CASE("non-degeneracy is monotone under node insertion") {
    const auto field = VelocityField::curve(Curve::cubic, 1, 3.0, 0.25);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vec2> nodes = {{u(rng), 0.0}, {u(rng), 0.0}};
    double prev = check_nondegeneracy(field, nodes).a_empirical;
    for (int i = 0; i < 40; ++i) {
      nodes.push_back({u(rng), 0.0});
      const double now = check_nondegeneracy(field, nodes).a_empirical;
      CHECK(now <= prev);
      prev = now;
    }
  }

  TEST_CASE("fewer than two nodes is an error") {
    CHECK_THROWS(check_nondegeneracy(VelocityField::identity(1), {{0.0, 0.0}}));
  }

  TEST_CASE("data validation") {
    const auto g = build_grid(spec1d(5, 4));
    auto d = gaussian_bump(g);
    CHECK_NOTHROW(d.validate(g));
    auto bad = d;
    bad.f0_hat[2] = Complex(NAN, 0.0);
    CHECK_THROWS(bad.validate(g));
    auto both = time_box_source(g);
    both.h_hat.assign(both.g_hat.size(), Complex{});
    both.h_components = 1;
    CHECK_THROWS(both.validate(g));
    auto shape = d;
    shape.f0_hat.pop_back();
    CHECK_THROWS(shape.validate(g));
  }
}
