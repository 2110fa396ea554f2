#include <doctest.h>

#include <cmath>

#include "kal/brownian.hpp"

using namespace kal;

namespace {

SpectralGrid unit_grid(int n_t) {
  GridSpec s;
  s.wavenumbers = {{1.0, 0.0}};
  s.n_t = n_t;
  s.horizon = 1.0;
  return build_grid(s);
}

}  // namespace

TEST_SUITE("brownian") {
  TEST_CASE("paths start at zero and are reproducible") {
    const auto g = unit_grid(16);
    for (std::uint64_t seed : {0ULL, 1ULL, 12345ULL}) {
      const auto a = sample_path(g, seed), b = sample_path(g, seed);
      CHECK(a.values[0] == 0.0);
      CHECK(a.values == b.values);
    }
    CHECK(sample_path(g, 1).values != sample_path(g, 2).values);
  }

  TEST_CASE("linear path equals the time grid") {
    const auto g = unit_grid(2);
    const auto p = linear_path(g);
    CHECK(p.values == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(p.mode == PathMode::linear);
    CHECK(frozen_path(g).values == std::vector<double>(3, 0.0));
  }

  TEST_CASE("variance of B(1) over 1e5 seeds") {
    const auto g = unit_grid(4);
    const int N = 100000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < N; ++i) {
      const double b = sample_path(g, path_seed(99, i)).values.back();
      s += b;
      s2 += b * b;
    }
    const double var = s2 / N - (s / N) * (s / N);
    CHECK(std::abs(var - 1.0) <= 4.0 * std::sqrt(2.0) / std::sqrt(double(N)));
  }

  TEST_CASE("covariance min(s,t) and independent increments") {
    const auto g = unit_grid(4);  // times 0, .25, .5, .75, 1
    const int N = 40000;
    double cov[5][5] = {};
    double inc = 0.0, inc1 = 0.0, inc2 = 0.0;
    for (int i = 0; i < N; ++i) {
      const auto p = sample_path(g, path_seed(3, i));
      for (int a = 1; a < 5; ++a)
        for (int b = 1; b < 5; ++b) cov[a][b] += p.values[a] * p.values[b];
      const double d1 = p.values[2] - p.values[0], d2 = p.values[4] - p.values[2];
      inc += d1 * d2;
      inc1 += d1 * d1;
      inc2 += d2 * d2;
    }
    for (int a = 1; a < 5; ++a)
      for (int b = 1; b < 5; ++b) {
        const double s = g.times[a], t = g.times[b];
        const double est = cov[a][b] / N;
        const double sd = std::sqrt((s * t + std::min(s, t) * std::min(s, t)) / N);  // Var of B_s B_t
        CHECK(std::abs(est - std::min(s, t)) <= 4.0 * sd);
      }
    const double corr = inc / std::sqrt(inc1 * inc2);
    CHECK(std::abs(corr) <= 4.0 / std::sqrt(double(N)));
  }

  TEST_CASE("path seeds do not collide for nearby indices") {
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < 1000; ++i) seeds.push_back(path_seed(42, i));
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
    CHECK(path_seed(1, 0) != path_seed(2, 0));
  }

  TEST_CASE("Box-Muller stream moments") {
    GaussianStream g(11);
    const int N = 200000;
    double s = 0.0, s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < N; ++i) {
      const double z = g.next();
      s += z;
      s2 += z * z;
      s4 += z * z * z * z;
    }
    CHECK(std::abs(s / N) <= 4.0 / std::sqrt(double(N)));
    CHECK(std::abs(s2 / N - 1.0) <= 4.0 * std::sqrt(2.0 / N));
    CHECK(std::abs(s4 / N - 3.0) <= 4.0 * std::sqrt(96.0 / N));
  }
}
