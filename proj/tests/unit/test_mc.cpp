#include <doctest.h>

#include <cmath>

#include "kal/kernels.hpp"
#include "kal/mc.hpp"
#include "kal/oracle.hpp"

using namespace kal;

namespace {

SpectralGrid make(int n_xi, int n_t, double T, std::vector<Vec2> ks) {
  GridSpec s;
  s.wavenumbers = std::move(ks);
  s.n_xi = n_xi;
  s.n_t = n_t;
  s.horizon = T;
  return build_grid(s);
}

const VelocityField kId = VelocityField::identity(1);
const TestFunction kBump(PsiKind::bump, 1.0);

}  // namespace

TEST_SUITE("mc") {
  TEST_CASE("zero data gives zero with zero error") {
    const auto g = make(9, 32, 2.0, {{1.0, 0.0}, {2.0, 0.0}});
    const auto d = KineticData::zeros(g);
    McOptions opt;
    opt.n_paths = 200;
    opt.n_batches = 10;
    for (auto& e : estimate({}, g, d, kId, kBump, opt)) {
      CHECK(e.value == 0.0);
      CHECK(e.stderr_ == 0.0);
      CHECK(e.n_paths == 200);
    }
  }

  TEST_CASE("characteristic-function harness") {
    McOptions opt;
    opt.n_paths = 100000;
    auto obs = [](std::uint64_t, std::uint64_t seed) {
      const auto p = sample_path(std::vector<double>{0.0, 2.0}, seed);
      return std::vector<double>{std::cos(p.values[1])};
    };
    const auto e = estimate_observable(obs, opt, "char")[0];
    CHECK(std::abs(e.value - char_one_time(1.0, 2.0)) <= 4.0 * e.stderr_);
    CHECK(char_one_time(1.0, 2.0) == doctest::Approx(0.36787944117144233));
  }

  TEST_CASE("bit-identical across worker counts") {
    const auto g = make(17, 64, 3.0, {{1.0, 0.0}, {4.0, 0.0}});
    const auto d = gaussian_bump(g);
    McOptions a;
    a.n_paths = 400;
    a.threads = 1;
    McOptions b = a;
    b.threads = 3;
    FunctionalSpec spec;
    spec.lambda = 0.5;
    const auto ea = estimate(spec, g, d, kId, kBump, a), eb = estimate(spec, g, d, kId, kBump, b);
    for (std::size_t k = 0; k < ea.size(); ++k) {
      CHECK(ea[k].value == eb[k].value);
      CHECK(ea[k].stderr_ == eb[k].stderr_);
    }
    spec.kind = FunctionalKind::gagliardo;
    const auto ga = estimate(spec, g, d, kId, kBump, a), gb = estimate(spec, g, d, kId, kBump, b);
    CHECK(ga[1].value == gb[1].value);
  }

  TEST_CASE("argument errors") {
    McOptions opt;
    opt.n_paths = 5;
    opt.n_batches = 10;
    auto obs = [](std::uint64_t, std::uint64_t) { return std::vector<double>{0.0}; };
    CHECK_THROWS(estimate_observable(obs, opt));
    opt.n_batches = 1;
    CHECK_THROWS(estimate_observable(obs, opt));
  }

  TEST_CASE("stderr shrinks like N^{-1/2}") {
    auto obs = [](std::uint64_t, std::uint64_t seed) {
      GaussianStream z(seed);
      return std::vector<double>{z.next()};
    };
    McOptions small, big;
    small.n_paths = 5000;
    big.n_paths = 20000;
    double ratio = 0.0;
    for (std::uint64_t s = 0; s < 8; ++s) {
      small.master_seed = big.master_seed = 100 + s;
      ratio += estimate_observable(obs, small)[0].stderr_ / estimate_observable(obs, big)[0].stderr_;
    }
    CHECK(ratio / 8.0 == doctest::Approx(2.0).epsilon(0.3));
  }

  TEST_CASE("Monte Carlo matches the g = 0 oracle") {
    const double lambda = 1.0;
    const auto g = make(17, 1024, horizon_for(lambda), {{1.0, 0.0}, {4.0, 0.0}});
    const auto d = gaussian_bump(g);
    McOptions opt;
    opt.n_paths = 4000;
    FunctionalSpec spec;
    spec.lambda = lambda;
    const auto e = estimate(spec, g, d, kId, kBump, opt);
    for (std::size_t k = 0; k < 2; ++k) {
      const double o = energy_g0_stochastic(g, d, kId, kBump, lambda, k);
      INFO("k=" << k << " mc=" << e[k].value << " +- " << e[k].stderr_ << " oracle=" << o);
      CHECK(std::abs(e[k].value - o) <= std::max(4.0 * e[k].stderr_, 0.01 * o));
    }
  }

  TEST_CASE("Monte Carlo matches the f0 = 0 oracle") {
    const double lambda = 1.0;
    const auto g = make(17, 1024, horizon_for(lambda), {{2.0, 0.0}});
    const auto d = time_box_source(g, {}, 1.0);
    McOptions opt;
    opt.n_paths = 4000;
    FunctionalSpec spec;
    spec.lambda = lambda;
    const auto e = estimate(spec, g, d, kId, kBump, opt)[0];
    const double o = energy_f0zero_stochastic(g, d, kId, kBump, lambda, 0);
    INFO("mc=" << e.value << " +- " << e.stderr_ << " oracle=" << o);
    CHECK(std::abs(e.value - o) <= std::max(4.0 * e.stderr_, 0.02 * o));
  }

  TEST_CASE("weighted energy is one total") {
    const auto g = make(9, 32, 2.0, {{1.0, 0.0}, {2.0, 0.0}});
    const auto d = gaussian_bump(g);
    FunctionalSpec spec;
    spec.kind = FunctionalKind::weighted_energy;
    spec.path_mode = PathMode::linear;
    McOptions opt;
    opt.n_paths = 20;
    opt.n_batches = 2;
    const auto e = estimate(spec, g, d, kId, kBump, opt);
    REQUIRE(e.size() == 1);
    spec.kind = FunctionalKind::damped_energy;
    const auto per_k = estimate(spec, g, d, kId, kBump, opt);
    CHECK(e[0].value == doctest::Approx(per_k[0].value * 1.0 + per_k[1].value * 2.0));
  }
}
