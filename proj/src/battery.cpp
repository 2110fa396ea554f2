#include "kal/battery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kal/brownian.hpp"
#include "kal/config.hpp"
#include "kal/kernels.hpp"
#include "kal/mc.hpp"
#include "kal/norms.hpp"
#include "kal/oracle.hpp"
#include "kal/quadrature.hpp"
#include "kal/scaling.hpp"
#include "kal/solver.hpp"

namespace kal {

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

ResultRow make_row(std::string id, std::string case_tag, std::string estimator) {
  ResultRow r;
  r.experiment_id = std::move(id);
  r.case_tag = std::move(case_tag);
  r.estimator = std::move(estimator);
  return r;
}

void set_mc(ResultRow& r, const NormEstimate& e) {
  r.value = e.value;
  r.stderr_ = e.stderr_;
  r.n_paths = static_cast<long>(e.n_paths);
  r.seed = e.master_seed;
}

GridSpec uniform_spec(std::vector<Vec2> ks, int n_xi, double horizon, int n_t) {
  GridSpec s;
  s.wavenumbers = std::move(ks);
  s.n_xi = n_xi;
  s.horizon = horizon;
  s.n_t = n_t;
  s.psi_radius = 1.0;
  return s;
}

std::vector<Vec2> ks_of(std::initializer_list<double> mags) {
  std::vector<Vec2> out;
  for (double m : mags) out.push_back({m, 0.0});
  return out;
}

FitRow fit_row(const std::string& id, const ScalingFit& f, double expected, double tol) {
  return {id, f.exponent, f.half_width, f.r_squared, expected, std::abs(f.exponent - expected) <= tol};
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

const TestFunction kPsi(PsiKind::bump, 1.0);

}  // namespace

void CheckOutcome::require(bool ok, const std::string& what) {
  if (ok) return;
  pass = false;
  failures.push_back(what);
}

Battery::Battery(GoldenConstants golden, BatteryOptions opt) : golden_(std::move(golden)), opt_(opt) {}

double Battery::constant(const std::string& key, CheckOutcome& out) const {
  if (!golden_.has(key)) {
    out.require(false, "golden constant '" + key + "' missing (run calibrate)");
    return std::numeric_limits<double>::quiet_NaN();
  }
  return golden_.get(key);
}

double Battery::judge(const std::string& key, std::vector<Ratio> ratios, CheckOutcome& out) {
  double sup = 0.0;
  for (const auto& r : ratios)
    if (r.calib) sup = std::max(sup, r.value / r.shape);
  double C;
  if (calibrating_) {
    C = sup * kGoldenHeadroom;
    if (!observed_.has(key) || observed_.get(key) < C) observed_.set(key, C);
  } else {
    C = constant(key, out);
  }
  std::size_t bad = 0;
  double worst = 0.0;
  for (auto& r : ratios) {
    const double ratio = r.value / r.shape;
    worst = std::max(worst, ratio);
    r.row.value = r.value;
    r.row.bound = C * r.shape;
    r.row.pass = std::isfinite(ratio) && r.value <= C * r.shape;
    if (!*r.row.pass) ++bad;
    out.rows.push_back(std::move(r.row));
  }
  out.note(key + " = " + fmt(C) + ", worst value/shape " + fmt(worst) + " (calibration sup " + fmt(sup) + ")");
  out.require(bad == 0, key + ": " + std::to_string(bad) + " of " + std::to_string(ratios.size()) +
                            " rows exceed the frozen constant");
  return sup;
}

// ---------------------------------------------------------------------------------------------

CheckOutcome Battery::gaussian_identities() {
  CheckOutcome out;
  out.title = "Gaussian characteristic functions vs Monte Carlo";
  const std::vector<double> thetas = {0.5, 1.0, 2.0, 3.0};
  const std::vector<double> ss = {0.25, 0.5, 1.0, 2.0};
  const std::size_t n_s = ss.size();

  // One draw of B at {0, s/2, s} per (path, s); components are [theta][s][one-time, two-time].
  auto obs = [&](std::uint64_t, std::uint64_t seed) {
    std::vector<double> v;
    v.reserve(thetas.size() * n_s * 2);
    std::vector<DrivingPath> paths;
    for (std::size_t si = 0; si < n_s; ++si)
      paths.push_back(sample_path({0.0, 0.5 * ss[si], ss[si]}, path_seed(seed, si)));
    for (double th : thetas)
      for (std::size_t si = 0; si < n_s; ++si) {
        const auto& b = paths[si].values;
        v.push_back(std::cos(th * b[2]));
        v.push_back(std::cos(th * b[1] + 0.5 * th * (b[2] - b[1])));
      }
    return v;
  };
  McOptions mo;
  mo.n_paths = 100000;
  mo.n_batches = 100;
  mo.master_seed = opt_.seed;
  mo.threads = opt_.threads;
  const auto est = estimate_observable(obs, mo, "char");

  std::size_t c = 0, bad = 0;
  double worst = 0.0;
  for (double th : thetas)
    for (double s : ss) {
      const double exact[2] = {char_one_time(th, s), char_two_time(th, 0.5 * th, 0.5 * s, s)};
      const char* names[2] = {"char_one_time", "char_two_time"};
      for (int w = 0; w < 2; ++w, ++c) {
        auto r = make_row("c1." + std::string(names[w]) + ".theta=" + fmt(th) + ".s=" + fmt(s), "kernels", "mc");
        set_mc(r, est[c]);
        r.bound = exact[w];
        const double z = std::abs(est[c].value - exact[w]) / est[c].stderr_;
        worst = std::max(worst, z);
        r.pass = z <= 4.0;
        if (!*r.pass) ++bad;
        out.rows.push_back(std::move(r));
      }
    }
  out.note("32 identities, worst |mc - exact| / stderr = " + fmt(worst));
  out.require(bad == 0, std::to_string(bad) + " identities outside 4 stderr");
  return out;
}

CheckOutcome Battery::kernel_closed_forms() {
  CheckOutcome out;
  out.title = "Kernel closed forms vs quadrature";
  {
    const auto q = kernel_l1_norm(1.0, 1.0, 1.0, KernelMethod::quadrature);
    const auto cf = kernel_l1_norm(1.0, 1.0, 1.0, KernelMethod::closed_form);
    const double err = std::max(std::abs(q.value - pi / 2), std::abs(cf.value - pi / 2));
    auto r = make_row("c2.kernel_l1_norm.lambda=1.k=1.alpha=1", "kernels", "quadrature");
    r.k_mag = 1.0;
    r.lambda = 1.0;
    r.alpha = 1.0;
    r.value = q.value;
    r.bound = pi / 2;
    r.pass = err <= 1e-8;
    out.rows.push_back(r);
    out.note("kernel_l1_norm(1,1,1) quadrature error " + fmt(std::abs(q.value - pi / 2)));
    out.require(*r.pass, "kernel_l1_norm(1,1,1) differs from pi/2 by " + fmt(err));
  }
  const std::vector<double> lambdas = {0.1, 0.5, 1.0, 2.0, 10.0};
  const std::vector<double> qs = {0.0, 0.5, 2.0, 10.0, 100.0};
  const std::vector<double> rs = {-10.0, -1.0, 0.0, 1.0, 10.0};
  double worst = 0.0;
  std::size_t bad = 0;
  for (double l : lambdas) {
    const double L = 40.0 / (2.0 * l);
    for (double q : qs) {
      const double exact = multiplier_stochastic(l, q);
      const double rate = 2.0 * l + 0.5 * q;
      const auto num =
          quad::integrate([&](double t) { return std::exp(-rate * t); }, 0.0, 40.0 / rate, 1e-13, 0.0, 20000);
      const double e = std::abs(num.value - exact) / std::max(1.0, exact);
      worst = std::max(worst, e);
      auto r = make_row("c2.multiplier_stochastic.lambda=" + fmt(l) + ".q=" + fmt(q), "kernels", "quadrature");
      r.lambda = l;
      r.value = num.value;
      r.bound = exact;
      r.pass = e <= 1e-8;
      if (!*r.pass) ++bad;
      out.rows.push_back(std::move(r));
    }
    for (double rr : rs) {
      const Complex exact = multiplier_deterministic(l, rr);
      const auto num = quad::integrate(
          [&](double t) { return std::exp(Complex(-2.0 * l * t, rr * t)); }, 0.0, L, 1e-13, 0.0, 20000);
      const double e = std::abs(num.value - exact) / std::max(1.0, std::abs(exact));
      worst = std::max(worst, e);
      auto r = make_row("c2.multiplier_deterministic.lambda=" + fmt(l) + ".r=" + fmt(rr), "kernels", "quadrature");
      r.lambda = l;
      r.value = std::abs(num.value);
      r.bound = std::abs(exact);
      r.pass = e <= 1e-8;
      if (!*r.pass) ++bad;
      out.rows.push_back(std::move(r));
    }
  }
  out.note("50 multiplier identities, worst relative error " + fmt(worst));
  out.require(bad == 0, std::to_string(bad) + " multiplier identities off by more than 1e-8");
  return out;
}

CheckOutcome Battery::oracle_vs_mc() {
  CheckOutcome out;
  out.title = "g = 0 stochastic energy: oracle vs Monte Carlo";
  const auto cfg = canonical_config();
  const auto grid = make_grid(cfg);
  const auto data = make_data(cfg, grid);
  const auto field = make_field(cfg);
  const auto psi = make_psi(cfg);
  FunctionalSpec fs;
  fs.kind = FunctionalKind::damped_energy;
  fs.lambda = cfg.lambda;
  McOptions mo;
  mo.n_paths = 20000;
  mo.n_batches = 20;
  mo.master_seed = opt_.seed;
  mo.threads = opt_.threads;
  const auto est = estimate(fs, grid, data, field, psi, mo);
  double worst = 0.0;
  std::size_t bad = 0;
  for (std::size_t k = 0; k < grid.n_k(); ++k) {
    const double oracle = energy_g0_stochastic(grid, data, field, psi, cfg.lambda, k, grid.horizon());
    const double tol = std::max(4.0 * est[k].stderr_, 0.01 * oracle);
    auto r = make_row("c3.g0_stoch.k=" + fmt(norm(grid.wavenumbers[k])), "g0_stoch", "mc");
    r.k_index = static_cast<long>(k);
    r.k_mag = norm(grid.wavenumbers[k]);
    r.lambda = cfg.lambda;
    set_mc(r, est[k]);
    r.bound = oracle;
    r.pass = std::abs(est[k].value - oracle) <= tol;
    if (!*r.pass) ++bad;
    worst = std::max(worst, rel_diff(est[k].value, oracle));
    out.rows.push_back(std::move(r));
  }
  out.note("16 modes, worst relative discrepancy " + fmt(worst));
  out.require(bad == 0, std::to_string(bad) + " modes outside max(4 stderr, 1%)");
  return out;
}

CheckOutcome Battery::lambda_exponent() {
  CheckOutcome out;
  out.title = "lambda exponent of the g = 0 stochastic energy";
  const double kmag = 16.0;
  std::vector<double> lambdas;
  for (int e = -6; e <= -1; ++e) lambdas.push_back(std::ldexp(1.0, e));

  const auto grid = build_grid(uniform_spec(ks_of({kmag}), 129, 1.0, 4));
  const auto data = gaussian_bump(grid);
  const auto field = VelocityField::identity(1);
  std::vector<std::pair<double, double>> sweep;
  for (double l : lambdas) {
    const double v = energy_g0_stochastic(grid, data, field, kPsi, l, 0);
    sweep.push_back({l, v});
    auto r = make_row("c4.g0_stoch.oracle.lambda=" + fmt(l), "g0_stoch", "oracle");
    r.k_index = 0;
    r.k_mag = kmag;
    r.lambda = l;
    r.value = v;
    out.rows.push_back(std::move(r));
  }
  try {
    const auto f = fit_exponent_guarded(
        sweep, [&](double l) { return std::sqrt(l) <= kmag / 8.0; }, "sqrt(lambda) <= |k|/8");
    out.fits.push_back(fit_row("c4.g0_stoch.oracle.lambda", f, -0.5, 0.05));
    out.note("oracle slope " + fmt(f.exponent) + " +- " + fmt(f.half_width));
    out.require(out.fits.back().pass, "oracle slope " + fmt(f.exponent) + " outside -0.50 +- 0.05");
  } catch (const std::domain_error& e) {
    out.require(false, e.what());
  }

  std::vector<std::pair<double, double>> mc_sweep;
  for (double l : lambdas) {
    GridSpec s = uniform_spec(ks_of({kmag}), 129, horizon_for(l), 256);
    s.time_grading = TimeGrading::geometric;
    s.t_min = 1e-4;
    const auto g = build_grid(s);
    const auto d = gaussian_bump(g);
    FunctionalSpec fs;
    fs.kind = FunctionalKind::damped_energy;
    fs.lambda = l;
    McOptions mo;
    mo.n_paths = 2000;
    mo.n_batches = 20;
    mo.master_seed = opt_.seed;
    mo.threads = opt_.threads;
    const auto e = estimate(fs, g, d, field, kPsi, mo)[0];
    mc_sweep.push_back({l, e.value});
    auto r = make_row("c4.g0_stoch.mc.lambda=" + fmt(l), "g0_stoch", "mc");
    r.k_index = 0;
    r.k_mag = kmag;
    r.lambda = l;
    set_mc(r, e);
    out.rows.push_back(std::move(r));
  }
  const auto f = fit_exponent(mc_sweep);
  out.fits.push_back(fit_row("c4.g0_stoch.mc.lambda", f, -0.5, 0.10));
  out.note("Monte-Carlo slope " + fmt(f.exponent) + " +- " + fmt(f.half_width));
  out.require(out.fits.back().pass, "Monte-Carlo slope " + fmt(f.exponent) + " outside -0.50 +- 0.10");
  return out;
}

CheckOutcome Battery::inequality_suite() {
  CheckOutcome out;
  out.title = "Four space-regularity estimates with frozen constants";
  const std::vector<double> kmags = {1, 2, 4, 8, 16};
  const std::vector<double> lambdas = {0.25, 0.5, 1.0, 2.0, 4.0};
  const std::vector<double> horizons = {2.0, 4.0, 8.0};
  std::vector<Vec2> ks;
  for (double k : kmags) ks.push_back({k, 0.0});
  const auto field = VelocityField::identity(1);

  struct Level {
    int n_xi, n_t;
    const char* tag;
  };
  const Level levels[2] = {{129, 256, "base"}, {257, 512, "fine"}};
  const char* keys[4] = {"C_E1", "C_E2", "C_E3", "C_E4"};
  double sups[2][4] = {};

  for (int li = 0; li < 2; ++li) {
    const Level& lv = levels[li];
    const bool base = li == 0;
    const std::string pre = std::string("c5.") + lv.tag + ".";
    // Calibration constants come from the base level only; the fine level is judged against them.
    auto keep_calib = [&](std::vector<Ratio>& rs) {
      for (auto& r : rs) r.calib = base;
    };
    auto sup_of = [](const std::vector<Ratio>& rs) {
      double s = 0.0;
      for (const auto& r : rs) s = std::max(s, r.value / r.shape);
      return s;
    };

    {  // E1: |k| E int e^{-2 l t} |rho|^2 <= C psi_f0 / sqrt(l)
      const auto grid = build_grid(uniform_spec(ks, lv.n_xi, 1.0, 4));
      const auto data = gaussian_bump(grid);
      std::vector<Ratio> rs;
      for (std::size_t k = 0; k < ks.size(); ++k) {
        const double nf0 = initial_norm_sq(grid, data, kPsi, k);
        for (double l : lambdas) {
          Ratio r{make_row(pre + "E1.k=" + fmt(kmags[k]) + ".lambda=" + fmt(l), "g0_stoch", "oracle")};
          r.row.k_index = static_cast<long>(k);
          r.row.k_mag = kmags[k];
          r.row.lambda = l;
          r.value = kmags[k] * energy_g0_stochastic(grid, data, field, kPsi, l, k);
          r.shape = nf0 / std::sqrt(l);
          rs.push_back(std::move(r));
        }
      }
      keep_calib(rs);
      sups[li][0] = sup_of(rs);
      judge(keys[0], std::move(rs), out);
    }
    {  // E2 (lambda = 0 on [0, T]): |k| E int |rho|^2 <= C ||psi f0|| ||psi f||
      std::vector<Ratio> rs;
      for (double T : horizons) {
        const auto grid = build_grid(uniform_spec(ks, lv.n_xi, T, lv.n_t));
        const auto data = gaussian_bump(grid);
        for (std::size_t k = 0; k < ks.size(); ++k) {
          const auto nm = data_norms(grid, data, field, kPsi, k, 0.0);
          Ratio r{make_row(pre + "E2.k=" + fmt(kmags[k]) + ".T=" + fmt(T), "g0_stoch", "oracle")};
          r.row.k_index = static_cast<long>(k);
          r.row.k_mag = kmags[k];
          r.row.lambda = 0.0;
          r.value = kmags[k] * energy_g0_stochastic(grid, data, field, kPsi, 0.0, k, T);
          r.shape = std::sqrt(nm.psi_f0 * nm.psi_f);
          rs.push_back(std::move(r));
          if (base && k == 0)
            out.note("E2 T=" + fmt(T) + ": lambda* = ||psi f0|| / ||psi f|| = " +
                     fmt(select_lambda(std::sqrt(nm.psi_f0), std::sqrt(nm.psi_f))));
        }
      }
      keep_calib(rs);
      sups[li][1] = sup_of(rs);
      judge(keys[1], std::move(rs), out);
    }
    {  // E3 (f0 = 0): |k| E int e^{-2 l t} |rho|^2 <= C ||e^{-l t} psi g||^2 / l^{3/2}
      const auto grid = build_grid(uniform_spec(ks, lv.n_xi, 1.0, lv.n_t));
      const auto data = time_box_source(grid, Profile{}, 1.0);
      std::vector<Ratio> rs;
      for (std::size_t k = 0; k < ks.size(); ++k)
        for (double l : lambdas) {
          const auto nm = data_norms(grid, data, field, kPsi, k, l);
          Ratio r{make_row(pre + "E3.k=" + fmt(kmags[k]) + ".lambda=" + fmt(l), "f0zero", "oracle")};
          r.row.k_index = static_cast<long>(k);
          r.row.k_mag = kmags[k];
          r.row.lambda = l;
          r.value = kmags[k] * energy_f0zero_stochastic(grid, data, field, kPsi, l, k);
          r.shape = nm.psi_g_damped / std::pow(l, 1.5);
          rs.push_back(std::move(r));
        }
      keep_calib(rs);
      sups[li][2] = sup_of(rs);
      judge(keys[2], std::move(rs), out);
    }
    {  // E4 (f0 = 0, lambda = 0 on [0, T]): |k| E int |rho|^2 <= C ||psi g||^{1/2} ||psi f||^{3/2}
      std::vector<Ratio> rs;
      for (double T : horizons) {
        const auto grid = build_grid(uniform_spec(ks, lv.n_xi, T, lv.n_t));
        const auto data = time_box_source(grid, Profile{}, 1.0);
        for (std::size_t k = 0; k < ks.size(); ++k) {
          const auto nm = data_norms(grid, data, field, kPsi, k, 0.0);
          Ratio r{make_row(pre + "E4.k=" + fmt(kmags[k]) + ".T=" + fmt(T), "f0zero", "oracle")};
          r.row.k_index = static_cast<long>(k);
          r.row.k_mag = kmags[k];
          r.row.lambda = 0.0;
          r.value = kmags[k] * energy_f0zero_stochastic(grid, data, field, kPsi, 0.0, k, T);
          r.shape = std::pow(nm.psi_g, 0.25) * std::pow(nm.psi_f, 0.75);
          rs.push_back(std::move(r));
          if (base && k == 0)
            out.note("E4 T=" + fmt(T) + ": lambda* = ||psi g|| / ||psi f|| = " +
                     fmt(select_lambda(std::sqrt(nm.psi_g), std::sqrt(nm.psi_f))));
        }
      }
      keep_calib(rs);
      sups[li][3] = sup_of(rs);
      judge(keys[3], std::move(rs), out);
    }
  }
  for (int e = 0; e < 4; ++e) {
    const double drift = sups[1][e] / sups[0][e] - 1.0;
    out.note(std::string(keys[e]) + " sup ratio base " + fmt(sups[0][e]) + ", doubled grid " + fmt(sups[1][e]));
    auto r = make_row(std::string("c5.stability.") + keys[e], "g0_stoch", "oracle");
    r.value = sups[1][e];
    r.bound = sups[0][e];
    r.pass = std::abs(drift) <= 0.2;
    out.rows.push_back(r);
    out.require(*r.pass, std::string(keys[e]) + " sup ratio moved by " + fmt(100 * drift) + "% under refinement");
  }
  return out;
}

CheckOutcome Battery::deterministic_contrast() {
  CheckOutcome out;
  out.title = "Deterministic transport: exact energy and lambda-uniform bound";
  const std::vector<double> kmags = {1, 2, 4, 8, 16};
  std::vector<Vec2> ks;
  for (double k : kmags) ks.push_back({k, 0.0});
  const auto field = VelocityField::identity(1);

  if (!calibrating_) {  // oracle vs the linear path through the solver and trapezoid rule
    std::size_t bad = 0;
    double worst = 0.0;
    for (double l : {0.5, 1.0}) {
      const auto grid = build_grid(uniform_spec(ks, 17, horizon_for(l), 2048));
      const auto data = gaussian_bump(grid);
      const auto trace = solve_trace(grid, data, field, linear_path(grid), kPsi);
      const auto quad = damped_time_energy(trace, grid.times, l).per_k;
      for (std::size_t k = 0; k < ks.size(); ++k) {
        const double v = energy_g0_deterministic(grid, data, field, kPsi, l, k);
        auto r = make_row("c6.g0_det.vs_linear_path.k=" + fmt(kmags[k]) + ".lambda=" + fmt(l), "g0_det", "oracle");
        r.k_index = static_cast<long>(k);
        r.k_mag = kmags[k];
        r.lambda = l;
        r.value = v;
        r.bound = quad[k];
        const double e = rel_diff(v, quad[k]);
        worst = std::max(worst, e);
        r.pass = e <= 0.005;
        if (!*r.pass) ++bad;
        out.rows.push_back(std::move(r));
      }
    }
    out.note("oracle vs linear-path quadrature (n_t = 2048): worst relative difference " + fmt(worst));
    out.require(bad == 0, std::to_string(bad) + " deterministic energies differ from quadrature by > 0.5%");
  }

  // Fine velocity grid so the discrete diagonal does not masquerade as a 1/lambda singularity.
  const auto grid = build_grid(uniform_spec(ks, (1 << 20) + 1, 1.0, 2));
  const auto data = gaussian_bump(grid);
  const std::vector<double> lambdas = {1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<Ratio> rs;
  std::vector<std::vector<double>> stoch(ks.size());
  for (std::size_t k = 0; k < ks.size(); ++k) {
    const double nf0 = initial_norm_sq(grid, data, kPsi, k);
    for (double l : lambdas) {
      Ratio r{make_row("c6.g0_det.lambda_uniform.k=" + fmt(kmags[k]) + ".lambda=" + fmt(l), "g0_det", "oracle")};
      r.row.k_index = static_cast<long>(k);
      r.row.k_mag = kmags[k];
      r.row.lambda = l;
      r.value = kmags[k] * energy_g0_deterministic(grid, data, field, kPsi, l, k);
      r.shape = nf0;
      r.calib = l >= 1e-2;
      rs.push_back(std::move(r));
      if (!calibrating_) stoch[k].push_back(kmags[k] * energy_g0_stochastic(grid, data, field, kPsi, l, k));
    }
  }
  judge("C_det", std::move(rs), out);

  if (!calibrating_) {
    std::size_t bad = 0;
    double least = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < ks.size(); ++k) {
      const double growth = stoch[k].back() / stoch[k].front();
      least = std::min(least, growth);
      auto r = make_row("c6.g0_stoch.growth.k=" + fmt(kmags[k]), "g0_stoch", "oracle");
      r.k_index = static_cast<long>(k);
      r.k_mag = kmags[k];
      r.value = growth;
      r.bound = 10.0;
      r.pass = growth > 10.0;
      if (!*r.pass) ++bad;
      out.rows.push_back(std::move(r));
    }
    out.note("stochastic |k| energy grows by at least " + fmt(least) + "x from lambda = 1e-1 to 1e-4");
    out.require(bad == 0, "stochastic energy fails to grow by 10x over the same lambda range");
  }
  return out;
}

CheckOutcome Battery::general_field() {
  CheckOutcome out;
  out.title = "Cubic velocity field a(xi) = xi^3";
  const double alpha = 3.0, A = 0.25;
  const auto field = VelocityField::curve(Curve::cubic, 1, alpha, A);
  const std::vector<double> kmags = {1, 2, 4, 8, 16};
  std::vector<Vec2> ks;
  for (double k : kmags) ks.push_back({k, 0.0});

  for (int n : {17, 129}) {
    GridSpec s = uniform_spec(ks, n, 1.0, 4);
    s.scalar_velocity = true;
    const auto grid = build_grid(s);
    const auto rep = check_nondegeneracy(field, grid.velocity_nodes);
    auto r = make_row("c7.nondegeneracy.n_xi=" + std::to_string(n), "g0_stoch", "closed_form");
    r.alpha = alpha;
    r.value = rep.a_empirical;
    r.bound = A;
    r.pass = rep.pass;
    out.rows.push_back(r);
    out.note("nondegeneracy on " + std::to_string(n) + " nodes: empirical A = " + fmt(rep.a_empirical));
    out.require(rep.pass, "nondegeneracy fails on " + std::to_string(n) + " nodes");
  }

  {
    std::vector<std::pair<double, double>> sweep;
    for (int e = -4; e <= 4; ++e) {
      const double l = std::ldexp(1.0, e);
      const auto v = kernel_l1_norm(l, 1.0, alpha, KernelMethod::quadrature);
      sweep.push_back({l, v.value});
      auto r = make_row("c7.kernel_l1_norm.lambda=" + fmt(l), "kernels", "quadrature");
      r.k_mag = 1.0;
      r.lambda = l;
      r.alpha = alpha;
      r.value = v.value;
      out.rows.push_back(std::move(r));
    }
    const double expected = 1.0 / (2.0 * alpha) - 1.0;
    const auto f = fit_exponent(sweep);
    out.fits.push_back(fit_row("c7.kernel_l1_norm.alpha=3.lambda", f, expected, 0.02));
    out.note("kernel_l1_norm lambda slope " + fmt(f.exponent) + " (expected " + fmt(expected) + ")");
    out.require(out.fits.back().pass, "kernel_l1_norm slope " + fmt(f.exponent) + " outside -5/6 +- 0.02");
  }

  // |k|^{1/alpha} E int e^{-2 l t} |rho|^2 <= C psi_f0 / l^{1 - 1/(2 alpha)}
  const std::vector<double> lambdas = {0.25, 0.5, 1.0, 2.0, 4.0};
  double sups[2] = {};
  for (int li = 0; li < 2; ++li) {
    const int n = li == 0 ? 129 : 257;
    GridSpec s = uniform_spec(ks, n, 1.0, 4);
    s.scalar_velocity = true;
    const auto grid = build_grid(s);
    const auto data = gaussian_bump(grid);
    std::vector<Ratio> rs;
    for (std::size_t k = 0; k < ks.size(); ++k) {
      const double nf0 = initial_norm_sq(grid, data, kPsi, k);
      for (double l : lambdas) {
        Ratio r{make_row("c7.g0_stoch.cubic.n_xi=" + std::to_string(n) + ".k=" + fmt(kmags[k]) + ".lambda=" + fmt(l),
                         "g0_stoch", "oracle")};
        r.row.k_index = static_cast<long>(k);
        r.row.k_mag = kmags[k];
        r.row.lambda = l;
        r.row.alpha = alpha;
        r.value = std::pow(kmags[k], 1.0 / alpha) * energy_g0_stochastic(grid, data, field, kPsi, l, k);
        r.shape = nf0 / std::pow(l, 1.0 - 1.0 / (2.0 * alpha));
        r.calib = li == 0;
        rs.push_back(std::move(r));
      }
    }
    sups[li] = 0.0;
    for (const auto& r : rs) sups[li] = std::max(sups[li], r.value / r.shape);
    judge("C_alpha3", std::move(rs), out);
  }
  out.note("cubic-field sup ratio 129 nodes " + fmt(sups[0]) + ", 257 nodes " + fmt(sups[1]));
  return out;
}

void Battery::technic_sweep(CheckOutcome& out) {
  const std::vector<double> kd = {-4.0, -1.0, 0.0, 1.0, 4.0};
  for (double beta : {0.1, 0.25, 0.4}) {
    std::vector<Ratio> rs;
    for (int e = -3; e <= 3; ++e) {
      const double l = std::ldexp(1.0, e);
      double worst = 0.0;
      for (double a : kd)
        for (double b : kd)
          for (double c : kd) {
            const auto t = technic_kernel(l, a, b, c, beta, 1.0);
            worst = std::max(worst, std::abs(t.lhs) / t.rhs);
          }
      Ratio r{make_row("technic.beta=" + fmt(beta) + ".lambda=" + fmt(l), "time_reg", "quadrature")};
      r.row.lambda = l;
      r.row.beta = beta;
      r.value = worst;
      r.shape = 1.0;
      rs.push_back(std::move(r));
    }
    judge("C_technic_b" + fmt(beta), std::move(rs), out);
  }
  // lhs(c l, sqrt(c) kd) = c^{2 beta - 1} lhs(l, kd)
  double worst = 0.0;
  for (double beta : {0.1, 0.25, 0.4})
    for (double c : {0.25, 4.0, 16.0}) {
      const double l0 = technic_kernel(0.5, 1.0, -1.0, 4.0, beta, 1.0).lhs;
      const double s = std::sqrt(c);
      const double l1 = technic_kernel(0.5 * c, s, -s, 4.0 * s, beta, 1.0).lhs;
      worst = std::max(worst, rel_diff(l1, std::pow(c, 2.0 * beta - 1.0) * l0));
    }
  auto r = make_row("technic.homogeneity", "time_reg", "quadrature");
  r.value = worst;
  r.bound = 1e-8;
  r.pass = worst <= 1e-8;
  out.rows.push_back(r);
  out.require(*r.pass, "technic homogeneity off by " + fmt(worst));
}

void Battery::bracket_sweep(CheckOutcome& out) {
  {
    const Complex F = f_bracket(1.0, 1.0, 0.5);
    const double err = std::abs(F - 2.0 * std::log(2.0));
    auto r = make_row("bracket.F(1,1).beta=0.5", "time_reg", "quadrature");
    r.beta = 0.5;
    r.value = F.real();
    r.bound = 2.0 * std::log(2.0);
    r.pass = err <= 1e-6;
    out.rows.push_back(r);
    out.note("F(1,1; 1/2) - 2 ln 2 = " + fmt(err));
    out.require(*r.pass, "F(1,1; 1/2) differs from 2 ln 2 by " + fmt(err));
  }
  std::vector<Complex> args;
  for (double x : {0.0, 0.5, 2.0})
    for (double y : {-8.0, -1.0, 0.0, 1.0, 8.0}) args.push_back({x, y});
  for (double beta : {0.25, 0.5, 0.75}) {
    double worst = 0.0;
    for (Complex a : args)
      for (Complex b : args) {
        const double m = std::norm(a) + std::norm(b);
        if (m == 0.0) continue;
        worst = std::max(worst, std::abs(f_bracket(a, b, beta)) / std::pow(m, beta));
      }
    Ratio r{make_row("bracket.sup.beta=" + fmt(beta), "time_reg", "quadrature")};
    r.row.beta = beta;
    r.value = worst;
    std::vector<Ratio> rs;
    rs.push_back(std::move(r));
    judge("C_F_b" + fmt(beta), std::move(rs), out);
  }
}

CheckOutcome Battery::time_regularity() {
  CheckOutcome out;
  out.title = "Time regularity under Brownian transport";
  technic_sweep(out);

  {  // weight^2 * Gagliardo(beta = 1/4) <= C psi_f0
    const auto grid = build_grid(uniform_spec(wavenumber_ladder(16), 65, 1.0, 4));
    const auto data = gaussian_bump(grid);
    const auto field = VelocityField::identity(1);
    std::vector<Ratio> rs;
    for (double l : {0.25, 1.0, 4.0}) {
      const SobolevWeight w{WeightMode::thm41, 0.5, l, 1.0};
      for (std::size_t k = 0; k < grid.n_k(); ++k) {
        const double km = norm(grid.wavenumbers[k]);
        Ratio r{make_row("c8.weighted_gagliardo.k=" + fmt(km) + ".lambda=" + fmt(l), "time_reg", "oracle")};
        r.row.k_index = static_cast<long>(k);
        r.row.k_mag = km;
        r.row.lambda = l;
        r.row.beta = 0.25;
        r.value = w(km) * gagliardo_g0(grid, data, field, kPsi, l, 0.25, k);
        r.shape = initial_norm_sq(grid, data, kPsi, k);
        rs.push_back(std::move(r));
      }
    }
    judge("C_t41", std::move(rs), out);
  }
  if (calibrating_) return out;

  {  // |k| growth at beta = 0.35, in the regime |k| >= 64 sqrt(lambda)
    const double l = std::ldexp(1.0, -10), beta = 0.35;
    const auto grid = build_grid(uniform_spec(ks_of({2, 4, 8, 16}), 513, 1.0, 4));
    const auto data = gaussian_bump(grid);
    const auto field = VelocityField::identity(1);
    std::vector<std::pair<double, double>> sweep;
    for (std::size_t k = 0; k < grid.n_k(); ++k) {
      const double km = norm(grid.wavenumbers[k]);
      const double v = gagliardo_g0(grid, data, field, kPsi, l, beta, k);
      sweep.push_back({km, v});
      auto r = make_row("c8.gagliardo.k_growth.k=" + fmt(km), "time_reg", "oracle");
      r.k_index = static_cast<long>(k);
      r.k_mag = km;
      r.lambda = l;
      r.beta = beta;
      r.value = v;
      out.rows.push_back(std::move(r));
    }
    try {
      const auto f = fit_exponent_guarded(
          sweep, [&](double k) { return k >= 64.0 * std::sqrt(l); }, "|k| >= 64 sqrt(lambda)");
      out.fits.push_back(fit_row("c8.gagliardo.beta=0.35.k", f, 4.0 * beta - 1.0, 0.10));
      out.note("Gagliardo |k| slope " + fmt(f.exponent) + " +- " + fmt(f.half_width) + " (expected 0.4)");
      out.require(out.fits.back().pass, "Gagliardo |k| slope " + fmt(f.exponent) + " outside 0.40 +- 0.10");
    } catch (const std::domain_error& e) {
      out.require(false, e.what());
    }
  }

  {  // simulated discrete seminorm vs the oracle
    const double l = 1.0, beta = 0.25;
    const auto grid = build_grid(uniform_spec(ks_of({1, 2, 4}), 17, horizon_for(l), 1024));
    const auto data = gaussian_bump(grid);
    const auto field = VelocityField::identity(1);
    FunctionalSpec fs;
    fs.kind = FunctionalKind::gagliardo;
    fs.lambda = l;
    fs.beta = beta;
    McOptions mo;
    mo.n_paths = 10000;
    mo.n_batches = 20;
    mo.master_seed = opt_.seed;
    mo.threads = opt_.threads;
    const auto est = estimate(fs, grid, data, field, kPsi, mo);
    std::size_t bad = 0;
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.n_k(); ++k) {
      const double km = norm(grid.wavenumbers[k]);
      const double oracle = gagliardo_g0(grid, data, field, kPsi, l, beta, k);
      auto r = make_row("c8.gagliardo.mc_vs_oracle.k=" + fmt(km), "time_reg", "mc");
      r.k_index = static_cast<long>(k);
      r.k_mag = km;
      r.lambda = l;
      r.beta = beta;
      set_mc(r, est[k]);
      r.bound = oracle;
      const double e = rel_diff(est[k].value, oracle);
      worst = std::max(worst, e);
      r.pass = e <= 0.10;
      if (!*r.pass) ++bad;
      out.rows.push_back(std::move(r));
    }
    out.note("simulated Gagliardo vs oracle: worst relative difference " + fmt(worst));
    out.require(bad == 0, std::to_string(bad) + " modes differ from the Gagliardo oracle by > 10%");
  }
  return out;
}

CheckOutcome Battery::deterministic_time_regularity() {
  CheckOutcome out;
  out.title = "Time regularity under deterministic transport";
  bracket_sweep(out);

  const double l = 1.0, beta = 0.49;
  const auto field = VelocityField::identity(1);
  const std::vector<Vec2> ks = wavenumber_ladder(16);
  FunctionalSpec fs;
  fs.kind = FunctionalKind::gagliardo;
  fs.lambda = l;
  fs.beta = beta;
  auto linear_values = [&](int n_t) {
    const auto grid = build_grid(uniform_spec(ks, 17, horizon_for(l), n_t));
    const auto data = gaussian_bump(grid);
    const auto trace = solve_trace(grid, data, field, linear_path(grid), kPsi);
    return evaluate_functional(fs, grid, trace);
  };
  const auto fine = linear_values(2048);
  {
    const auto grid = build_grid(uniform_spec(ks, 17, 1.0, 4));
    const auto data = gaussian_bump(grid);
    std::vector<Ratio> rs;
    for (std::size_t k = 0; k < ks.size(); ++k) {
      Ratio r{make_row("c9.linear_gagliardo.k=" + fmt(norm(ks[k])), "g0_det", "quadrature")};
      r.row.k_index = static_cast<long>(k);
      r.row.k_mag = norm(ks[k]);
      r.row.lambda = l;
      r.row.beta = beta;
      r.value = fine[k];
      r.shape = initial_norm_sq(grid, data, kPsi, k);
      rs.push_back(std::move(r));
    }
    judge("C_detgag", std::move(rs), out);
  }
  if (calibrating_) return out;

  // Refinement n_t = 64 -> 2048: the linear-path value settles, the Brownian one keeps growing.
  const auto coarse = linear_values(64);
  const std::vector<std::size_t> probe = {3, 7, 15};  // |k| = 4, 8, 16
  std::vector<Vec2> pk;
  for (std::size_t i : probe) pk.push_back(ks[i]);
  std::vector<double> stoch[2];
  const int levels[2] = {64, 2048};
  for (int li = 0; li < 2; ++li) {
    const auto grid = build_grid(uniform_spec(pk, 17, horizon_for(l), levels[li]));
    const auto data = gaussian_bump(grid);
    McOptions mo;
    mo.n_paths = 1000;
    mo.n_batches = 20;
    mo.master_seed = opt_.seed;
    mo.threads = opt_.threads;
    for (const auto& e : estimate(fs, grid, data, field, kPsi, mo)) stoch[li].push_back(e.value);
  }
  std::size_t bad = 0;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double km = norm(pk[i]);
    const double rs = stoch[1][i] / stoch[0][i];
    const double rl = fine[probe[i]] / coarse[probe[i]];
    auto r = make_row("c9.refinement_ratio.brownian.k=" + fmt(km), "time_reg", "mc");
    r.k_index = static_cast<long>(probe[i]);
    r.k_mag = km;
    r.lambda = l;
    r.beta = beta;
    r.value = rs;
    r.bound = 1.5;
    r.pass = rs > 1.5;
    r.n_paths = 1000;
    r.seed = opt_.seed;
    if (!*r.pass) ++bad;
    out.rows.push_back(r);
    auto q = make_row("c9.refinement_ratio.linear.k=" + fmt(km), "g0_det", "quadrature");
    q.k_index = static_cast<long>(probe[i]);
    q.k_mag = km;
    q.lambda = l;
    q.beta = beta;
    q.value = rl;
    q.bound = 1.5;
    q.pass = rl < 1.5;
    if (!*q.pass) ++bad;
    out.rows.push_back(q);
    out.note("|k| = " + fmt(km) + ": refinement ratio Brownian " + fmt(rs) + ", linear " + fmt(rl));
  }
  out.require(bad == 0, "refinement ratios do not separate Brownian (> 1.5) from linear (< 1.5)");
  return out;
}

CheckOutcome Battery::div_case() {
  CheckOutcome out;
  out.title = "Divergence-form source";
  {
    std::vector<std::pair<double, double>> sweep;
    for (double k : {2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) sweep.push_back({k, div_two_term(select_lambda_div(k), k)});
    const auto f = fit_exponent(sweep);
    out.fits.push_back(fit_row("c10.div_two_term.k", f, -2.0 / 3.0, 1e-10));
    out.note("two-term bound slope at lambda = |k|^{2/3}: " + fmt(f.exponent));
    out.require(out.fits.back().pass, "two-term bound slope " + fmt(f.exponent) + " is not -2/3");
  }
  {
    std::size_t bad = 0;
    for (double k : {2.0, 4.0, 8.0, 16.0}) {
      const double target = select_lambda_div(k);
      const double found = minimize_lambda([&](double l) { return div_two_term(l, k); }, 1e-4, 1e4);
      auto r = make_row("c10.minimizer.k=" + fmt(k), "div", "closed_form");
      r.k_mag = k;
      r.lambda = found;
      r.value = found;
      r.bound = target;
      r.pass = rel_diff(found, target) <= 0.01;
      if (!*r.pass) ++bad;
      out.rows.push_back(r);
      out.note("|k| = " + fmt(k) + ": line-search minimizer " + fmt(found) + " vs |k|^{2/3} = " + fmt(target));
    }
    out.require(bad == 0, "line-search minimizer of the two-term bound misses |k|^{2/3} by more than 1% (" +
                              std::to_string(bad) + " of 4)");
  }
  {
    const std::vector<double> kmags = {2, 4, 8, 16};
    const auto grid = build_grid(uniform_spec(ks_of({2, 4, 8, 16}), 129, 2.0, 512));
    const auto data = div_source(grid, Profile{}, 1.0);
    const auto field = VelocityField::identity(1);
    FunctionalSpec fs;
    fs.kind = FunctionalKind::damped_energy;
    fs.lambda = 0.0;
    McOptions mo;
    mo.n_paths = 2000;
    mo.n_batches = 20;
    mo.master_seed = calibrating_ ? opt_.seed + 1 : opt_.seed;
    mo.threads = opt_.threads;
    const auto est = estimate(fs, grid, data, field, kPsi, mo);
    std::vector<Ratio> rs;
    for (std::size_t k = 0; k < kmags.size(); ++k) {
      const double l = select_lambda_div(kmags[k]);
      const auto b = div_case_bound(data_norms(grid, data, field, kPsi, k, l), l, kmags[k]);
      Ratio r{make_row("c10.div_energy.k=" + fmt(kmags[k]), "div", "mc")};
      r.row.k_index = static_cast<long>(k);
      r.row.k_mag = kmags[k];
      r.row.lambda = l;
      r.row.stderr_ = est[k].stderr_;
      r.row.n_paths = static_cast<long>(est[k].n_paths);
      r.row.seed = est[k].master_seed;
      r.value = est[k].value;
      r.shape = b.total;
      rs.push_back(std::move(r));
    }
    judge("C_div", std::move(rs), out);
  }
  return out;
}

// ---------------------------------------------------------------------------------------------

CheckOutcome Battery::pathwise(std::size_t instances) {
  CheckOutcome out;
  out.title = "Pathwise L1 / Linf bounds";
  GridSpec s = uniform_spec({{1.0, 0.0}}, 17, 2.0, 32);
  const auto grid = build_grid(s);
  const TestFunction psi(PsiKind::bump, 0.9);
  std::size_t bad = 0;
  double w1 = 0.0, winf = 0.0;
  for (std::size_t i = 0; i < instances; ++i) {
    const auto f0 = random_nonnegative_datum(grid, path_seed(opt_.seed ^ 0x5a5a5a5aULL, i));
    const auto field = i % 2 ? VelocityField::identity(1) : VelocityField::curve(Curve::cubic, 1, 3.0, 0.25);
    const auto rep = pathwise_bounds_check(grid, f0, psi, sample_path(grid, path_seed(opt_.seed, i)), field);
    w1 = std::max(w1, rep.worst_l1_ratio);
    winf = std::max(winf, rep.worst_linf_ratio);
    const std::string tag = i % 2 ? "identity" : "cubic";
    auto r1 = make_row("pathwise.l1.instance=" + std::to_string(i) + "." + tag, "pathwise", "sim");
    r1.value = rep.worst_l1_ratio;
    r1.bound = 1.0;
    r1.pass = rep.l1_ok;
    r1.seed = opt_.seed;
    auto r2 = r1;
    r2.experiment_id = "pathwise.linf.instance=" + std::to_string(i) + "." + tag;
    r2.value = rep.worst_linf_ratio;
    r2.pass = rep.linf_ok;
    if (!rep.l1_ok || !rep.linf_ok) ++bad;
    out.rows.push_back(std::move(r1));
    out.rows.push_back(std::move(r2));
  }
  out.note(std::to_string(instances) + " instances, worst L1 ratio " + fmt(w1) + ", worst Linf ratio " + fmt(winf));
  out.require(bad == 0, std::to_string(bad) + " instances violate a pathwise bound");
  return out;
}

CheckOutcome Battery::kernels_verify() {
  CheckOutcome out = kernel_closed_forms();
  out.title = "Kernel identities and bounds";
  technic_sweep(out);
  bracket_sweep(out);
  const double c0 = div_moment_sup();
  std::size_t bad = 0;
  for (double l : {0.01, 0.1, 1.0, 10.0, 100.0})
    for (double q : {0.0, 1e-3, 0.1, 1.0, 10.0, 1e3}) {
      const auto b = div_moment_kernel(l, q, c0);
      auto r = make_row("div_moment.lambda=" + fmt(l) + ".q=" + fmt(q), "kernels", "quadrature");
      r.lambda = l;
      r.value = b.value;
      r.bound = b.bound;
      r.pass = b.pass;
      if (!b.pass) ++bad;
      out.rows.push_back(std::move(r));
    }
  out.require(bad == 0, std::to_string(bad) + " divergence moment kernels exceed c0 / (4 lambda + q)^2");
  return out;
}

CheckOutcome Battery::run(int criterion) {
  CheckOutcome out;
  switch (criterion) {
    case 1: out = gaussian_identities(); break;
    case 2: out = kernel_closed_forms(); break;
    case 3: out = oracle_vs_mc(); break;
    case 4: out = lambda_exponent(); break;
    case 5: out = inequality_suite(); break;
    case 6: out = deterministic_contrast(); break;
    case 7: out = general_field(); break;
    case 8: out = time_regularity(); break;
    case 9: out = deterministic_time_regularity(); break;
    case 10: out = div_case(); break;
    case 11: out = pathwise(100); break;
    default: throw std::out_of_range("criterion must be in 1.." + std::to_string(kCriteria));
  }
  out.criterion = criterion;
  return out;
}

std::vector<CheckOutcome> Battery::run_all() {
  std::vector<CheckOutcome> all;
  for (int c = 1; c <= kCriteria; ++c) all.push_back(run(c));
  return all;
}

GoldenConstants Battery::calibrate() {
  calibrating_ = true;
  observed_ = GoldenConstants{};
  try {
    for (int c : {5, 6, 7, 8, 9, 10}) run(c);
  } catch (...) {
    calibrating_ = false;
    throw;
  }
  calibrating_ = false;
  return observed_;
}

}  // namespace kal
