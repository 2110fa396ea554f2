#include "kal/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "kal/fft.hpp"

namespace kal {

double SobolevWeight::operator()(double kmag) const {
  switch (mode) {
    case WeightMode::plain:
      return std::pow(kmag, 2.0 * s);
    case WeightMode::thm41: {
      const double r = std::sqrt(lambda);
      const double w = kmag * r / (r + kmag);
      return w * w;
    }
    case WeightMode::thm41_general: {
      const double a = std::pow(kmag, 1.0 / alpha);
      const double l = std::pow(lambda, 0.5 / alpha);
      const double w = a * l / (l + a);
      return w * w;
    }
  }
  return 0.0;
}

double weighted_space_energy(const std::vector<double>& energies, const std::vector<double>& kmags,
                             const SobolevWeight& weight) {
  if (energies.size() != kmags.size()) throw std::invalid_argument("energies and |k| lists differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i) s += weight(kmags[i]) * energies[i];
  return s;
}

namespace {

void check_gagliardo_args(const std::vector<Complex>& u, const std::vector<double>& times, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0,1)");
  if (u.size() < 2 || u.size() != times.size()) throw std::invalid_argument("need >= 2 samples matching times");
}

std::vector<double> cell_weights(const std::vector<double>& t) {
  const std::size_t n = t.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double h = 0.5 * (t[j + 1] - t[j]);
    w[j] += h;
    w[j + 1] += h;
  }
  return w;
}

bool is_uniform(const std::vector<double>& t) {
  const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t j = 1; j < t.size(); ++j)
    if (std::abs(t[j] - t[j - 1] - h) > 1e-12 * std::max(1.0, std::abs(t.back()))) return false;
  return true;
}

}  // namespace

double gagliardo_seminorm_direct(const std::vector<Complex>& u, const std::vector<double>& times, double beta) {
  check_gagliardo_args(u, times, beta);
  const auto w = cell_weights(times);
  const double p = 1.0 + 2.0 * beta;
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = i + 1; j < u.size(); ++j)
      s += w[i] * w[j] * std::norm(u[i] - u[j]) * std::pow(times[j] - times[i], -p);
  return 2.0 * s;
}

double gagliardo_seminorm(const std::vector<Complex>& u, const std::vector<double>& times, double beta) {
  check_gagliardo_args(u, times, beta);
  const std::size_t n = u.size();
  if (n < 64 || !is_uniform(times)) return gagliardo_seminorm_direct(u, times, beta);

  const double h = (times.back() - times.front()) / static_cast<double>(n - 1);
  const auto w = cell_weights(times);
  const double p = 1.0 + 2.0 * beta;
  std::vector<double> K(n, 0.0), prefix(n, 0.0);
  for (std::size_t d = 1; d < n; ++d) {
    K[d] = std::pow(h * static_cast<double>(d), -p);
    prefix[d] = prefix[d - 1] + K[d];
  }
  // sum_{i != j} w_i w_j (|u_i|^2 + |u_j|^2) K_|i-j| = 2 sum_i w_i |u_i|^2 S_i with
  // S_i = sum_{j != i} w_j K_|i-j|; interior weights are h, the two end weights h/2.
  const std::size_t last = n - 1;
  double diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double S = h * (prefix[i] + prefix[last - i]);
    if (i != 0) S -= 0.5 * h * K[i];
    if (i != last) S -= 0.5 * h * K[last - i];
    diag += w[i] * std::norm(u[i]) * S;
  }
  std::vector<Complex> wu(n);
  for (std::size_t i = 0; i < n; ++i) wu[i] = w[i] * u[i];
  const auto r = autocorrelation(wu);
  double cross = 0.0;
  for (std::size_t d = 1; d < n; ++d) cross += K[d] * r[d].real();
  return 2.0 * diag - 4.0 * cross;
}

double gagliardo_zero_tail(const std::vector<Complex>& u, const std::vector<double>& times, double beta) {
  check_gagliardo_args(u, times, beta);
  const auto w = cell_weights(times);
  const double t_end = times.back() + 0.5 * (times.back() - times[times.size() - 2]);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * std::norm(u[i]) * std::pow(t_end - times[i], -2.0 * beta);
  return 2.0 * s / (2.0 * beta);
}

namespace {

long signed_freq(std::size_t q, std::size_t n) {
  return q <= n / 2 ? static_cast<long>(q) : static_cast<long>(q) - static_cast<long>(n);
}

// Value at x of the trigonometric interpolant with DFT coefficients `spec` (real data).
double trig_eval(const std::vector<Complex>& spec, double period, double x) {
  const std::size_t n = spec.size();
  double s = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    const double kx = 2.0 * std::numbers::pi * static_cast<double>(signed_freq(q, n)) / period;
    if (n % 2 == 0 && q == n / 2)
      s += spec[q].real() * std::cos(kx * x);
    else
      s += (spec[q] * std::exp(Complex(0.0, kx * x))).real();
  }
  return s / static_cast<double>(n);
}

// Supremum of |interpolant| over the torus: coarse scan at 8x the grid density (a zero-padded
// inverse FFT), then a golden-section refinement around the best sample. Shifted samples can land
// between the original nodes, so the continuous supremum is the right comparison value.
double trig_sup(const std::vector<Complex>& spec, double period) {
  const std::size_t n = spec.size();
  const std::size_t dense = 8 * n;
  const double h = period / static_cast<double>(dense);
  std::vector<Complex> padded(dense);
  for (std::size_t q = 0; q < n; ++q) {
    const long f = signed_freq(q, n);
    if (n % 2 == 0 && q == n / 2) {  // Nyquist: split the cosine evenly over +-f
      padded[static_cast<std::size_t>(f)] += 0.5 * spec[q].real();
      padded[dense - static_cast<std::size_t>(f)] += 0.5 * spec[q].real();
      continue;
    }
    padded[f >= 0 ? static_cast<std::size_t>(f) : dense - static_cast<std::size_t>(-f)] += spec[q];
  }
  dft_inplace(padded, true);
  double best = -1.0, best_x = 0.0;
  for (std::size_t i = 0; i < dense; ++i) {
    const double v = std::abs(padded[i].real()) / static_cast<double>(n);
    if (v > best) {
      best = v;
      best_x = h * static_cast<double>(i);
    }
  }
  double lo = best_x - h, hi = best_x + h;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto f = [&](double x) { return std::abs(trig_eval(spec, period, x)); };
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 > f2) {
      hi = x2; x2 = x1; f2 = f1; x1 = hi - g * (hi - lo); f1 = f(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2; x2 = lo + g * (hi - lo); f2 = f(x2);
    }
  }
  return std::max({best, f1, f2});
}

}  // namespace

PhysicalDatum random_nonnegative_datum(const SpectralGrid& grid, std::uint64_t seed, std::size_t n_x,
                                       double period) {
  PhysicalDatum d;
  d.period = period;
  d.n_x = n_x;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double dx = period / static_cast<double>(n_x);
  d.rows.assign(grid.n_xi(), std::vector<double>(n_x, 0.0));
  for (auto& row : d.rows) {
    const int bumps = 1 + static_cast<int>(unif(rng) * 3.0);
    for (int b = 0; b < bumps; ++b) {
      const double center = unif(rng) * period;
      const double width = (6.0 + 10.0 * unif(rng)) * dx;  // at least six cells: spectrally resolved
      const double amp = unif(rng);
      for (std::size_t i = 0; i < n_x; ++i) {
        const double x = dx * static_cast<double>(i);
        for (int img = -2; img <= 2; ++img) {
          const double z = (x - center + img * period) / width;
          row[i] += amp * std::exp(-0.5 * z * z);
        }
      }
    }
  }
  return d;
}

PathwiseReport pathwise_bounds_check(const SpectralGrid& grid, const PhysicalDatum& f0, const TestFunction& psi,
                                     const DrivingPath& path, const VelocityField& field, double slack) {
  const std::size_t nx = grid.n_xi(), n = f0.n_x;
  if (f0.rows.size() != nx) throw std::invalid_argument("datum rows do not match velocity nodes");
  double f_l1 = 0.0, f_sup = 0.0, psi_l1 = 0.0;
  const double dx = f0.period / static_cast<double>(n);
  std::vector<std::vector<Complex>> spec(nx);
  std::vector<double> a(nx), coef(nx);
  for (std::size_t m = 0; m < nx; ++m) {
    if (f0.rows[m].size() != n) throw std::invalid_argument("datum row has wrong length");
    for (double v : f0.rows[m]) {
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite datum");
      f_l1 += grid.velocity_weights[m] * std::abs(v) * dx;
    }
    coef[m] = grid.velocity_weights[m] * psi(grid.velocity_nodes[m]);
    psi_l1 += std::abs(coef[m]);
    a[m] = field(grid.velocity_nodes[m]).x;
    spec[m].assign(f0.rows[m].begin(), f0.rows[m].end());
    dft_inplace(spec[m], false);
    f_sup = std::max(f_sup, trig_sup(spec[m], f0.period));
  }

  PathwiseReport rep;
  std::vector<Complex> rho(n);
  for (std::size_t j = 0; j < path.values.size(); ++j) {
    std::fill(rho.begin(), rho.end(), Complex{});
    for (std::size_t m = 0; m < nx; ++m) {
      if (coef[m] == 0.0) continue;
      const double shift = path.values[j] * a[m];
      for (std::size_t q = 0; q < n; ++q) {
        // signed frequency; for even n the Nyquist mode is shifted by its cosine part only
        const double kx = 2.0 * std::numbers::pi * static_cast<double>(signed_freq(q, n)) / f0.period;
        Complex phase = std::exp(Complex(0.0, -kx * shift));
        if (n % 2 == 0 && q == n / 2) phase = std::cos(kx * shift);
        rho[q] += coef[m] * spec[m][q] * phase;
      }
    }
    dft_inplace(rho, true);
    double l1 = 0.0, sup = 0.0;
    for (auto& v : rho) {
      const double r = v.real() / static_cast<double>(n);
      l1 += std::abs(r) * dx;
      sup = std::max(sup, std::abs(r));
    }
    const double l1_ratio = f_l1 > 0.0 ? l1 / f_l1 : (l1 > 0.0 ? INFINITY : 0.0);
    const double linf_ratio = f_sup * psi_l1 > 0.0 ? sup / (psi_l1 * f_sup) : (sup > 0.0 ? INFINITY : 0.0);
    rep.worst_l1_ratio = std::max(rep.worst_l1_ratio, l1_ratio);
    rep.worst_linf_ratio = std::max(rep.worst_linf_ratio, linf_ratio);
    if (l1 > f_l1 * (1.0 + slack)) rep.l1_ok = false;
    if (sup > psi_l1 * f_sup * (1.0 + slack)) rep.linf_ok = false;
  }
  return rep;
}

}  // namespace kal
