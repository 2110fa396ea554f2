#include "kal/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace kal {

namespace {

void check_lambda(double lambda, double horizon) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  if (lambda == 0.0 && !std::isfinite(horizon)) throw std::invalid_argument("lambda must be positive");
}

// int_0^T e^{-a t} dt
double finite_laplace(double a, double T) {
  if (!std::isfinite(T)) return 1.0 / a;
  if (a == 0.0) return T;
  return -std::expm1(-a * T) / a;
}

// Weighted source samples G_m(t_j) = w_m psi_m g(k, m, t_j).
std::vector<Complex> weighted_source(const SpectralGrid& grid, const KineticData& data, const TestFunction& psi,
                                     std::size_t k, std::size_t m) {
  const std::size_t nt = grid.n_t();
  std::vector<Complex> G(nt);
  const double wp = grid.velocity_weights[m] * psi(grid.velocity_nodes[m]);
  for (std::size_t j = 0; j < nt; ++j) G[j] = wp * data.g(k, m, j);
  return G;
}

// H(t_j) = int_0^{t_j} e^{-kappa (t_j - s)} h(s) ds, trapezoid on the product.
std::vector<Complex> damped_convolution(const std::vector<double>& t, const std::vector<Complex>& h, double kappa) {
  std::vector<Complex> H(t.size());
  H[0] = 0.0;
  for (std::size_t j = 1; j < t.size(); ++j) {
    const double d = t[j] - t[j - 1];
    H[j] = std::exp(-kappa * d) * (H[j - 1] + 0.5 * d * h[j - 1]) + 0.5 * d * h[j];
  }
  return H;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t j = 1; j < t.size(); ++j) s += 0.5 * (t[j] - t[j - 1]) * (f[j - 1] + f[j]);
  return s;
}

// xi-derivative of the first h component by central differences (one-sided at the ends).
std::vector<Complex> div_xi_h(const SpectralGrid& grid, const KineticData& data, std::size_t k, std::size_t j) {
  if (grid.velocity_dim != 1) throw std::invalid_argument("div_xi norms implemented for scalar velocity only");
  const std::size_t n = grid.n_xi();
  const double h = grid.xi_step();
  std::vector<Complex> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    if (m == 0)
      out[m] = (data.h(0, k, 1, j) - data.h(0, k, 0, j)) / h;
    else if (m + 1 == n)
      out[m] = (data.h(0, k, m, j) - data.h(0, k, m - 1, j)) / h;
    else
      out[m] = (data.h(0, k, m + 1, j) - data.h(0, k, m - 1, j)) / (2.0 * h);
  }
  return out;
}

}  // namespace

bool affine_phases(const SpectralGrid& grid, const VelocityField& field) {
  return grid.uniform_scalar_velocity() && field.curve_kind() == Curve::identity;
}

double energy_g0_stochastic(const SpectralGrid& grid, const KineticData& data, const VelocityField& field,
                            const TestFunction& psi, double lambda, std::size_t k, double horizon) {
  check_lambda(lambda, horizon);
  const auto c = weighted_initial(grid, data, psi, k);
  const auto theta = phase_rates(grid, field, k);
  auto K = [&](double d) { return finite_laplace(2.0 * lambda + 0.5 * d * d, horizon); };
  return pair_sum(c, theta, affine_phases(grid, field), K).real();
}

double energy_g0_deterministic(const SpectralGrid& grid, const KineticData& data, const VelocityField& field,
                               const TestFunction& psi, double lambda, std::size_t k, double horizon) {
  check_lambda(lambda, horizon);
  const auto c = weighted_initial(grid, data, psi, k);
  const auto theta = phase_rates(grid, field, k);
  auto K = [&](double d) -> Complex {
    const Complex a(2.0 * lambda, d);
    if (!std::isfinite(horizon)) return 1.0 / a;
    if (lambda == 0.0 && d == 0.0) return horizon;
    return (1.0 - std::exp(-a * horizon)) / a;
  };
  return pair_sum(c, theta, affine_phases(grid, field), K).real();
}

double energy_f0zero_stochastic(const SpectralGrid& grid, const KineticData& data, const VelocityField& field,
                                const TestFunction& psi, double lambda, std::size_t k, double horizon) {
  check_lambda(lambda, horizon);
  if (data.source != SourceKind::plain) throw std::invalid_argument("f0zero oracle needs a plain source g");
  const std::size_t nx = grid.n_xi(), nt = grid.n_t();
  const auto& t = grid.times;
  const auto theta = phase_rates(grid, field, k);

  std::vector<std::vector<Complex>> G(nx), H(nx);
  std::vector<bool> active(nx, false);
  for (std::size_t m = 0; m < nx; ++m) {
    G[m] = weighted_source(grid, data, psi, k, m);
    for (auto v : G[m]) active[m] = active[m] || v != Complex{};
    if (!active[m]) continue;
    std::vector<Complex> conjG(nt);
    for (std::size_t j = 0; j < nt; ++j) conjG[j] = std::conj(G[m][j]);
    H[m] = damped_convolution(t, conjG, 0.5 * theta[m] * theta[m]);
  }

  std::vector<double> decay(nt);
  for (std::size_t j = 0; j < nt; ++j) decay[j] = std::exp(-2.0 * lambda * t[j]);

  Complex total{};
  std::vector<Complex> prod(nt);
  for (std::size_t m = 0; m < nx; ++m) {
    if (!active[m]) continue;
    for (std::size_t n = 0; n < nx; ++n) {
      if (!active[n]) continue;
      const double d = theta[m] - theta[n];
      const double a = 2.0 * lambda + 0.5 * d * d;
      Complex s{};
      for (std::size_t j = 0; j < nt; ++j) {
        const double w = std::isfinite(horizon) ? decay[j] * finite_laplace(a, std::max(horizon - t[j], 0.0))
                                                : decay[j] / a;
        prod[j] = w * G[m][j] * H[n][j];
      }
      for (std::size_t j = 1; j < nt; ++j) s += 0.5 * (t[j] - t[j - 1]) * (prod[j - 1] + prod[j]);
      total += s;
    }
  }
  return 2.0 * total.real();
}

double gagliardo_g0(const SpectralGrid& grid, const KineticData& data, const VelocityField& field,
                    const TestFunction& psi, double lambda, double beta, std::size_t k) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(beta > 0.0 && beta < 0.5)) throw std::invalid_argument("beta must lie in (0,1/2)");
  const auto c = weighted_initial(grid, data, psi, k);
  const auto theta = phase_rates(grid, field, k);
  double s = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m) {
    if (c[m] == Complex{}) continue;
    s += std::norm(c[m]) * gagliardo_pair_stochastic(lambda, theta[m], theta[m], beta);
    for (std::size_t n = m + 1; n < c.size(); ++n) {
      if (c[n] == Complex{}) continue;
      s += 2.0 * (c[m] * std::conj(c[n])).real() * gagliardo_pair_stochastic(lambda, theta[m], theta[n], beta);
    }
  }
  return s;
}

double gagliardo_g0_deterministic(const SpectralGrid& grid, const KineticData& data, const VelocityField& field,
                                  const TestFunction& psi, double lambda, double beta, std::size_t k) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0,1)");
  const auto c = weighted_initial(grid, data, psi, k);
  const auto theta = phase_rates(grid, field, k);
  double s = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m) {
    if (c[m] == Complex{}) continue;
    s += std::norm(c[m]) * gagliardo_pair_deterministic(lambda, theta[m], theta[m], beta).real();
    for (std::size_t n = m + 1; n < c.size(); ++n) {
      if (c[n] == Complex{}) continue;
      s += 2.0 * (c[m] * std::conj(c[n]) * gagliardo_pair_deterministic(lambda, theta[m], theta[n], beta)).real();
    }
  }
  return s;
}

DataNorms data_norms(const SpectralGrid& grid, const KineticData& data, const VelocityField& field,
                     const TestFunction& psi, std::size_t k, double lambda) {
  DataNorms out;
  const std::size_t nx = grid.n_xi(), nt = grid.n_t();
  const auto& t = grid.times;
  const double T = grid.horizon();
  const auto theta = phase_rates(grid, field, k);
  out.psi_f0 = initial_norm_sq(grid, data, psi, k);
  // Transport is unimodular, so the f0 part of ||psi f||^2 is T ||psi f0||^2. Mixed f0/source
  // data are not combined here.
  out.psi_f = T * out.psi_f0;

  std::vector<double> f(nt), e(nt), eg(nt);
  if (data.source == SourceKind::none) return out;

  // Pointwise-in-xi source samples: g itself, or div_xi h.
  std::vector<std::vector<Complex>> src(nx, std::vector<Complex>(nt));
  if (data.source == SourceKind::plain) {
    for (std::size_t m = 0; m < nx; ++m)
      for (std::size_t j = 0; j < nt; ++j) src[m][j] = data.g(k, m, j);
  } else {
    for (std::size_t j = 0; j < nt; ++j) {
      const auto dh = div_xi_h(grid, data, k, j);
      for (std::size_t m = 0; m < nx; ++m) src[m][j] = dh[m];
    }
  }

  for (std::size_t m = 0; m < nx; ++m) {
    const double w = grid.velocity_weights[m];
    const double p = psi(grid.velocity_nodes[m]);
    const Vec2 gp = psi.gradient(grid.velocity_nodes[m]);
    if (data.source == SourceKind::plain) {
      for (std::size_t j = 0; j < nt; ++j) {
        f[j] = std::norm(p * data.g(k, m, j));
        eg[j] = std::exp(-2.0 * lambda * t[j]) * f[j];
      }
      out.psi_g += w * trapezoid(t, f);
      out.psi_g_damped += w * trapezoid(t, eg);
    } else {
      for (std::size_t j = 0; j < nt; ++j) {
        double hh = 0.0;
        Complex gh{};
        for (int c = 0; c < data.h_components; ++c) {
          hh += std::norm(data.h(c, k, m, j));
          gh += data.h(c, k, m, j) * (c == 0 ? gp.x : gp.y);
        }
        f[j] = p * p * hh;
        e[j] = std::norm(gh);
      }
      out.psi_h += w * trapezoid(t, f);
      out.grad_psi_h += w * trapezoid(t, e);
    }
    if (p == 0.0) continue;
    // E |f(t)|^2 = 2 Re int_0^t src(s1) int_0^{s1} e^{-(s1 - s2) theta^2/2} conj(src(s2)) ds2 ds1
    std::vector<Complex> conj_src(nt);
    for (std::size_t j = 0; j < nt; ++j) conj_src[j] = std::conj(src[m][j]);
    const auto H = damped_convolution(t, conj_src, 0.5 * theta[m] * theta[m]);
    std::vector<double> inner(nt), cum(nt);
    for (std::size_t j = 0; j < nt; ++j) inner[j] = 2.0 * (src[m][j] * H[j]).real();
    cum[0] = 0.0;
    for (std::size_t j = 1; j < nt; ++j) cum[j] = cum[j - 1] + 0.5 * (t[j] - t[j - 1]) * (inner[j - 1] + inner[j]);
    out.psi_f += w * p * p * trapezoid(t, cum);
  }
  return out;
}

DivBound div_case_bound(const DataNorms& norms, double lambda, double kmag) {
  if (!(lambda > 0.0) || !(kmag > 0.0)) throw std::invalid_argument("lambda and |k| must be positive");
  DivBound b;
  b.two_term = (kmag / std::pow(lambda, 2.5) + std::sqrt(lambda) / kmag) * (norms.psi_h + norms.psi_f);
  b.grad_term = norms.grad_psi_h / (std::pow(lambda, 1.5) * kmag);
  b.total = b.two_term + b.grad_term;
  return b;
}

}  // namespace kal
