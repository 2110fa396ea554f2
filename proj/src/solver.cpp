#include "kal/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace kal {

namespace {

inline Complex expi(double x) { return {std::cos(x), std::sin(x)}; }

bool affine_phase(const SpectralGrid& grid, const VelocityField& field) {
  return grid.uniform_scalar_velocity() && field.curve_kind() == Curve::identity;
}

// out[j] = trapezoid integral of f over [t_0, t_j].
void cumtrapz(const std::vector<double>& t, const std::vector<Complex>& f, std::vector<Complex>& out) {
  out[0] = 0.0;
  for (std::size_t j = 1; j < t.size(); ++j) out[j] = out[j - 1] + 0.5 * (t[j] - t[j - 1]) * (f[j - 1] + f[j]);
}

}  // namespace

AverageTrace solve_trace(const SpectralGrid& grid, const KineticData& data, const VelocityField& field,
                         const DrivingPath& path, const TestFunction& psi) {
  data.validate(grid);
  if (path.values.size() != grid.n_t()) throw std::invalid_argument("path does not match the time grid");
  if (data.source == SourceKind::div_xi && field.mode() != FieldMode::identity)
    throw std::invalid_argument("div_xi sources require the identity velocity field");

  const std::size_t nk = grid.n_k(), nx = grid.n_xi(), nt = grid.n_t();
  const auto& B = path.values;
  const auto& t = grid.times;

  AverageTrace tr;
  tr.n_k = nk;
  tr.n_t = nt;
  tr.values.assign(nk * nt, Complex{});
  tr.data_id = data.id;
  tr.path_id = path.path_id;

  std::vector<double> psi_v(nx);
  std::vector<Vec2> grad_psi(nx);
  for (std::size_t m = 0; m < nx; ++m) {
    psi_v[m] = psi(grid.velocity_nodes[m]);
    if (data.source == SourceKind::div_xi) grad_psi[m] = psi.gradient(grid.velocity_nodes[m]);
  }

  const bool fast = affine_phase(grid, field);
  std::vector<Complex> E(nt), cur(nt), step(nt), acc(nt), f(nt), S(nt), f1(nt), S1(nt);

  for (std::size_t k = 0; k < nk; ++k) {
    const Vec2 kv = grid.wavenumbers[k];
    const auto theta = phase_rates(grid, field, k);
    if (fast && nx > 1) {
      const double delta = theta[1] - theta[0];
      for (std::size_t j = 0; j < nt; ++j) {
        cur[j] = expi(B[j] * theta[0]);
        step[j] = expi(B[j] * delta);
      }
    }
    std::fill(acc.begin(), acc.end(), Complex{});

    for (std::size_t m = 0; m < nx; ++m) {
      if (fast) {
        E = cur;
        if (m + 1 < nx) {
          // Re-anchor periodically so the running product does not drift.
          if ((m + 1) % 64 == 0) {
            for (std::size_t j = 0; j < nt; ++j) cur[j] = expi(B[j] * theta[m + 1]);
          } else {
            for (std::size_t j = 0; j < nt; ++j) cur[j] *= step[j];
          }
        }
      } else {
        for (std::size_t j = 0; j < nt; ++j) E[j] = expi(B[j] * theta[m]);
      }

      const double w = grid.velocity_weights[m];
      const Complex c = w * psi_v[m] * data.f0(k, m);
      if (c != Complex{})
        for (std::size_t j = 0; j < nt; ++j) acc[j] += c * std::conj(E[j]);

      if (data.source == SourceKind::plain) {
        if (psi_v[m] == 0.0) continue;
        for (std::size_t j = 0; j < nt; ++j) f[j] = data.g(k, m, j) * E[j];
        cumtrapz(t, f, S);
        const double wp = w * psi_v[m];
        for (std::size_t j = 0; j < nt; ++j) acc[j] += wp * std::conj(E[j]) * S[j];
      } else if (data.source == SourceKind::div_xi) {
        const Vec2 gp = grad_psi[m];
        bool any = false;
        for (std::size_t j = 0; j < nt; ++j) {
          Complex hx = data.h(0, k, m, j);
          Complex hy = data.h_components > 1 ? data.h(1, k, m, j) : Complex{};
          const Complex leibniz = -(hx * gp.x + hy * gp.y);
          const Complex kh = psi_v[m] * (kv.x * hx + kv.y * hy);
          f[j] = leibniz * E[j];
          f1[j] = kh * E[j];
          any = any || leibniz != Complex{} || kh != Complex{};
        }
        if (!any) continue;
        // part 1: -h.grad psi as an ordinary source
        cumtrapz(t, f, S);
        for (std::size_t j = 0; j < nt; ++j) acc[j] += w * std::conj(E[j]) * S[j];
        // part 2: i (B_j S0_j - S1_j) with S0 = int k.h psi e^{iB theta}, S1 = int k.h psi B e^{iB theta}
        cumtrapz(t, f1, S);
        for (std::size_t j = 0; j < nt; ++j) f1[j] *= B[j];
        cumtrapz(t, f1, S1);
        const Complex I(0.0, 1.0);
        for (std::size_t j = 0; j < nt; ++j) acc[j] += w * std::conj(E[j]) * I * (B[j] * S[j] - S1[j]);
      }
    }
    for (std::size_t j = 0; j < nt; ++j) tr(k, j) = acc[j];
  }
  return tr;
}

TimeEnergy damped_time_energy(const AverageTrace& trace, const std::vector<double>& times, double lambda,
                              double tail_tol) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  if (times.size() != trace.n_t) throw std::invalid_argument("trace does not match times");
  TimeEnergy out;
  out.per_k.assign(trace.n_k, 0.0);
  std::vector<double> wt(times.size());
  for (std::size_t j = 0; j < times.size(); ++j) wt[j] = std::exp(-2.0 * lambda * times[j]);
  for (std::size_t k = 0; k < trace.n_k; ++k) {
    double s = 0.0;
    double prev = wt[0] * std::norm(trace(k, 0));
    for (std::size_t j = 1; j < times.size(); ++j) {
      const double v = wt[j] * std::norm(trace(k, j));
      s += 0.5 * (times[j] - times[j - 1]) * (prev + v);
      prev = v;
    }
    out.per_k[k] = s;
  }
  out.tail_truncated = wt.back() > tail_tol * (1.0 + 1e-9);  // slack so T = horizon_for(lambda, tol) counts as resolved
  return out;
}

double horizon_for(double lambda, double tail) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  return -std::log(tail) / (2.0 * lambda);
}

}  // namespace kal
