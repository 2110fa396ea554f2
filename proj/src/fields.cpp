#include "kal/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace kal {

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

namespace {

std::vector<double> axis_nodes(double lo, double hi, int n) {
  std::vector<double> out(n);
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[i] = lo + h * i;
  out.back() = hi;
  return out;
}

std::vector<double> trapezoid_weights(double lo, double hi, int n) {
  const double h = (hi - lo) / (n - 1);
  std::vector<double> w(n, h);
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return w;
}

}  // namespace

SpectralGrid build_grid(const GridSpec& spec) {
  if (spec.dimension != 1 && spec.dimension != 2) throw std::invalid_argument("dimension must be 1 or 2");
  if (spec.wavenumbers.empty()) throw std::invalid_argument("wavenumber list is empty");
  if (spec.n_xi < 2) throw std::invalid_argument("n_xi must be >= 2");
  if (spec.n_t < 2) throw std::invalid_argument("n_t must be >= 2");
  if (!(spec.horizon > 0.0) || !std::isfinite(spec.horizon)) throw std::invalid_argument("horizon must be positive");
  if (!(spec.xi_hi > spec.xi_lo)) throw std::invalid_argument("xi_range is empty or degenerate");
  if (spec.psi_radius > 0.0 && (spec.xi_lo > -spec.psi_radius || spec.xi_hi < spec.psi_radius))
    throw std::invalid_argument("xi_range does not cover the support of psi");
  for (std::size_t i = 0; i < spec.wavenumbers.size(); ++i) {
    const Vec2 k = spec.wavenumbers[i];
    if (!std::isfinite(k.x) || !std::isfinite(k.y)) throw std::invalid_argument("non-finite wavenumber");
    if (spec.dimension == 1 && k.y != 0.0) throw std::invalid_argument("1-d wavenumbers must have y = 0");
    for (std::size_t j = 0; j < i; ++j)
      if (spec.wavenumbers[j].x == k.x && spec.wavenumbers[j].y == k.y)
        throw std::invalid_argument("duplicate wavenumber");
  }

  SpectralGrid g;
  g.dimension = spec.dimension;
  g.velocity_dim = spec.scalar_velocity ? 1 : spec.dimension;
  g.wavenumbers = spec.wavenumbers;
  g.xi_lo = spec.xi_lo;
  g.xi_hi = spec.xi_hi;
  g.n_xi_axis = spec.n_xi;
  g.time_grading = spec.time_grading;

  const auto nodes = axis_nodes(spec.xi_lo, spec.xi_hi, spec.n_xi);
  const auto weights = trapezoid_weights(spec.xi_lo, spec.xi_hi, spec.n_xi);
  if (g.velocity_dim == 1) {
    for (int i = 0; i < spec.n_xi; ++i) {
      g.velocity_nodes.push_back({nodes[i], 0.0});
      g.velocity_weights.push_back(weights[i]);
    }
  } else {
    for (int i = 0; i < spec.n_xi; ++i)
      for (int j = 0; j < spec.n_xi; ++j) {
        g.velocity_nodes.push_back({nodes[i], nodes[j]});
        g.velocity_weights.push_back(weights[i] * weights[j]);
      }
  }

  const int n = spec.n_t;
  g.times.resize(n + 1);
  g.times[0] = 0.0;
  if (spec.time_grading == TimeGrading::uniform) {
    const double dt = spec.horizon / n;
    for (int j = 1; j <= n; ++j) g.times[j] = dt * j;
  } else {
    if (!(spec.t_min > 0.0 && spec.t_min < spec.horizon))
      throw std::invalid_argument("geometric grid needs 0 < t_min < horizon");
    const double r = std::pow(spec.horizon / spec.t_min, 1.0 / (n - 1));
    for (int j = 1; j <= n; ++j) g.times[j] = spec.t_min * std::pow(r, j - 1);
  }
  g.times[n] = spec.horizon;
  return g;
}

std::vector<Vec2> wavenumber_ladder(int count, double k0) {
  std::vector<Vec2> out;
  for (int i = 1; i <= count; ++i) out.push_back({k0 * i, 0.0});
  return out;
}

TestFunction::TestFunction(PsiKind kind, double radius) : kind_(kind), radius_(radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("psi radius must be positive");
}

double TestFunction::operator()(Vec2 xi) const {
  const double r = norm(xi) / radius_;
  switch (kind_) {
    case PsiKind::bump:
      if (r >= 1.0) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - r * r));
    case PsiKind::hat:
      return r >= 1.0 ? 0.0 : 1.0 - r;
    case PsiKind::indicator:
      return r <= 1.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

Vec2 TestFunction::gradient(Vec2 xi) const {
  const double rho = norm(xi);
  const double r = rho / radius_;
  switch (kind_) {
    case PsiKind::bump: {
      if (r >= 1.0) return {};
      const double one_minus = 1.0 - r * r;
      // d/dxi exp(1 - 1/(1 - |xi|^2/R^2)) = psi * (-2 xi / R^2) / (1 - r^2)^2
      const double f = (*this)(xi) * (-2.0 / (radius_ * radius_)) / (one_minus * one_minus);
      return {f * xi.x, f * xi.y};
    }
    case PsiKind::hat: {
      if (r >= 1.0 || rho == 0.0) return {};
      const double f = -1.0 / (radius_ * rho);
      return {f * xi.x, f * xi.y};
    }
    case PsiKind::indicator:
      return {};
  }
  return {};
}

VelocityField VelocityField::identity(int dimension) {
  VelocityField f;
  f.mode_ = FieldMode::identity;
  f.curve_ = Curve::identity;
  f.dimension_ = dimension;
  return f;
}

VelocityField VelocityField::curve(Curve c, int dimension, double alpha, double constant) {
  if (alpha < 1.0) throw std::invalid_argument("alpha must be >= 1");
  if (!(constant > 0.0)) throw std::invalid_argument("A must be positive");
  VelocityField f;
  f.mode_ = FieldMode::general;
  f.curve_ = c;
  f.dimension_ = dimension;
  f.alpha_ = alpha;
  f.constant_ = constant;
  return f;
}

Vec2 VelocityField::operator()(Vec2 xi) const {
  if (mode_ == FieldMode::identity) return xi;
  const double s = xi.x;
  double c = s;
  switch (curve_) {
    case Curve::identity: c = s; break;
    case Curve::cubic: c = s * s * s; break;
    case Curve::quadratic: c = s * s; break;
  }
  if (dimension_ == 1) return {c, 0.0};
  return {s, c};
}

NondegeneracyReport check_nondegeneracy(const VelocityField& field, const std::vector<Vec2>& nodes,
                                        int n_directions) {
  if (nodes.size() < 2) throw std::invalid_argument("non-degeneracy check needs at least 2 nodes");
  NondegeneracyReport rep;
  rep.xi_lo = std::numeric_limits<double>::infinity();
  rep.xi_hi = -rep.xi_lo;
  const bool scalar = field.mode() == FieldMode::general;
  const bool planar = field.dimension() == 2 && !scalar;
  for (const auto& n : nodes) {
    rep.xi_lo = std::min(rep.xi_lo, planar ? std::min(n.x, n.y) : n.x);
    rep.xi_hi = std::max(rep.xi_hi, planar ? std::max(n.x, n.y) : n.x);
  }

  std::vector<Vec2> dirs;
  if (field.dimension() == 1) {
    dirs = {{1.0, 0.0}};
  } else {
    for (int i = 0; i < n_directions; ++i) {
      const double phi = std::numbers::pi * i / n_directions;  // e and -e give the same value
      dirs.push_back({std::cos(phi), std::sin(phi)});
    }
  }

  std::vector<Vec2> image(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) image[i] = field(nodes[i]);

  double amin = std::numeric_limits<double>::infinity();
  bool any_pair = false;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      const double sep = scalar ? std::abs(nodes[i].x - nodes[j].x) : norm(nodes[i] - nodes[j]);
      if (sep == 0.0) continue;
      any_pair = true;
      const Vec2 da = image[i] - image[j];
      const double denom = std::pow(sep, field.alpha());
      if (field.mode() == FieldMode::identity) {
        // a(xi) = xi: the ratio is exactly 1, the direction infimum is not used.
        amin = std::min(amin, norm(da) / denom);
      } else {
        for (const auto& e : dirs) amin = std::min(amin, std::abs(dot(e, da)) / denom);
      }
    }
  if (!any_pair) throw std::invalid_argument("non-degeneracy check needs 2 distinct nodes");
  rep.a_empirical = amin;
  rep.pass = amin >= field.constant() * (1.0 - 1e-9);
  return rep;
}

KineticData KineticData::zeros(const SpectralGrid& grid) {
  KineticData d;
  d.n_k = grid.n_k();
  d.n_xi = grid.n_xi();
  d.n_t = grid.n_t();
  d.f0_hat.assign(d.n_k * d.n_xi, Complex{});
  return d;
}

bool KineticData::has_initial() const {
  return std::any_of(f0_hat.begin(), f0_hat.end(), [](Complex c) { return c != Complex{}; });
}

void KineticData::validate(const SpectralGrid& grid) const {
  if (n_k != grid.n_k() || n_xi != grid.n_xi() || n_t != grid.n_t())
    throw std::invalid_argument("data shape does not match grid");
  if (f0_hat.size() != n_k * n_xi) throw std::invalid_argument("f0_hat has wrong size");
  if (!g_hat.empty() && !h_hat.empty()) throw std::invalid_argument("both g_hat and h_hat present");
  if (!g_hat.empty() && g_hat.size() != n_k * n_xi * n_t) throw std::invalid_argument("g_hat has wrong size");
  if (!h_hat.empty() && (h_components < 1 || h_hat.size() != h_components * n_k * n_xi * n_t))
    throw std::invalid_argument("h_hat has wrong size");
  if (source == SourceKind::plain && g_hat.empty()) throw std::invalid_argument("plain source without g_hat");
  if (source == SourceKind::div_xi && h_hat.empty()) throw std::invalid_argument("div_xi source without h_hat");
  if (source == SourceKind::none && (!g_hat.empty() || !h_hat.empty()))
    throw std::invalid_argument("source arrays present but source kind is none");
  auto finite = [](const std::vector<Complex>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
  };
  if (!finite(f0_hat) || !finite(g_hat) || !finite(h_hat)) throw std::invalid_argument("non-finite data entry");
}

double Profile::operator()(Vec2 xi) const {
  const Vec2 d = xi - center;
  return amplitude * std::exp(-dot(d, d) / (2.0 * width * width));
}

double Profile::derivative_x(Vec2 xi) const { return -(xi.x - center.x) / (width * width) * (*this)(xi); }

double time_box(double t, double t_box) {
  if (t < 0.0 || t > t_box) return 0.0;
  const double s = std::sin(std::numbers::pi * t / t_box);
  return s * s;
}

namespace {

Vec2 profile_point(const SpectralGrid& grid, std::size_t m) {
  Vec2 xi = grid.velocity_nodes[m];
  if (grid.velocity_dim == 1) xi.y = 0.0;
  return xi;
}

Profile planar(const SpectralGrid& grid, Profile p) {
  if (grid.velocity_dim == 1) p.center.y = 0.0;
  return p;
}

}  // namespace

KineticData gaussian_bump(const SpectralGrid& grid, const Profile& profile) {
  KineticData d = KineticData::zeros(grid);
  const Profile p = planar(grid, profile);
  for (std::size_t k = 0; k < d.n_k; ++k)
    for (std::size_t m = 0; m < d.n_xi; ++m) d.f0(k, m) = p(profile_point(grid, m));
  d.id = "gaussian_bump";
  return d;
}

KineticData two_point(const SpectralGrid& grid, std::size_t node_a, std::size_t node_b, Complex amp_a,
                      Complex amp_b) {
  if (node_a >= grid.n_xi() || node_b >= grid.n_xi()) throw std::invalid_argument("two_point node out of range");
  KineticData d = KineticData::zeros(grid);
  for (std::size_t k = 0; k < d.n_k; ++k) {
    d.f0(k, node_a) += amp_a;
    d.f0(k, node_b) += amp_b;
  }
  d.id = "two_point";
  return d;
}

KineticData time_box_source(const SpectralGrid& grid, const Profile& profile, double t_box) {
  KineticData d = KineticData::zeros(grid);
  d.source = SourceKind::plain;
  d.g_hat.assign(d.n_k * d.n_xi * d.n_t, Complex{});
  const Profile p = planar(grid, profile);
  for (std::size_t k = 0; k < d.n_k; ++k)
    for (std::size_t m = 0; m < d.n_xi; ++m) {
      const double v = p(profile_point(grid, m));
      for (std::size_t j = 0; j < d.n_t; ++j) d.g(k, m, j) = v * time_box(grid.times[j], t_box);
    }
  d.id = "time_box_source";
  return d;
}

KineticData div_source(const SpectralGrid& grid, const Profile& profile, double t_box) {
  KineticData d = KineticData::zeros(grid);
  d.source = SourceKind::div_xi;
  d.h_components = grid.velocity_dim;
  d.h_hat.assign(d.h_components * d.n_k * d.n_xi * d.n_t, Complex{});
  const Profile p = planar(grid, profile);
  for (std::size_t k = 0; k < d.n_k; ++k)
    for (std::size_t m = 0; m < d.n_xi; ++m) {
      const double v = p(profile_point(grid, m));
      for (std::size_t j = 0; j < d.n_t; ++j) d.h(0, k, m, j) = v * time_box(grid.times[j], t_box);
    }
  d.id = "div_source";
  return d;
}

std::vector<double> phase_rates(const SpectralGrid& grid, const VelocityField& field, std::size_t k_index) {
  const Vec2 k = grid.wavenumbers.at(k_index);
  std::vector<double> theta(grid.n_xi());
  for (std::size_t m = 0; m < grid.n_xi(); ++m) theta[m] = dot(k, field(grid.velocity_nodes[m]));
  return theta;
}

std::vector<Complex> weighted_initial(const SpectralGrid& grid, const KineticData& data, const TestFunction& psi,
                                      std::size_t k_index) {
  std::vector<Complex> c(grid.n_xi());
  for (std::size_t m = 0; m < grid.n_xi(); ++m)
    c[m] = grid.velocity_weights[m] * psi(grid.velocity_nodes[m]) * data.f0(k_index, m);
  return c;
}

double initial_norm_sq(const SpectralGrid& grid, const KineticData& data, const TestFunction& psi,
                       std::size_t k_index) {
  double s = 0.0;
  for (std::size_t m = 0; m < grid.n_xi(); ++m)
    s += grid.velocity_weights[m] * std::norm(psi(grid.velocity_nodes[m]) * data.f0(k_index, m));
  return s;
}

}  // namespace kal
