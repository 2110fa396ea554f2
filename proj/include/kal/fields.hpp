#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace kal {

using Complex = std::complex<double>;

/// Point in R^1 or R^2. One-dimensional quantities keep y = 0.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
double norm(Vec2 v);

enum class TimeGrading { uniform, geometric };

struct GridSpec {
  int dimension = 1;
  std::vector<Vec2> wavenumbers;
  double xi_lo = -1.0;
  double xi_hi = 1.0;
  int n_xi = 17;  // nodes per velocity axis
  double horizon = 1.0;
  int n_t = 256;  // time intervals
  // Curves a(xi) take a scalar velocity even when d = 2.
  bool scalar_velocity = false;
  TimeGrading time_grading = TimeGrading::uniform;
  double t_min = 1e-4;  // first positive node of a geometric grid
  // When positive, xi_range must contain [-psi_radius, psi_radius].
  double psi_radius = 0.0;
};

/// Shared discretization: wavenumbers, velocity quadrature and time nodes.
struct SpectralGrid {
  int dimension = 1;
  int velocity_dim = 1;
  std::vector<Vec2> wavenumbers;
  std::vector<Vec2> velocity_nodes;
  std::vector<double> velocity_weights;
  std::vector<double> times;
  double xi_lo = -1.0;
  double xi_hi = 1.0;
  int n_xi_axis = 0;
  TimeGrading time_grading = TimeGrading::uniform;

  std::size_t n_k() const { return wavenumbers.size(); }
  std::size_t n_xi() const { return velocity_nodes.size(); }
  std::size_t n_t() const { return times.size(); }
  double horizon() const { return times.back(); }
  double xi_step() const { return (xi_hi - xi_lo) / (n_xi_axis - 1); }
  /// Uniform one-dimensional velocity nodes (enables the Horner fast path).
  bool uniform_scalar_velocity() const { return velocity_dim == 1; }
};

SpectralGrid build_grid(const GridSpec& spec);

/// Wavenumber list {k0, 2 k0, ..., n k0} along the x axis.
std::vector<Vec2> wavenumber_ladder(int count, double k0 = 1.0);

enum class PsiKind { bump, hat, indicator };

class TestFunction {
 public:
  TestFunction() = default;
  TestFunction(PsiKind kind, double radius);

  double operator()(Vec2 xi) const;
  /// Analytic gradient; the indicator has zero gradient away from its edge.
  Vec2 gradient(Vec2 xi) const;

  PsiKind kind() const { return kind_; }
  double radius() const { return radius_; }

 private:
  PsiKind kind_ = PsiKind::bump;
  double radius_ = 1.0;
};

enum class FieldMode { identity, general };
enum class Curve { identity, cubic, quadratic };

class VelocityField {
 public:
  static VelocityField identity(int dimension);
  static VelocityField curve(Curve c, int dimension, double alpha, double constant);

  /// a(xi); general fields read only xi.x.
  Vec2 operator()(Vec2 xi) const;

  FieldMode mode() const { return mode_; }
  Curve curve_kind() const { return curve_; }
  int dimension() const { return dimension_; }
  double alpha() const { return alpha_; }
  double constant() const { return constant_; }

 private:
  FieldMode mode_ = FieldMode::identity;
  Curve curve_ = Curve::identity;
  int dimension_ = 1;
  double alpha_ = 1.0;
  double constant_ = 1.0;
};

struct NondegeneracyReport {
  double a_empirical = 0.0;
  bool pass = false;
  // Velocity range the minimum was taken over; the condition is only checked there.
  double xi_lo = 0.0;
  double xi_hi = 0.0;
};

/// Minimum of |e.(a(xi1) - a(xi2))| / |xi1 - xi2|^alpha over node pairs and
/// sampled unit directions (64 equispaced directions when d = 2).
NondegeneracyReport check_nondegeneracy(const VelocityField& field, const std::vector<Vec2>& nodes,
                                        int n_directions = 64);

enum class SourceKind { none, plain, div_xi };

/// Fourier-in-x data on a grid. Arrays are row-major:
/// f0_hat[k][xi], g_hat[k][xi][t], h_hat[component][k][xi][t].
struct KineticData {
  std::size_t n_k = 0;
  std::size_t n_xi = 0;
  std::size_t n_t = 0;
  int h_components = 0;
  SourceKind source = SourceKind::none;
  std::vector<Complex> f0_hat;
  std::vector<Complex> g_hat;
  std::vector<Complex> h_hat;
  std::string id = "data";

  static KineticData zeros(const SpectralGrid& grid);

  Complex& f0(std::size_t k, std::size_t m) { return f0_hat[k * n_xi + m]; }
  Complex f0(std::size_t k, std::size_t m) const { return f0_hat[k * n_xi + m]; }
  Complex& g(std::size_t k, std::size_t m, std::size_t j) { return g_hat[(k * n_xi + m) * n_t + j]; }
  Complex g(std::size_t k, std::size_t m, std::size_t j) const { return g_hat[(k * n_xi + m) * n_t + j]; }
  Complex& h(int c, std::size_t k, std::size_t m, std::size_t j) {
    return h_hat[((c * n_k + k) * n_xi + m) * n_t + j];
  }
  Complex h(int c, std::size_t k, std::size_t m, std::size_t j) const {
    return h_hat[((c * n_k + k) * n_xi + m) * n_t + j];
  }
  bool has_initial() const;

  /// Throws std::invalid_argument on shape mismatch, non-finite entries or
  /// more than one source array.
  void validate(const SpectralGrid& grid) const;
};

// Named data generators. Velocity profiles are Gaussian exp(-|xi - c|^2 / (2 w^2)),
// identical for every wavenumber (so Hermitian symmetry holds on +-k ladders).
struct Profile {
  Vec2 center{0.2, 0.0};
  double width = 0.3;
  double amplitude = 1.0;
  double operator()(Vec2 xi) const;
  double derivative_x(Vec2 xi) const;
};

/// Smooth time envelope sin^2(pi t / t_box) on [0, t_box], zero afterwards.
double time_box(double t, double t_box);

KineticData gaussian_bump(const SpectralGrid& grid, const Profile& profile = {});
KineticData two_point(const SpectralGrid& grid, std::size_t node_a, std::size_t node_b, Complex amp_a = 1.0,
                      Complex amp_b = 1.0);
KineticData time_box_source(const SpectralGrid& grid, const Profile& profile = {}, double t_box = 1.0);
KineticData div_source(const SpectralGrid& grid, const Profile& profile = {}, double t_box = 1.0);

/// theta_m = k . a(xi_m) for one wavenumber.
std::vector<double> phase_rates(const SpectralGrid& grid, const VelocityField& field, std::size_t k_index);

/// c_m = w_m psi(xi_m) f0_hat(k, xi_m).
std::vector<Complex> weighted_initial(const SpectralGrid& grid, const KineticData& data, const TestFunction& psi,
                                      std::size_t k_index);

/// Discrete ||psi f0_hat(k, .)||^2 = sum_m w_m |psi f0_hat|^2.
double initial_norm_sq(const SpectralGrid& grid, const KineticData& data, const TestFunction& psi,
                       std::size_t k_index);

}  // namespace kal
