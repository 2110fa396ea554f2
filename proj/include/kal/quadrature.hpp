#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace kal::quad {

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  int panels = 0;
};

namespace detail {

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(std::complex<double> z) { return std::abs(z); }

template <class T>
struct Panel {
  double a, b;
  T value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// 15-point Kronrod rule with embedded 7-point Gauss estimate; nodes from Boost.
template <class F>
auto gk15(F& f, double a, double b) {
  using T = decltype(f(a));
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  static const auto& xk = GK::abscissa();
  static const auto& wk = GK::weights();
  static const auto& wg = G::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T fc = f(c);
  T kron = wk[0] * fc;
  T gauss = wg[0] * fc;
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const T s = f(c - h * xk[i]) + f(c + h * xk[i]);
    kron += wk[i] * s;
    if (i % 2 == 0) gauss += wg[i / 2] * s;
  }
  return Panel<T>{a, b, h * kron, magnitude(h * (kron - gauss))};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod on [a, b]: the panel with the largest error estimate is
/// bisected until the summed estimate drops below max(abs_tol, rel_tol |I|) or the panel budget runs out.
template <class F>
auto integrate(F f, double a, double b, double abs_tol = 1e-10, double rel_tol = 0.0, int max_panels = 1000) {
  using T = decltype(f(a));
  if (!(b > a)) return Result<T>{};
  std::priority_queue<detail::Panel<T>> heap;
  auto first = detail::gk15(f, a, b);
  T total = first.value;
  double err = first.error;
  heap.push(first);
  int panels = 1;
  while (err > std::max(abs_tol, rel_tol * detail::magnitude(total)) && panels < max_panels) {
    auto p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    auto l = detail::gk15(f, p.a, mid);
    auto r = detail::gk15(f, mid, p.b);
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
    ++panels;
  }
  // Re-sum to shed accumulated cancellation from the running updates.
  T sum{};
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  return Result<T>{sum, esum, panels};
}

/// int_0^inf f(u) du, split at `split`; the tail is mapped by u = split / v onto (0, 1].
template <class F>
auto integrate_half_line(F f, double split = 1.0, double abs_tol = 1e-10, double rel_tol = 0.0,
                         int max_panels = 1000) {
  auto head = integrate(f, 0.0, split, 0.5 * abs_tol, rel_tol, max_panels / 2);
  auto tail_fn = [&](double v) {
    using T = decltype(f(v));
    if (v <= 0.0) return T{};
    const double u = split / v;
    return f(u) * (split / (v * v));
  };
  auto tail = integrate(tail_fn, 0.0, 1.0, 0.5 * abs_tol, rel_tol, max_panels / 2);
  using T = decltype(f(split));
  return Result<T>{head.value + tail.value, head.error + tail.error, head.panels + tail.panels};
}

}  // namespace kal::quad
