#pragma once

// Grid functions on an interval, quadrature, norms and the admissible
// coefficient box shared by all 1D modules.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coeffid {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  Interval() = default;
  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
      throw Error("interval requires finite lo < hi");
  }

  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// Nodal values of a function on a uniform partition of an interval.
///
/// There are n cells and n+1 nodes x_i = lo + i*h with h = (hi-lo)/n.
/// Values are the pointwise samples at the nodes; everything downstream
/// treats them as the piecewise-linear interpolant.
class GridFunction1D {
public:
  GridFunction1D() = default;

  GridFunction1D(Interval interval, std::vector<double> values)
      : interval_(interval), values_(std::move(values)) {
    if (values_.size() < 2) throw Error("grid function needs at least one cell");
    for (double v : values_)
      if (!std::isfinite(v)) throw Error("grid function values must be finite");
  }

  /// n cells, all nodes set to `value`.
  GridFunction1D(Interval interval, std::size_t n, double value = 0.0)
      : GridFunction1D(interval, std::vector<double>(n + 1, value)) {}

  static GridFunction1D sample(Interval interval, std::size_t n,
                               const std::function<double(double)>& g) {
    if (n == 0) throw Error("grid function needs at least one cell");
    std::vector<double> v(n + 1);
    const double h = interval.length() / static_cast<double>(n);
    for (std::size_t i = 0; i <= n; ++i)
      v[i] = g(i == n ? interval.hi : interval.lo + static_cast<double>(i) * h);
    return GridFunction1D(interval, std::move(v));
  }

  const Interval& interval() const { return interval_; }
  std::size_t cells() const { return values_.size() - 1; }
  std::size_t size() const { return values_.size(); }
  double h() const { return interval_.length() / static_cast<double>(cells()); }
  double x(std::size_t i) const {
    return i == cells() ? interval_.hi : interval_.lo + static_cast<double>(i) * h();
  }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }

  bool same_grid(const GridFunction1D& o) const {
    return interval_ == o.interval_ && values_.size() == o.values_.size();
  }

  double max() const { return *std::max_element(values_.begin(), values_.end()); }
  double min() const { return *std::min_element(values_.begin(), values_.end()); }
  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Nodewise map, same grid.
  template <class Fn>
  GridFunction1D map(Fn&& fn) const {
    GridFunction1D out = *this;
    for (auto& v : out.values_) v = fn(v);
    return out;
  }

  /// Nodewise combination with a second function on the same grid.
  template <class Fn>
  GridFunction1D zip(const GridFunction1D& o, Fn&& fn) const {
    require_same_grid(o);
    GridFunction1D out = *this;
    for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = fn(values_[i], o.values_[i]);
    return out;
  }

  void require_same_grid(const GridFunction1D& o) const {
    if (!same_grid(o)) throw Error("grid functions live on different grids");
  }

  friend GridFunction1D operator+(const GridFunction1D& a, const GridFunction1D& b) {
    return a.zip(b, std::plus<>{});
  }
  friend GridFunction1D operator-(const GridFunction1D& a, const GridFunction1D& b) {
    return a.zip(b, std::minus<>{});
  }
  friend GridFunction1D operator*(double c, const GridFunction1D& g) {
    return g.map([c](double v) { return c * v; });
  }

private:
  Interval interval_;
  std::vector<double> values_;
};

struct CoefficientBounds {
  double lambda = 0.5;
  double Lambda = 2.0;

  CoefficientBounds() = default;
  CoefficientBounds(double lo, double hi) : lambda(lo), Lambda(hi) {
    if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi))
      throw Error("coefficient bounds require 0 < lambda < Lambda < inf");
  }

  double clamp(double v) const { return std::clamp(v, lambda, Lambda); }
  bool contains(double v) const { return v >= lambda && v <= Lambda; }
};

/// Exponent of an L_p norm; p = infinity is a distinguished value.
class LpNorm {
public:
  explicit LpNorm(double p) : p_(p) {
    if (!(p >= 1.0)) throw Error("L_p norm requires p >= 1");
  }
  static LpNorm infinity() { return LpNorm(std::numeric_limits<double>::infinity()); }

  double p() const { return p_; }
  bool is_infinity() const { return std::isinf(p_); }

private:
  double p_;
};

enum class QuadratureRule { trapezoid, simpson };

/// Integral of the grid function over its interval. Trapezoid is exact on
/// the piecewise-linear interpolant; Simpson needs smooth data and falls
/// back to a closing 3/8 panel when n is odd.
inline double quadrature(const GridFunction1D& g, QuadratureRule rule = QuadratureRule::trapezoid) {
  const std::size_t n = g.cells();
  const double h = g.h();
  auto v = g.values();
  if (rule == QuadratureRule::simpson && n >= 2) {
    double s = 0.0;
    std::size_t end = n;
    if (n % 2 == 1) {
      if (n < 3) return quadrature(g, QuadratureRule::trapezoid);
      end = n - 3;
      s += 3.0 * h / 8.0 * (v[end] + 3.0 * v[end + 1] + 3.0 * v[end + 2] + v[end + 3]);
    }
    if (end == 0) return s;
    double acc = v[0] + v[end];
    for (std::size_t i = 1; i < end; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * v[i];
    return s + acc * h / 3.0;
  }
  double acc = 0.5 * (v[0] + v[n]);
  for (std::size_t i = 1; i < n; ++i) acc += v[i];
  return acc * h;
}

inline double lp_norm(const GridFunction1D& g, LpNorm p,
                      QuadratureRule rule = QuadratureRule::trapezoid) {
  if (p.is_infinity()) return g.max_abs();
  if (p.p() == 1.0) return quadrature(g.map([](double v) { return std::abs(v); }), rule);
  if (p.p() == 2.0)
    return std::sqrt(quadrature(g.map([](double v) { return v * v; }), rule));
  const double q = p.p();
  return std::pow(quadrature(g.map([q](double v) { return std::pow(std::abs(v), q); }), rule),
                  1.0 / q);
}

inline double lp_norm(const GridFunction1D& g, double p) { return lp_norm(g, LpNorm(p)); }

/// Second-order finite differences: central inside, one-sided at the ends.
inline GridFunction1D derivative(const GridFunction1D& g) {
  const std::size_t n = g.cells();
  if (n < 2) throw Error("grid too coarse");
  const double h = g.h();
  std::vector<double> d(n + 1);
  // difference form so that constants give exactly zero
  d[0] = (4.0 * (g[1] - g[0]) - (g[2] - g[0])) / (2.0 * h);
  d[n] = (4.0 * (g[n] - g[n - 1]) - (g[n] - g[n - 2])) / (2.0 * h);
  for (std::size_t i = 1; i < n; ++i) d[i] = (g[i + 1] - g[i - 1]) / (2.0 * h);
  return GridFunction1D(g.interval(), std::move(d));
}

inline bool admissible(const GridFunction1D& a, const CoefficientBounds& bounds) {
  for (double v : a.values())
    if (!bounds.contains(v)) return false;
  return true;
}

/// Cumulative trapezoid integral starting from zero at lo.
inline GridFunction1D cumulative_integral(const GridFunction1D& g) {
  const double h = g.h();
  std::vector<double> out(g.size());
  out[0] = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (g[i - 1] + g[i]);
  return GridFunction1D(g.interval(), std::move(out));
}

/// Five-point Gauss-Legendre rule on [lo, hi].
template <class Fn>
double gauss_legendre5(Fn&& fn, double lo, double hi) {
  static constexpr double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                                  -0.9061798459386640, 0.9061798459386640};
  static constexpr double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                  0.2369268850561891, 0.2369268850561891};
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double s = 0.0;
  for (int k = 0; k < 5; ++k) s += w[k] * fn(mid + half * x[k]);
  return s * half;
}

/// Nodal samples of the indicator of (lo, hi): 1 inside, 0 outside and 1/2
/// on a node that coincides with an endpoint, so that trapezoid quadrature
/// reproduces the exact length when the endpoints are grid nodes.
inline double indicator_value(double x, double lo, double hi) {
  if (x > lo && x < hi) return 1.0;
  if (x == lo || x == hi) return 0.5;
  return 0.0;
}

}  // namespace coeffid
