#pragma once

// Constructive non-identifiability witnesses.
//
// volterra_pair: w vanishes with all derivatives on a fat Cantor set S_n,
// so u = int w solves the problem for a = 1 and for any b that differs
// from 1 only on S_n.
//
// inhomogeneous_pair: two coefficients with the same solution once the
// boundary values are not zero.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "io.hpp"

namespace coeffid {

struct IntervalSet {
  std::vector<std::pair<double, double>> intervals;

  double measure() const {
    double m = 0.0;
    for (auto [lo, hi] : intervals) m += hi - lo;
    return m;
  }

  bool valid() const {
    for (std::size_t k = 0; k < intervals.size(); ++k) {
      auto [lo, hi] = intervals[k];
      if (!(lo <= hi) || lo < 0.0 || hi > 1.0) return false;
      if (k && !(intervals[k - 1].second < lo)) return false;
    }
    return true;
  }
};

/// Stage-by-stage construction of the level-n fat Cantor set: at stage
/// k = 1..n the open middle interval of length 4^-k is removed from each of
/// the 2^(k-1) remaining closed intervals. All endpoints are dyadic, hence
/// exact in double precision for level <= 20.
struct FatCantor {
  IntervalSet remaining;
  IntervalSet removed;
};

inline FatCantor fat_cantor(int level) {
  if (level < 1 || level > 20) throw Error("fat Cantor level must lie in [1, 20]");
  FatCantor fc;
  fc.remaining.intervals = {{0.0, 1.0}};
  for (int k = 1; k <= level; ++k) {
    const double len = std::ldexp(1.0, -2 * k);
    std::vector<std::pair<double, double>> next;
    for (auto [lo, hi] : fc.remaining.intervals) {
      const double mid = 0.5 * (lo + hi);
      next.push_back({lo, mid - 0.5 * len});
      next.push_back({mid + 0.5 * len, hi});
      fc.removed.intervals.push_back({mid - 0.5 * len, mid + 0.5 * len});
    }
    fc.remaining.intervals = std::move(next);
  }
  std::sort(fc.removed.intervals.begin(), fc.removed.intervals.end());
  return fc;
}

inline IntervalSet svc_set(int level) { return fat_cantor(level).remaining; }

/// 1/2 + 2^-(level+1).
inline double svc_measure(int level) { return 0.5 + std::ldexp(1.0, -(level + 1)); }

struct CounterexamplePair {
  GridFunction1D a;
  GridFunction1D b;
  GridFunction1D u;
  GridFunction1D f_or_F;
  double residual_a = 0.0;
  double residual_b = 0.0;
  double coeff_gap = 0.0;  // ||a - b||_L1
  double tolerance = 0.0;

  Json to_json() const {
    return Json{{"residual_a", residual_a},
                {"residual_b", residual_b},
                {"coeff_gap", coeff_gap},
                {"tolerance", tolerance}};
  }
};

// ---------------------------------------------------------------------------

/// Smooth lobe on (0, 1) with peak 1 at t = 1/2.
inline double lobe(double t) {
  if (!(t > 0.0 && t < 1.0)) return 0.0;
  return std::exp(4.0 - 1.0 / (t * (1.0 - t)));
}

inline double lobe_derivative(double t) {
  const double v = lobe(t);
  if (v == 0.0) return 0.0;
  const double g = t * (1.0 - t);
  return v * (1.0 - 2.0 * t) / (g * g);
}

/// Positive lobe on the left half, negative mirror lobe on the right half;
/// integrates to zero over (0, 1).
inline double two_lobe(double s) { return lobe(2.0 * s) - lobe(2.0 * s - 1.0); }
inline double two_lobe_derivative(double s) {
  return 2.0 * (lobe_derivative(2.0 * s) - lobe_derivative(2.0 * s - 1.0));
}

/// w built from two-lobe wavelets on the removed intervals of a fat Cantor set.
class VolterraSurrogate {
public:
  explicit VolterraSurrogate(int level) : cantor_(fat_cantor(level)) {}

  const FatCantor& cantor() const { return cantor_; }

  double w(double x) const {
    const auto* iv = find(x);
    return iv ? two_lobe((x - iv->first) / (iv->second - iv->first)) : 0.0;
  }

  double dw(double x) const {
    const auto* iv = find(x);
    if (!iv) return 0.0;
    const double len = iv->second - iv->first;
    return two_lobe_derivative((x - iv->first) / len) / len;
  }

  /// 1, 0 or 1/2 at a boundary node of S_n inside (0, 1); 0 and 1 count as interior.
  double in_set(double x) const {
    for (auto [lo, hi] : cantor_.remaining.intervals) {
      if ((x > lo || (x == 0.0 && lo == 0.0)) && (x < hi || (x == 1.0 && hi == 1.0))) return 1.0;
      if (x == lo || x == hi) return 0.5;
    }
    return 0.0;
  }

private:
  const std::pair<double, double>* find(double x) const {
    const auto& r = cantor_.removed.intervals;
    auto it = std::upper_bound(r.begin(), r.end(), std::pair{x, std::numeric_limits<double>::infinity()});
    if (it == r.begin()) return nullptr;
    --it;
    return (x > it->first && x < it->second) ? &*it : nullptr;
  }

  FatCantor cantor_;
};

/// Weak-form residual against every interior hat function, for a
/// coefficient that is constant on each cell (mean of its nodal values) and
/// the source given through its primitive F:
///   R_i = int (coef u_h' + F) phi_i'.
/// `cell_F` holds int_cell F for each cell.
inline double weak_form_residual(const GridFunction1D& coef, const GridFunction1D& u,
                                 const std::vector<double>& cell_F) {
  const std::size_t n = u.cells();
  const double h = u.h();
  std::vector<double> flux(n);  // int_cell (coef u_h' + F)
  for (std::size_t c = 0; c < n; ++c)
    flux[c] = 0.5 * (coef[c] + coef[c + 1]) * (u[c + 1] - u[c]) + cell_F[c];
  double r = 0.0;
  for (std::size_t i = 1; i < n; ++i) r = std::max(r, std::abs(flux[i - 1] - flux[i]) / h);
  return r;
}

struct VolterraPair {
  CounterexamplePair pair;
  GridFunction1D w;  // u' of the common solution
  GridFunction1D f;  // -w'
  IntervalSet set;
  IntervalSet removed;
  std::vector<double> f_sup_per_removed;  // max |f| on grid nodes inside each removed interval
  double f_sup_on_set = 0.0;              // max |f| on grid nodes inside S_n
  double W_at_end = 0.0;
};

inline const CoefficientBounds& volterra_bounds() {
  static const CoefficientBounds b(0.5, 2.0);
  return b;
}

/// a = 1 and b = 1 + amp 1_{S_n} share the solution u = W = int w with
/// f = -w', passed as F = -w.
inline VolterraPair volterra_pair(int level, std::size_t n, double bump_amp,
                                  double tolerance = 1e-8) {
  if (n < 16) throw Error("volterra pair needs n >= 16");
  if (!(bump_amp >= 0.0) || !volterra_bounds().contains(1.0 + bump_amp))
    throw Error("bump amplitude must keep b inside [0.5, 2]");
  const VolterraSurrogate vs(level);
  const Interval unit(0.0, 1.0);

  VolterraPair out;
  out.set = vs.cantor().remaining;
  out.removed = vs.cantor().removed;
  out.w = GridFunction1D::sample(unit, n, [&](double x) { return vs.w(x); });
  out.f = GridFunction1D::sample(unit, n, [&](double x) { return -vs.dw(x); });

  const double h = out.w.h();
  std::vector<double> cell_w(n), W(n + 1, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    cell_w[c] = gauss_legendre5([&](double x) { return vs.w(x); }, out.w.x(c), out.w.x(c + 1));
    W[c + 1] = W[c] + cell_w[c];
  }
  out.W_at_end = W[n];

  CounterexamplePair& p = out.pair;
  p.u = GridFunction1D(unit, W);
  p.f_or_F = out.w.map([](double v) { return -v; });
  p.a = GridFunction1D(unit, n, 1.0);
  p.b = GridFunction1D::sample(unit, n, [&](double x) { return 1.0 + bump_amp * vs.in_set(x); });
  p.tolerance = tolerance;

  std::vector<double> cell_F(n);
  for (std::size_t c = 0; c < n; ++c) cell_F[c] = -cell_w[c];
  const double scale = out.w.max_abs();
  p.residual_a = weak_form_residual(p.a, p.u, cell_F) / scale;
  p.residual_b = weak_form_residual(p.b, p.u, cell_F) / scale;
  p.coeff_gap = lp_norm(p.a - p.b, 1.0);

  for (auto [lo, hi] : out.removed.intervals) {
    double m = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      if (out.f.x(i) > lo && out.f.x(i) < hi) m = std::max(m, std::abs(out.f[i]));
    out.f_sup_per_removed.push_back(m);
  }
  for (std::size_t i = 0; i <= n; ++i)
    if (vs.in_set(out.f.x(i)) == 1.0) out.f_sup_on_set = std::max(out.f_sup_on_set, std::abs(out.f[i]));

  if (p.residual_a > tolerance || p.residual_b > tolerance)
    throw Error("volterra pair residual above tolerance: residual_a=" + format_double(p.residual_a) +
                " residual_b=" + format_double(p.residual_b) + " h=" + format_double(h));
  return out;
}

struct InhomogeneousPair {
  CounterexamplePair pair;
  GridFunction1D flux_a;  // a u'
  GridFunction1D flux_b;  // b u'
  double flux_identity_a = 0.0;    // max |a u' + (x + 1/2) + 1|
  double flux_identity_b = 0.0;    // max |b u' + (x + 1/2)|
  double flux_derivative_a = 0.0;  // max |(a u')' + 1|
  double flux_derivative_b = 0.0;  // max |(b u')' + 1|
};

/// u = -(x+1/2)^2 / 2, a = 1 + 1/(x+1/2), b = 1, f = 1 on (0, 1):
/// -(a u')' = -(b u')' = 1 while u(0) != u(1).
inline InhomogeneousPair inhomogeneous_pair(std::size_t n) {
  if (n < 16) throw Error("inhomogeneous pair needs n >= 16");
  const Interval unit(0.0, 1.0);
  auto u_fn = [](double x) { return -0.5 * (x + 0.5) * (x + 0.5); };
  auto du_fn = [](double x) { return -(x + 0.5); };
  auto a_fn = [](double x) { return 1.0 + 1.0 / (x + 0.5); };

  InhomogeneousPair out;
  CounterexamplePair& p = out.pair;
  p.u = GridFunction1D::sample(unit, n, u_fn);
  p.a = GridFunction1D::sample(unit, n, a_fn);
  p.b = GridFunction1D(unit, n, 1.0);
  p.f_or_F = GridFunction1D(unit, n, 1.0);
  const GridFunction1D du = GridFunction1D::sample(unit, n, du_fn);
  out.flux_a = p.a.zip(du, std::multiplies<>{});
  out.flux_b = p.b.zip(du, std::multiplies<>{});

  for (std::size_t i = 0; i <= n; ++i) {
    const double x = p.u.x(i);
    out.flux_identity_a = std::max(out.flux_identity_a, std::abs(out.flux_a[i] + (x + 0.5) + 1.0));
    out.flux_identity_b = std::max(out.flux_identity_b, std::abs(out.flux_b[i] + (x + 0.5)));
  }
  const GridFunction1D da = derivative(out.flux_a), db = derivative(out.flux_b);
  for (std::size_t i = 0; i <= n; ++i) {
    out.flux_derivative_a = std::max(out.flux_derivative_a, std::abs(da[i] + 1.0));
    out.flux_derivative_b = std::max(out.flux_derivative_b, std::abs(db[i] + 1.0));
  }

  // Conservative strong form: coefficient at cell midpoints, u' by difference quotients.
  const double h = p.u.h();
  auto strong_residual = [&](auto&& coef) {
    double r = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      const double xl = 0.5 * (p.u.x(i - 1) + p.u.x(i)), xr = 0.5 * (p.u.x(i) + p.u.x(i + 1));
      const double fl = coef(xl) * (p.u[i] - p.u[i - 1]) / h;
      const double fr = coef(xr) * (p.u[i + 1] - p.u[i]) / h;
      r = std::max(r, std::abs(-(fr - fl) / h - 1.0));
    }
    return r;
  };
  p.residual_a = strong_residual(a_fn);
  p.residual_b = strong_residual([](double) { return 1.0; });
  p.tolerance = h * h;

  for (std::size_t c = 0; c < n; ++c)
    p.coeff_gap += gauss_legendre5([&](double x) { return std::abs(a_fn(x) - 1.0); }, p.u.x(c),
                                   p.u.x(c + 1));
  return out;
}

}  // namespace coeffid
