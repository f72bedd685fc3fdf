#pragma once

// Exact 1D forward solver for -(a u')' = f with u(lo) = u(hi) = 0.
//
// Integrating once gives the flux identity a u' = C_a - F with F the
// primitive of f. The constant C_a = (int F/a) / (int 1/a) is the unique
// value for which u' integrates to zero, so u(hi) = 0 holds by construction.
// With trapezoid quadrature the discrete closure is exact up to rounding.

#include <cmath>
#include <string>

#include "core.hpp"

namespace coeffid {

struct ForwardSolution {
  GridFunction1D u;
  GridFunction1D du;
  double Ca = 0.0;
  GridFunction1D F;
};

struct ForwardOptions {
  double flux_tolerance = 1e-10;      // relative to 1 + |Ca| + max|F|
  double boundary_tolerance = 1e-8;   // relative to 1 + max|u|
  QuadratureRule rule = QuadratureRule::trapezoid;
};

/// F(x) = int_lo^x f, cumulative trapezoid with F(lo) = 0.
inline GridFunction1D primitive(const GridFunction1D& f) { return cumulative_integral(f); }

inline double flux_constant(const GridFunction1D& a, const GridFunction1D& F,
                            QuadratureRule rule = QuadratureRule::trapezoid) {
  a.require_same_grid(F);
  const GridFunction1D inv = a.map([](double v) { return 1.0 / v; });
  const GridFunction1D F_over_a = F.zip(a, [](double Fv, double av) { return Fv / av; });
  return quadrature(F_over_a, rule) / quadrature(inv, rule);
}

/// max nodal |a u' + F - Ca|.
inline double flux_residual(const GridFunction1D& a, const ForwardSolution& s) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    r = std::max(r, std::abs(a[i] * s.du[i] + s.F[i] - s.Ca));
  return r;
}

namespace detail {

inline ForwardSolution solve_flux(const GridFunction1D& a, const GridFunction1D& F,
                                  const ForwardOptions& opt) {
  a.require_same_grid(F);
  ForwardSolution s;
  s.F = F;
  s.Ca = flux_constant(a, F, opt.rule);
  s.du = F.zip(a, [Ca = s.Ca](double Fv, double av) { return (Ca - Fv) / av; });
  s.u = cumulative_integral(s.du);

  const double flux_scale = 1.0 + std::abs(s.Ca) + F.max_abs();
  if (flux_residual(a, s) > opt.flux_tolerance * flux_scale)
    throw Error("flux identity violated beyond tolerance");
  // Simpson's Ca is not the trapezoid one, so only the trapezoid closure is exact.
  const double closure = std::abs(s.u.back());
  if (opt.rule == QuadratureRule::trapezoid &&
      closure > opt.boundary_tolerance * (1.0 + s.u.max_abs()))
    throw Error("boundary closure u(hi) = 0 failed");
  return s;
}

}  // namespace detail

/// Solve with the primitive F supplied directly (f may be a distribution
/// whose primitive is known analytically).
inline ForwardSolution solve_with_primitive(const GridFunction1D& a, const GridFunction1D& F,
                                            const CoefficientBounds& bounds,
                                            const ForwardOptions& opt = {}) {
  if (!admissible(a, bounds)) throw Error("coefficient outside [λ,Λ]");
  return detail::solve_flux(a, F, opt);
}

inline ForwardSolution solve(const GridFunction1D& a, const GridFunction1D& f,
                             const CoefficientBounds& bounds, const ForwardOptions& opt = {}) {
  a.require_same_grid(f);
  return solve_with_primitive(a, primitive(f), bounds, opt);
}

/// Only positivity of a is checked.
inline ForwardSolution solve(const GridFunction1D& a, const GridFunction1D& f,
                             const ForwardOptions& opt = {}) {
  if (!(a.min() > 0.0)) throw Error("coefficient outside [λ,Λ]");
  a.require_same_grid(f);
  return detail::solve_flux(a, primitive(f), opt);
}

}  // namespace coeffid
