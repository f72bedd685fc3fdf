#pragma once

// Hölder stability in 1D: the measure of the near-level sets
// K_rho(M) = {x : |F(x) - M| <= rho}, fitted growth/flatness exponents,
// the resulting stability exponents, and the dyadic family showing how
// small those exponents can get.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "core.hpp"
#include "forward1d.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace coeffid {

/// |{x : |F(x) - M| <= rho}| for the piecewise-linear interpolant of F,
/// accumulated cell by cell.
inline double k_rho_measure(const GridFunction1D& F, double M, double rho) {
  if (!(rho > 0.0)) throw Error("rho must be positive");
  const double lo = M - rho, hi = M + rho;
  const double h = F.h();
  double total = 0.0;
  for (std::size_t i = 0; i < F.cells(); ++i) {
    const double f0 = F[i], f1 = F[i + 1];
    if (f0 == f1) {
      if (f0 >= lo && f0 <= hi) total += h;
      continue;
    }
    // parameter t in [0,1] with f0 + t (f1 - f0) in [lo, hi]
    double t0 = (lo - f0) / (f1 - f0), t1 = (hi - f0) / (f1 - f0);
    if (t0 > t1) std::swap(t0, t1);
    t0 = std::max(t0, 0.0);
    t1 = std::min(t1, 1.0);
    if (t1 > t0) total += (t1 - t0) * h;
  }
  return total;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
inline LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("line fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw Error("line fit needs distinct abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i)
    fit.max_residual = std::max(fit.max_residual, std::abs(y[i] - fit.intercept - fit.slope * x[i]));
  return fit;
}

struct ExponentFit {
  double alpha = 0.0;
  double beta = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  std::vector<double> rho_grid;
  std::vector<double> inf_measure;
  std::vector<double> sup_measure;
  double residual = 0.0;  // max log-space misfit of either branch
  double alpha_raw = 0.0;  // least-squares slope before enforcing alpha >= beta
  double beta_tail = 0.0;  // slope of the sup branch over the three smallest rho
  bool beta_vanishes = false;

  /// C1 rho^alpha <= inf <= sup <= C2 rho^beta on the fitting grid.
  bool bounds_hold() const {
    for (std::size_t k = 0; k < rho_grid.size(); ++k) {
      const double r = rho_grid[k];
      if (C1 * std::pow(r, alpha) > inf_measure[k]) return false;
      if (inf_measure[k] > sup_measure[k]) return false;
      if (sup_measure[k] > C2 * std::pow(r, beta)) return false;
    }
    return true;
  }
};

/// Dyadic rho grid 2^-from ... 2^-to.
inline std::vector<double> dyadic_rho_grid(int from = 3, int to = 12) {
  std::vector<double> g;
  for (int k = from; k <= to; ++k) g.push_back(std::ldexp(1.0, -k));
  return g;
}

/// Below this tail slope the sup branch is treated as flat (beta = 0).
inline constexpr double kFlatBetaSlope = 0.1;

inline ExponentFit fit_exponents(const GridFunction1D& F, const std::vector<double>& rho_grid,
                                 int M_grid_size) {
  const double Fmin = F.min(), Fmax = F.max();
  const double range = Fmax - Fmin;
  if (!(range >= 1e-12)) throw Error("F is constant: f vanishes identically");
  if (M_grid_size < 8) throw Error("M grid needs at least 8 points");
  if (rho_grid.size() < 2) throw Error("rho grid needs at least two values");
  for (std::size_t k = 0; k < rho_grid.size(); ++k) {
    if (!(rho_grid[k] > 0.0 && rho_grid[k] < range / 2))
      throw Error("rho values must lie in (0, (Fmax-Fmin)/2)");
    if (k && !(rho_grid[k] < rho_grid[k - 1])) throw Error("rho grid must be strictly decreasing");
  }

  ExponentFit fit;
  fit.rho_grid = rho_grid;
  auto per_rho = parallel_map(rho_grid.size(), [&](std::size_t k) {
    const double rho = rho_grid[k];
    const double margin = 0.5 * rho;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int m = 0; m < M_grid_size; ++m) {
      const double M = Fmin + margin + (range - 2 * margin) * m / (M_grid_size - 1);
      const double v = k_rho_measure(F, M, rho);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return std::pair{lo, hi};
  });
  std::vector<double> lr, li, ls;
  for (std::size_t k = 0; k < rho_grid.size(); ++k) {
    fit.inf_measure.push_back(per_rho[k].first);
    fit.sup_measure.push_back(per_rho[k].second);
    lr.push_back(std::log(rho_grid[k]));
    li.push_back(std::log(per_rho[k].first));
    ls.push_back(std::log(per_rho[k].second));
  }
  for (double v : fit.inf_measure)
    if (!(v > 0.0)) throw Error("near-level set of zero measure: grid too coarse for rho");

  const LineFit inf_fit = least_squares_line(lr, li);
  const LineFit sup_fit = least_squares_line(lr, ls);
  fit.alpha_raw = inf_fit.slope;
  fit.beta = sup_fit.slope;
  fit.alpha = std::max(fit.alpha_raw, fit.beta);
  fit.residual = std::max(inf_fit.max_residual, sup_fit.max_residual);
  const std::size_t tail = std::min<std::size_t>(3, lr.size());
  fit.beta_tail = least_squares_line(std::vector<double>(lr.end() - tail, lr.end()),
                                     std::vector<double>(ls.end() - tail, ls.end()))
                      .slope;
  fit.beta_vanishes = fit.beta_tail < kFlatBetaSlope;

  fit.C1 = std::numeric_limits<double>::infinity();
  fit.C2 = 0.0;
  for (std::size_t k = 0; k < rho_grid.size(); ++k) {
    fit.C1 = std::min(fit.C1, fit.inf_measure[k] / std::pow(rho_grid[k], fit.alpha));
    fit.C2 = std::max(fit.C2, fit.sup_measure[k] / std::pow(rho_grid[k], fit.beta));
  }
  // equality at the worst rho can fail by an ulp after the pow round trip
  while (!fit.bounds_hold()) {
    fit.C1 = std::nextafter(fit.C1, 0.0);
    fit.C2 = std::nextafter(fit.C2, std::numeric_limits<double>::infinity());
  }
  return fit;
}

/// Stability exponent for ||a-b||_Lp against ||u_a' - u_b'||_L2 given the
/// growth exponent alpha and flatness exponent beta of the primitive of f.
/// Templated on the scalar so that it can be checked in exact arithmetic.
template <class T>
T holder_exponent(const T& p, const T& alpha, const T& beta) {
  const T two(2);
  if (p <= two) {
    const T base = two * beta / ((two + alpha) * (two + beta));
    const T local = p * beta / ((p + alpha) * (p + beta));
    return base < local ? local : base;
  }
  return T(4) * beta / ((two + alpha) * (two + beta) * p);
}

inline double holder_exponent(double p, double alpha, double beta) {
  if (!(p >= 1.0) || !(alpha >= 0.0) || !(beta > 0.0))
    throw Error("holder_exponent requires p >= 1, alpha >= 0, beta > 0");
  return holder_exponent<double>(p, alpha, beta);
}

/// Distinct coefficients with identical gradients: uniqueness failed.
class IdentifiabilityViolation : public Error {
public:
  IdentifiabilityViolation() : Error("identifiability violation detected") {}
};

struct HolderReport {
  double p = 0.0;
  double lhs = 0.0;       // ||a - b||_Lp
  double rhs_norm = 0.0;  // ||u_a' - u_b'||_L2
  double exponent = 0.0;
  double constant_needed = 0.0;  // lhs / rhs_norm^exponent
  double eta = 0.0;              // |C_a - C_b|
  double du_lp = 0.0;            // ||u_a' - u_b'||_Lp
  double c0 = 0.0;               // eta / du_lp^(p/(p+alpha))

  Json to_json() const {
    return Json{{"p", p},
                {"lhs", lhs},
                {"rhs_norm", rhs_norm},
                {"exponent", exponent},
                {"constant_needed", json_number(constant_needed)},
                {"eta", eta},
                {"du_Lp", du_lp},
                {"c0", json_number(c0)}};
  }
};

inline HolderReport verify_holder(const GridFunction1D& a, const GridFunction1D& b,
                                  const GridFunction1D& f, double p, const ExponentFit& fit,
                                  const CoefficientBounds& bounds, double zero_tol = 1e-12) {
  const ForwardSolution sa = solve(a, f, bounds);
  const ForwardSolution sb = solve(b, f, bounds);
  HolderReport r;
  r.p = p;
  r.lhs = lp_norm(a - b, LpNorm(p));
  const GridFunction1D ddu = sa.du - sb.du;
  r.rhs_norm = lp_norm(ddu, 2.0);
  r.du_lp = lp_norm(ddu, LpNorm(p));
  r.exponent = holder_exponent(p, fit.alpha, std::max(fit.beta, 1e-300));
  r.eta = std::abs(sa.Ca - sb.Ca);
  if (r.rhs_norm == 0.0) {
    if (r.lhs > zero_tol) throw IdentifiabilityViolation();
    return r;
  }
  r.constant_needed = r.lhs / std::pow(r.rhs_norm, r.exponent);
  r.c0 = r.eta / std::pow(r.du_lp, p / (p + fit.alpha));
  return r;
}

// ---------------------------------------------------------------------------
// Dyadic family on (-1, 1).

/// Smooth bump on (1/2, 1), exp(-1/((x-1/2)(1-x))) scaled to peak value 1
/// at its single critical point x = 3/4.
/// Random piecewise-linear coefficient: `knots` + 1 uniform breakpoints on
/// the interval with values drawn uniformly from the bounds.
inline GridFunction1D random_piecewise_linear(Rng& rng, Interval iv, std::size_t n, std::size_t knots,
                                              const CoefficientBounds& bounds) {
  std::vector<double> kv(knots + 1);
  for (auto& v : kv) v = uniform(rng, bounds.lambda, bounds.Lambda);
  return GridFunction1D::sample(iv, n, [&](double x) {
    const double s = (x - iv.lo) / iv.length() * static_cast<double>(knots);
    const std::size_t k = std::min(static_cast<std::size_t>(s), knots - 1);
    const double t = s - static_cast<double>(k);
    return bounds.clamp(kv[k] + t * (kv[k + 1] - kv[k]));
  });
}

/// verify_holder over random admissible piecewise-linear pairs on (0, 1);
/// the largest constant_needed is the empirical constant of the estimate.
inline ExperimentReport holder_sweep(const GridFunction1D& f, double p, const ExponentFit& fit,
                                     const CoefficientBounds& bounds, std::size_t trials,
                                     std::uint64_t seed, std::size_t knots = 8) {
  if (knots < 1) throw Error("holder sweep needs at least one knot interval");
  auto reports = parallel_map(trials, [&](std::size_t t) {
    Rng rng = task_rng(seed, t);
    const GridFunction1D a = random_piecewise_linear(rng, f.interval(), f.cells(), knots, bounds);
    const GridFunction1D b = random_piecewise_linear(rng, f.interval(), f.cells(), knots, bounds);
    return verify_holder(a, b, f, p, fit, bounds);
  });
  ExperimentReport rep;
  rep.experiment = "holder_sweep";
  rep.inputs["p"] = p;
  rep.inputs["alpha"] = fit.alpha;
  rep.inputs["beta"] = fit.beta;
  rep.inputs["n"] = f.cells();
  rep.inputs["trials"] = trials;
  rep.inputs["seed"] = seed;
  rep.inputs["knots"] = knots;
  double worst = 0.0;
  Table t{{"trial", "lhs", "rhs_norm", "constant_needed", "eta", "c0"}, {}};
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const HolderReport& r = reports[k];
    worst = std::max(worst, r.constant_needed);
    t.rows.push_back({static_cast<double>(k), r.lhs, r.rhs_norm, r.constant_needed, r.eta, r.c0});
  }
  rep.results["exponent"] = reports.empty() ? 0.0 : reports.front().exponent;
  rep.results["max_constant_needed"] = json_number(worst);
  rep.passed = std::isfinite(worst);
  rep.add_curve("constants", std::move(t));
  return rep;
}

inline double dyadic_bump(double x) {
  if (!(x > 0.5 && x < 1.0)) return 0.0;
  const double g = (x - 0.5) * (1.0 - x);
  return std::exp(16.0 - 1.0 / g);
}

inline double dyadic_bump_derivative(double x) {
  const double v = dyadic_bump(x);
  if (v == 0.0) return 0.0;
  const double g = (x - 0.5) * (1.0 - x);
  return v * (1.5 - 2.0 * x) / (g * g);
}

struct DyadicFamily {
  double alpha_d = 2.0;  // decay exponent of the series
  double beta_d = 0.0;   // perturbation exponent
  int jmax = 10;
  int K_trunc = 0;

  static constexpr double kTailBound = 1e-8;

  /// Truncation K = jmax + K0 with K0 the smallest index where the V-norm
  /// tail 2^(-(alpha-1/2) K0) drops below 1e-8. The offset by jmax keeps the
  /// relative tail below 1e-8 inside every S_j, which is where u - u_j lives.
  static DyadicFamily make(double alpha_d, double beta_d, int jmax) {
    if (!(alpha_d > 0.5)) throw Error("dyadic family requires alpha > 1/2");
    DyadicFamily fam{alpha_d, beta_d, jmax, 0};
    fam.K_trunc =
        jmax + static_cast<int>(std::floor(-std::log2(kTailBound) / (alpha_d - 0.5))) + 1;
    fam.validate();
    return fam;
  }

  void validate() const {
    if (!(alpha_d > 0.5)) throw Error("dyadic family requires alpha > 1/2");
    if (!(beta_d <= 0.0)) throw Error("dyadic family requires beta <= 0 (admissible a_j)");
    if (jmax < 0) throw Error("dyadic family requires jmax >= 0");
    if (K_trunc < 1 || !(std::exp2(-(alpha_d - 0.5) * K_trunc) < kTailBound))
      throw Error("dyadic series truncation too short for tail bound");
  }

  /// u(x) = sum_k 2^(-alpha k) u0(2^k |x|); supports of the terms are disjoint.
  double u(double x) const {
    const double ax = std::abs(x);
    double s = 0.0;
    for (int k = 0; k <= K_trunc; ++k) {
      const double y = std::ldexp(ax, k);
      if (y >= 1.0) break;
      if (y > 0.5) s += std::exp2(-alpha_d * k) * dyadic_bump(y);
    }
    return s;
  }

  double du(double x) const {
    const double ax = std::abs(x);
    double s = 0.0;
    for (int k = 0; k <= K_trunc; ++k) {
      const double y = std::ldexp(ax, k);
      if (y >= 1.0) break;
      if (y > 0.5) s += std::exp2((1.0 - alpha_d) * k) * dyadic_bump_derivative(y);
    }
    return x < 0.0 ? -s : s;
  }
};

struct DyadicSample {
  GridFunction1D u;
  GridFunction1D du;
  GridFunction1D a_j;
  ForwardSolution u_j;
};

inline const CoefficientBounds& dyadic_bounds() {
  static const CoefficientBounds b(1.0, 2.0);
  return b;
}

/// u and u' sampled from the series, a_j = 1 + 2^(beta j) 1_{(-2^-j, 2^-j)},
/// and the forward solve for a_j with F = -u' + u'(-1), i.e. f = -u''.
inline DyadicSample dyadic_build(const DyadicFamily& fam, int j, std::size_t n) {
  fam.validate();
  if (j < 0 || j > fam.jmax) throw Error("dyadic index j outside [0, jmax]");
  const Interval dom(-1.0, 1.0);
  DyadicSample s;
  s.u = GridFunction1D::sample(dom, n, [&](double x) { return fam.u(x); });
  s.du = GridFunction1D::sample(dom, n, [&](double x) { return fam.du(x); });
  const double half_width = std::ldexp(1.0, -j);
  const double height = std::exp2(fam.beta_d * j);
  s.a_j = GridFunction1D::sample(
      dom, n, [&](double x) { return 1.0 + height * indicator_value(x, -half_width, half_width); });
  const double du_left = s.du.front();
  const GridFunction1D F = s.du.map([du_left](double v) { return -v + du_left; });
  s.u_j = solve_with_primitive(s.a_j, F, dyadic_bounds());
  return s;
}

/// Measured Hölder slope of ||a - a_j||_Lp against ||u - u_j||_V, compared
/// with gamma = (1/p - beta) / (alpha - 1/2 - beta).
inline ExperimentReport dyadic_rate(const DyadicFamily& fam, double p,
                                    const std::vector<int>& j_range, std::size_t n,
                                    double tolerance = 0.15) {
  fam.validate();
  if (!(fam.alpha_d > 0.5 + fam.beta_d)) throw Error("dyadic rate requires alpha > 1/2 + beta");
  const LpNorm norm(p);
  struct Row {
    int j;
    double u_err, a_err, a_inf;
  };
  auto rows = parallel_map(j_range.size(), [&](std::size_t k) {
    const DyadicSample s = dyadic_build(fam, j_range[k], n);
    const GridFunction1D da = s.a_j.map([](double v) { return v - 1.0; });
    return Row{j_range[k], lp_norm(s.u_j.du - s.du, 2.0), lp_norm(da, norm),
               lp_norm(da, LpNorm::infinity())};
  });

  ExperimentReport rep;
  rep.experiment = "dyadic_rate";
  rep.inputs["alpha"] = fam.alpha_d;
  rep.inputs["beta"] = fam.beta_d;
  rep.inputs["p"] = p;
  rep.inputs["n"] = n;
  rep.inputs["j"] = j_range;
  rep.inputs["K_trunc"] = fam.K_trunc;

  Table t{{"j", "u_err_V", "a_err_Lp", "a_err_Linf"}, {}};
  std::vector<double> lu, la, js, l2u, l2a;
  for (const Row& r : rows) {
    t.rows.push_back({static_cast<double>(r.j), r.u_err, r.a_err, r.a_inf});
    if (r.u_err > 0.0 && r.a_err > 0.0 && std::isfinite(r.u_err)) {
      lu.push_back(std::log(r.u_err));
      la.push_back(std::log(r.a_err));
      js.push_back(r.j);
      l2u.push_back(std::log2(r.u_err));
      l2a.push_back(std::log2(r.a_err));
    }
  }
  if (lu.size() < 3) throw Error("dyadic rate needs at least 3 usable j values");

  const double gamma = (1.0 / p - fam.beta_d) / (fam.alpha_d - 0.5 - fam.beta_d);
  const LineFit holder = least_squares_line(lu, la);
  const double rel = std::abs(holder.slope - gamma) / gamma;
  rep.results["gamma"] = gamma;
  rep.results["measured_slope"] = holder.slope;
  rep.results["relative_error"] = rel;
  rep.results["tolerance"] = tolerance;
  rep.results["u_slope_vs_j"] = least_squares_line(js, l2u).slope;
  rep.results["u_slope_expected"] = 0.5 + fam.beta_d - fam.alpha_d;
  rep.results["a_slope_vs_j"] = least_squares_line(js, l2a).slope;
  rep.results["a_slope_expected"] = fam.beta_d - 1.0 / p;
  std::vector<double> u_err, a_err, a_inf;
  for (const Row& r : rows) {
    u_err.push_back(r.u_err);
    a_err.push_back(r.a_err);
    a_inf.push_back(r.a_inf);
  }
  rep.results["u_err_V"] = u_err;
  rep.results["a_err_Lp"] = a_err;
  rep.results["a_err_Linf"] = a_inf;
  rep.passed = rel <= tolerance;
  rep.add_curve("dyadic", std::move(t));
  return rep;
}

}  // namespace coeffid
