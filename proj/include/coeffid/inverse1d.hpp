#pragma once

// Coefficient recovery from (u', f) in 1D.
//
// The flux identity a u' = C - F determines a wherever u' != 0 once C is
// known. Since u' integrates to zero it has a zero x0 in the interior, and
// there F(x0) = C. Nodes where |u'| is below a threshold carry no
// information about a and are masked.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "core.hpp"
#include "forward1d.hpp"
#include "io.hpp"

namespace coeffid {

struct ZeroLocation {
  double x0 = 0.0;
  double C = 0.0;
  std::size_t node = 0;  // interior node minimizing |u'|
  double min_abs_du = 0.0;
  std::vector<double> candidates;  // every refined sign change of u'
};

struct RecoveryResult {
  GridFunction1D a;
  double C = 0.0;
  std::vector<bool> degenerate_mask;
  double fraction_degenerate = 0.0;
  double threshold = 0.0;
  std::size_t clamped = 0;
  std::vector<double> zero_candidates;
};

/// Resolution-scaled default: h^(1/2) * max|u'| * 1e-2.
inline double default_threshold(const GridFunction1D& du) {
  return std::sqrt(du.h()) * du.max_abs() * 1e-2;
}

namespace detail {

inline double lerp_at(const GridFunction1D& g, std::size_t i, double t) {
  return g[i] + t * (g[i + 1] - g[i]);
}

}  // namespace detail

/// Locates the zero of u' used to fix the integration constant: the interior
/// node with smallest |u'|, refined linearly when u' changes sign in an
/// adjacent cell.
inline ZeroLocation locate_zero(const GridFunction1D& du, const GridFunction1D& F,
                                double threshold) {
  du.require_same_grid(F);
  const std::size_t n = du.cells();
  if (n < 2) throw Error("grid too coarse");
  ZeroLocation z;
  z.node = 1;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(du[i]) < std::abs(du[z.node])) z.node = i;
  z.min_abs_du = std::abs(du[z.node]);

  for (std::size_t i = 0; i < n; ++i)
    if ((du[i] < 0.0 && du[i + 1] > 0.0) || (du[i] > 0.0 && du[i + 1] < 0.0))
      z.candidates.push_back(du.x(i) + du.h() * du[i] / (du[i] - du[i + 1]));

  const bool sign_change = !z.candidates.empty();
  if (!sign_change && z.min_abs_du > threshold)
    throw Error("no zero of u′: data inconsistent with homogeneous boundary values");

  const std::size_t k = z.node;
  auto crossing = [&](std::size_t i) {
    return (du[i] < 0.0 && du[i + 1] > 0.0) || (du[i] > 0.0 && du[i + 1] < 0.0);
  };
  if (du[k] != 0.0 && (crossing(k - 1) || crossing(k))) {
    // Of the two adjacent cells take the one whose other end is closer to zero.
    std::size_t cell = crossing(k - 1) ? k - 1 : k;
    if (crossing(k - 1) && crossing(k) && std::abs(du[k + 1]) < std::abs(du[k - 1])) cell = k;
    const double t = du[cell] / (du[cell] - du[cell + 1]);
    z.x0 = du.x(cell) + t * du.h();
    z.C = detail::lerp_at(F, cell, t);
  } else {
    z.x0 = du.x(k);
    z.C = F[k];
  }
  return z;
}

inline double recover_constant(const GridFunction1D& du, const GridFunction1D& F,
                               double threshold) {
  return locate_zero(du, F, threshold).C;
}

inline double recover_constant(const GridFunction1D& du, const GridFunction1D& F) {
  return recover_constant(du, F, default_threshold(du));
}

/// Recovery with the primitive F supplied directly.
inline RecoveryResult recover_with_primitive(const GridFunction1D& du, const GridFunction1D& F,
                                             const CoefficientBounds& bounds, double threshold) {
  du.require_same_grid(F);
  if (!(threshold >= 0.0)) throw Error("threshold must be non-negative");
  const ZeroLocation z = locate_zero(du, F, threshold);

  RecoveryResult r;
  r.C = z.C;
  r.threshold = threshold;
  r.zero_candidates = z.candidates;
  const std::size_t size = du.size();
  r.degenerate_mask.assign(size, false);
  std::vector<double> a(size, 0.0);
  std::size_t masked = 0;
  for (std::size_t i = 0; i < size; ++i) {
    const double d = du[i];
    if (std::abs(d) < threshold || d == 0.0) {
      r.degenerate_mask[i] = true;
      ++masked;
      continue;
    }
    const double raw = (z.C - F[i]) / d;
    a[i] = bounds.clamp(raw);
    if (a[i] != raw) ++r.clamped;
  }
  if (masked == size) throw Error("gradient vanishes everywhere");

  // Nearest unmasked neighbour; ties go left.
  std::vector<std::ptrdiff_t> left(size, -1), right(size, -1);
  for (std::size_t i = 0, last = size; i < size; ++i) {
    if (!r.degenerate_mask[i]) last = i;
    if (last != size) left[i] = static_cast<std::ptrdiff_t>(last);
  }
  for (std::size_t i = size, last = size; i-- > 0;) {
    if (!r.degenerate_mask[i]) last = i;
    if (last != size) right[i] = static_cast<std::ptrdiff_t>(last);
  }
  for (std::size_t i = 0; i < size; ++i) {
    if (!r.degenerate_mask[i]) continue;
    const auto ii = static_cast<std::ptrdiff_t>(i);
    std::ptrdiff_t src = left[i];
    if (src < 0 || (right[i] >= 0 && right[i] - ii < ii - src)) src = right[i];
    a[i] = a[static_cast<std::size_t>(src)];
  }
  r.a = GridFunction1D(du.interval(), std::move(a));
  r.fraction_degenerate = static_cast<double>(masked) / static_cast<double>(size);
  return r;
}

inline RecoveryResult recover(const GridFunction1D& du, const GridFunction1D& f,
                              const CoefficientBounds& bounds, double threshold) {
  du.require_same_grid(f);
  return recover_with_primitive(du, primitive(f), bounds, threshold);
}

inline RecoveryResult recover(const GridFunction1D& du, const GridFunction1D& f,
                              const CoefficientBounds& bounds) {
  return recover(du, f, bounds, default_threshold(du));
}

/// L_p distance restricted to unmasked nodes: masked nodes contribute zero.
inline double masked_lp_error(const RecoveryResult& r, const GridFunction1D& truth, LpNorm p) {
  GridFunction1D diff = r.a - truth;
  for (std::size_t i = 0; i < diff.size(); ++i)
    if (r.degenerate_mask[i]) diff[i] = 0.0;
  return lp_norm(diff, p);
}

/// Average ranks (ties share the mean rank).
inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) { return v[i] < v[j]; });
  std::vector<double> r(v.size());
  for (std::size_t s = 0; s < idx.size();) {
    std::size_t e = s;
    while (e + 1 < idx.size() && v[idx[e + 1]] == v[idx[s]]) ++e;
    const double mean = 0.5 * static_cast<double>(s + e) + 1.0;
    for (std::size_t k = s; k <= e; ++k) r[idx[k]] = mean;
    s = e + 1;
  }
  return r;
}

/// Spearman rank correlation; nullopt when either sample is constant.
inline std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

/// For each perturbation a_n: (||u'_{a_n} - u'_a||_L2, ||a_n - a||_Lp). The
/// trend is monotone when the Spearman correlation of the two columns
/// exceeds 0.9, or when both columns vanish identically.
inline ExperimentReport convergence_study_with_primitive(
    const GridFunction1D& a, const std::vector<GridFunction1D>& perturbations,
    const GridFunction1D& F, LpNorm p, const CoefficientBounds& bounds) {
  const ForwardSolution base = solve_with_primitive(a, F, bounds);
  ExperimentReport rep;
  rep.experiment = "convergence_study";
  rep.inputs["p"] = json_number(p.p());
  rep.inputs["n"] = a.cells();
  rep.inputs["count"] = perturbations.size();
  std::vector<double> du_err, a_err, a_err_inf;
  Table t{{"index", "du_L2", "a_Lp", "a_Linf"}, {}};
  for (std::size_t k = 0; k < perturbations.size(); ++k) {
    const auto& an = perturbations[k];
    if (!admissible(an, bounds)) throw Error("coefficient outside [λ,Λ]");
    const ForwardSolution s = solve_with_primitive(an, F, bounds);
    du_err.push_back(lp_norm(s.du - base.du, 2.0));
    a_err.push_back(lp_norm(an - a, p));
    a_err_inf.push_back(lp_norm(an - a, LpNorm::infinity()));
    t.rows.push_back({static_cast<double>(k), du_err.back(), a_err.back(), a_err_inf.back()});
  }
  const auto rho = spearman(du_err, a_err);
  const bool all_zero = std::all_of(du_err.begin(), du_err.end(), [](double v) { return v == 0.0; }) &&
                        std::all_of(a_err.begin(), a_err.end(), [](double v) { return v == 0.0; });
  rep.results["du_L2"] = du_err;
  rep.results["a_Lp"] = a_err;
  rep.results["a_Linf"] = a_err_inf;
  rep.results["spearman"] = rho ? Json(*rho) : Json(nullptr);
  rep.results["monotone_trend"] = all_zero || (rho && *rho > 0.9);
  rep.results["identically_zero"] = all_zero;
  rep.passed = rep.results["monotone_trend"].get<bool>();
  rep.add_curve("convergence", std::move(t));
  return rep;
}

inline ExperimentReport convergence_study(const GridFunction1D& a,
                                          const std::vector<GridFunction1D>& perturbations,
                                          const GridFunction1D& f, LpNorm p,
                                          const CoefficientBounds& bounds) {
  a.require_same_grid(f);
  return convergence_study_with_primitive(a, perturbations, primitive(f), p, bounds);
}

}  // namespace coeffid
