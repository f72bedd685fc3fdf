#pragma once

// Total variation, level-set perimeters and the coarea identity for
// piecewise-linear functions on an interval.
//
// In 1D the perimeter of E_t = {h > t} inside the open interval is the
// number of boundary points of E_t, i.e. the number of sign changes of
// h - t along the grid.

#include <algorithm>
#include <cmath>
#include <vector>

#include "core.hpp"
#include "io.hpp"

namespace coeffid {

inline double total_variation(const GridFunction1D& h) {
  double tv = 0.0;
  for (std::size_t i = 0; i < h.cells(); ++i) tv += std::abs(h[i + 1] - h[i]);
  return tv;
}

/// Sign changes of h - t, skipping nodes where h == t so that touching the
/// level without crossing does not count.
inline double level_perimeter(const GridFunction1D& h, double t) {
  int prev = 0;
  double count = 0.0;
  for (double v : h.values()) {
    const int s = v > t ? 1 : (v < t ? -1 : 0);
    if (s == 0) continue;
    if (prev != 0 && s != prev) count += 1.0;
    prev = s;
  }
  return count;
}

struct LevelSetProfile {
  std::vector<double> levels;
  std::vector<double> perimeters;
};

/// Exact P(E_t) as a step function of t: between consecutive distinct nodal
/// values the perimeter equals the number of cells whose range spans the gap.
struct PerimeterSteps {
  std::vector<double> breakpoints;  // sorted distinct nodal values
  std::vector<double> counts;       // P on (breakpoints[k], breakpoints[k+1])
};

inline PerimeterSteps perimeter_steps(const GridFunction1D& h) {
  PerimeterSteps s;
  s.breakpoints.assign(h.values().begin(), h.values().end());
  std::sort(s.breakpoints.begin(), s.breakpoints.end());
  s.breakpoints.erase(std::unique(s.breakpoints.begin(), s.breakpoints.end()), s.breakpoints.end());
  if (s.breakpoints.size() < 2) return s;
  std::vector<long> delta(s.breakpoints.size(), 0);
  auto index_of = [&](double v) {
    return static_cast<std::size_t>(
        std::lower_bound(s.breakpoints.begin(), s.breakpoints.end(), v) - s.breakpoints.begin());
  };
  for (std::size_t i = 0; i < h.cells(); ++i) {
    if (h[i] == h[i + 1]) continue;
    ++delta[index_of(std::min(h[i], h[i + 1]))];
    --delta[index_of(std::max(h[i], h[i + 1]))];
  }
  long running = 0;
  for (std::size_t k = 0; k + 1 < s.breakpoints.size(); ++k) {
    running += delta[k];
    s.counts.push_back(static_cast<double>(running));
  }
  return s;
}

/// int P(E_t) dt by exact event-driven integration.
inline double coarea_integral(const GridFunction1D& h) {
  const PerimeterSteps s = perimeter_steps(h);
  double total = 0.0;
  for (std::size_t k = 0; k < s.counts.size(); ++k)
    total += s.counts[k] * (s.breakpoints[k + 1] - s.breakpoints[k]);
  return total;
}

/// Perimeter profile on nlevels uniform levels strictly inside (min h, max h).
inline LevelSetProfile level_profile(const GridFunction1D& h, int nlevels) {
  LevelSetProfile prof;
  const double lo = h.min(), hi = h.max();
  for (int k = 0; k < nlevels; ++k) {
    const double t = lo + (hi - lo) * (k + 0.5) / nlevels;
    prof.levels.push_back(t);
    prof.perimeters.push_back(level_perimeter(h, t));
  }
  return prof;
}

inline ExperimentReport coarea_check(const GridFunction1D& h, int nlevels) {
  if (nlevels < 16) throw Error("coarea check needs at least 16 levels");
  const double tv = total_variation(h);
  const double integral = coarea_integral(h);
  const double rel = tv > 0.0 ? std::abs(integral - tv) / tv : std::abs(integral);

  const LevelSetProfile prof = level_profile(h, nlevels);
  double riemann = 0.0;
  const double dt = (h.max() - h.min()) / nlevels;
  for (double p : prof.perimeters) riemann += p * dt;

  ExperimentReport rep;
  rep.experiment = "coarea_check";
  rep.inputs["n"] = h.cells();
  rep.inputs["nlevels"] = nlevels;
  rep.results["total_variation"] = tv;
  rep.results["coarea_integral"] = integral;
  rep.results["relative_error"] = rel;
  rep.results["riemann_estimate"] = riemann;
  rep.passed = rel < 1e-12;
  Table t{{"t", "P"}, {}};
  for (std::size_t k = 0; k < prof.levels.size(); ++k)
    t.rows.push_back({prof.levels[k], prof.perimeters[k]});
  rep.add_curve("profile", std::move(t));
  return rep;
}

/// Levels on the grid t_start 2^-k, down to 1e-9, whose super-level sets
/// satisfy P(E_t) <= 1 / (t |ln t|).
inline std::vector<double> good_levels(const GridFunction1D& h, double t_start,
                                       double floor = 1e-9) {
  if (!(t_start > 0.0 && t_start < 1.0)) throw Error("t_start must lie in (0, 1)");
  std::vector<double> out;
  for (double t = t_start; t >= floor; t *= 0.5)
    if (level_perimeter(h, t) <= 1.0 / (t * std::abs(std::log(t)))) out.push_back(t);
  if (out.empty()) throw Error("TV budget violated");
  return out;
}

}  // namespace coeffid
