// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include <coeffid/coeffid.hpp>

#include "rational.hpp"

using namespace coeffid;

namespace {

const Interval unit(0.0, 1.0);
const CoefficientBounds box(0.5, 2.0);
int failures = 0;

struct Verdict {
  bool ok;
  std::string detail;
};

void criterion(int id, const char* name, double budget_s, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs > budget_s) {
    v.ok = false;
    v.detail += " (over the " + format_double(budget_s) + " s budget)";
  }
  std::printf("%s %2d %-34s %8.2fs  %s\n", v.ok ? "PASS" : "FAIL", id, name, secs, v.detail.c_str());
  std::fflush(stdout);
  failures += !v.ok;
}

GridFunction1D random_smooth(Rng& rng, std::size_t n) {
  // 1.25 plus three modes of amplitude at most 0.2: values in [0.65, 1.85]
  double c[3], ph[3];
  for (int k = 0; k < 3; ++k) {
    c[k] = uniform(rng, -0.2, 0.2);
    ph[k] = uniform(rng, 0, 2 * std::numbers::pi);
  }
  return GridFunction1D::sample(unit, n, [&](double x) {
    double v = 1.25;
    for (int k = 0; k < 3; ++k) v += c[k] * std::sin((k + 1) * std::numbers::pi * x + ph[k]);
    return v;
  });
}

GridFunction1D random_pl(Rng& rng) {
  const std::size_t n = 16 + static_cast<std::size_t>(uniform(rng, 0, 600));
  std::vector<double> v(n + 1);
  double cur = uniform(rng, -1, 1);
  for (auto& x : v) {
    if (uniform01(rng) < 0.8) cur = uniform(rng, -1, 1);
    x = cur;
  }
  return GridFunction1D(unit, v);
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

int main() {
  double worst_flux = 0.0;  // shared with criterion 2

  criterion(1, "1D round-trip recovery", 5.0, [&] {
    Rng rng(1);
    const std::size_t n = 4096;
    const auto f = GridFunction1D::sample(unit, n, [](double x) { return 1 - 2 * x; });
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const auto a = random_smooth(rng, n);
      const auto s = solve(a, f, box);
      worst_flux = std::max(worst_flux, flux_residual(a, s) / (1 + std::abs(s.Ca) + s.F.max_abs()));
      worst = std::max(worst, masked_lp_error(recover(s.du, f, box), a, LpNorm(1)));
    }
    return Verdict{worst < 1e-3, "max masked L1 error " + fmt(worst)};
  });

  criterion(2, "flux identity", 0, [&] {
    Rng rng(2);
    for (int k = 0; k < 50; ++k) {
      const std::size_t n = 64 + static_cast<std::size_t>(uniform(rng, 0, 4000));
      const auto a = random_smooth(rng, n);
      const double c0 = uniform(rng, -1, 1), c1 = uniform(rng, -3, 3), w = uniform(rng, 1, 20);
      const auto f = GridFunction1D::sample(unit, n, [&](double x) { return c0 + c1 * std::sin(w * x); });
      const auto s = solve(a, f, box);
      worst_flux = std::max(worst_flux, flux_residual(a, s) / (1 + std::abs(s.Ca) + s.F.max_abs()));
    }
    return Verdict{worst_flux <= 1e-10, "max scaled residual " + fmt(worst_flux)};
  });

  criterion(3, "Holder exponent and sweep", 30.0, [] {
    const bool exact = holder_exponent(Rational(2), Rational(1), Rational(1)) == Rational(2, 9) &&
                       holder_exponent(Rational(1), Rational(1), Rational(1)) == Rational(1, 4);
    ExponentFit fit;
    fit.alpha = 1.0;
    fit.beta = 1.0;
    const auto rep = holder_sweep(GridFunction1D(unit, 1024, 1.0), 2.0, fit, box, 100, 2024);
    const double worst = rep.results["max_constant_needed"].get<double>();
    return Verdict{exact && rep.passed && std::isfinite(worst),
                   std::string("exact 2/9, 1/4: ") + (exact ? "yes" : "no") + "; max constant " + fmt(worst)};
  });

  criterion(4, "dyadic rates within 15%", 60.0, [] {
    struct Case {
      double alpha, beta, p;
    };
    bool ok = true;
    std::string detail;
    for (const Case c : {Case{2, 0, 1}, Case{1, 0, 1}, Case{4, 0, 2}}) {
      const auto rep = dyadic_rate(DyadicFamily::make(c.alpha, c.beta, 10), c.p, {4, 5, 6, 7, 8, 9, 10}, 1u << 16);
      ok = ok && rep.passed;
      detail += "alpha=" + fmt(c.alpha) + " slope " + fmt(rep.results["measured_slope"].get<double>()) + " vs " +
                fmt(rep.results["gamma"].get<double>()) + "; ";
    }
    return Verdict{ok, detail};
  });

  criterion(5, "sup norm does not converge", 0, [] {
    const auto rep = dyadic_rate(DyadicFamily::make(1.0, 0.0, 10), 1.0, {4, 5, 6, 7, 8, 9, 10}, 1u << 16);
    const auto u = rep.results["u_err_V"].get<std::vector<double>>();
    const auto sup = rep.results["a_err_Linf"].get<std::vector<double>>();
    bool ok = true;
    double worst_ratio = 0.0;
    for (std::size_t k = 1; k < u.size(); ++k) {
      worst_ratio = std::max(worst_ratio, u[k] / u[k - 1]);
      ok = ok && u[k] <= 0.75 * u[k - 1];
    }
    for (double v : sup) ok = ok && std::abs(v - 1.0) <= 1e-12;
    return Verdict{ok, "worst u ratio " + fmt(worst_ratio) + ", sup errors all 1"};
  });

  criterion(6, "coarea identity and good levels", 0, [] {
    Rng rng(6);
    double worst = 0.0;
    bool levels_ok = true;
    for (int k = 0; k < 50; ++k) {
      const auto h = random_pl(rng);
      const double tv = total_variation(h);
      worst = std::max(worst, std::abs(coarea_integral(h) - tv) / tv);
      for (double t : good_levels(h, 0.5))
        levels_ok = levels_ok && level_perimeter(h, t) <= 1.0 / (t * std::abs(std::log(t)));
    }
    return Verdict{worst < 1e-12 && levels_ok, "max relative coarea error " + fmt(worst)};
  });

  criterion(7, "non-identifiability witnesses", 0, [] {
    const auto vp = volterra_pair(3, 1u << 15, 0.5);
    const auto ip = inhomogeneous_pair(4096);
    const bool ok = vp.pair.residual_a < 1e-8 && vp.pair.residual_b < 1e-8 && vp.pair.coeff_gap >= 0.28 &&
                    std::abs(vp.pair.coeff_gap - 0.28125) <= 1e-6 && ip.flux_identity_a <= 1e-12 &&
                    ip.flux_identity_b <= 1e-12;
    return Verdict{ok, "residuals " + fmt(vp.pair.residual_a) + ", " + fmt(vp.pair.residual_b) + "; gap " +
                           fmt(vp.pair.coeff_gap) + "; flux " + fmt(std::max(ip.flux_identity_a, ip.flux_identity_b))};
  });

  criterion(8, "piecewise-constant 2D bound", 120.0, [] {
    const std::size_t m = 64;
    const auto sweep = pw_bound_sweep({2, 2}, Field2D(m, 1.0), m, 50, 8, box);
    const double slack = 1.0 + 5.0 / m;
    const double worst = sweep.results["max_ratio"].get<double>();
    const Partition2D one{1, 1};
    const auto single = verify_pw_bound(PwConstCoefficient(one, {1.0}), PwConstCoefficient(one, {2.0}),
                                        Field2D(m, 1.0), m, box);
    const double r1 = single.results["max_ratio"].get<double>();
    return Verdict{worst <= slack && std::abs(r1 - 0.5) <= 0.02,
                   "2x2 max ratio " + fmt(worst) + " (slack " + fmt(slack) + "); 1x1 ratio " + fmt(r1)};
  });

  criterion(9, "piecewise-constant recovery", 0, [] {
    const std::size_t m = 64;
    const Partition2D p{2, 2};
    const PwConstCoefficient truth(p, {1.0, 1.5, 0.8, 1.2});
    const Field2D f(m, 1.0);
    const auto res = recover_pw(fem_solve(truth, f, m), f, p, box, m);
    double err = 0.0;
    for (std::size_t b = 0; b < 4; ++b) err = std::max(err, std::abs(res.coefficient.coeffs[b] - truth.coeffs[b]));
    const auto zero = recover_pw(Field2D(16, 0.0), Field2D(16, 0.0), p, box, 16);
    const bool warned = !zero.identifiable && !zero.warnings.empty();
    return Verdict{err <= 1e-3 && warned,
                   "max error " + fmt(err) + "; f = 0 warning " + (warned ? "emitted" : "missing")};
  });

  criterion(10, "seeded sweeps are reproducible", 0, [] {
    ExponentFit fit;
    fit.alpha = 1.0;
    fit.beta = 1.0;
    const auto h1 = holder_sweep(GridFunction1D(unit, 512, 1.0), 2.0, fit, box, 20, 77);
    const auto h2 = holder_sweep(GridFunction1D(unit, 512, 1.0), 2.0, fit, box, 20, 77);
    const auto p1 = pw_bound_sweep({2, 2}, Field2D(16, 1.0), 16, 8, 77, box);
    const auto p2 = pw_bound_sweep({2, 2}, Field2D(16, 1.0), 16, 8, 77, box);
    const bool ok = h1.dump() == h2.dump() && p1.dump() == p2.dump();
    return Verdict{ok, ok ? "identical dumps" : "dumps differ"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
