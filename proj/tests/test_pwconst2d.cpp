#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <coeffid/coeffid.hpp>

using namespace coeffid;

namespace {

constexpr double pi = std::numbers::pi;
const CoefficientBounds box(0.5, 2.0);

// -Laplace u = 1 on the unit square, zero boundary values, by the double sine series
double poisson_series(double x, double y, int terms = 401) {
  double s = 0.0;
  for (int j = 1; j <= terms; j += 2)
    for (int k = 1; k <= terms; k += 2)
      s += 16.0 / (std::pow(pi, 4) * j * k * (j * j + k * k)) * std::sin(j * pi * x) * std::sin(k * pi * y);
  return s;
}

double nodal_l2(const Field2D& v) {
  double s = 0.0;
  for (double x : v.values) s += x * x;
  return std::sqrt(s * v.h() * v.h());
}

}  // namespace

TEST(Partition, BlockMeshesTileTheSquare) {
  const Partition2D p{4, 2};
  const std::size_t m = 32;
  std::vector<int> covered(m * m, 0);
  for (std::size_t b = 0; b < p.blocks(); ++b) {
    const RectMesh r = block_mesh(p, b, m);
    for (std::size_t j = 0; j < r.cy; ++j)
      for (std::size_t i = 0; i < r.cx; ++i) ++covered[(r.j0 + j) * m + r.i0 + i];
  }
  for (int c : covered) EXPECT_EQ(c, 1);
  EXPECT_EQ(p.block(1, 1), 5u);
}

TEST(Fem, MatrixIsSymmetricWithPositiveDiagonal) {
  const std::size_t m = 8;
  const FemOperator op(RectMesh::full(m));
  const PwConstCoefficient a(Partition2D{2, 2}, {1.0, 1.5, 0.7, 2.0});
  const CsrMatrix A = op.matrix(cell_coefficients(a, op.mesh()));
  ASSERT_EQ(A.rows, (m - 1) * (m - 1));
  for (std::size_t r = 0; r < A.rows; ++r) {
    EXPECT_GT(A.at(r, r), 0.0);
    for (std::size_t c = 0; c < A.rows; ++c) EXPECT_EQ(A.at(r, c), A.at(c, r));
  }
}

TEST(Fem, ResolutionErrors) {
  const PwConstCoefficient a = PwConstCoefficient::constant({3, 1}, 1.0);
  try {
    fem_solve(a, Field2D(32, 1.0), 32);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "mesh must resolve partition");
  }
  EXPECT_THROW(fem_solve(PwConstCoefficient::constant({1, 1}, 1.0), Field2D(1024, 1.0), 1024), Error);
  EXPECT_THROW(PwConstCoefficient(Partition2D{2, 2}, {1.0}), Error);
}

TEST(Fem, UnitSourceAgainstSeries) {
  const double ref = poisson_series(0.5, 0.5);
  EXPECT_NEAR(ref, 0.07367, 1e-5);
  const Field2D u = fem_solve(PwConstCoefficient::constant({1, 1}, 1.0), Field2D(64, 1.0), 64);
  EXPECT_NEAR(u.at(32, 32), ref, 2e-3);
  EXPECT_NEAR(u.at(16, 48), poisson_series(0.25, 0.75), 2e-3);
}

TEST(Fem, ConstantCoefficientScalesSolution) {
  const Field2D f(32, 1.0);
  const Field2D u1 = fem_solve(PwConstCoefficient::constant({1, 1}, 1.0), f, 32);
  const Field2D u2 = fem_solve(PwConstCoefficient::constant({2, 2}, 2.0), f, 32);
  for (std::size_t k = 0; k < u1.values.size(); ++k) EXPECT_NEAR(u2.values[k], 0.5 * u1.values[k], 1e-9);
}

TEST(Fem, ManufacturedSolutionConvergesAtSecondOrder) {
  auto err = [](std::size_t m) {
    const Field2D f = Field2D::sample(m, [](double x, double y) { return 2 * pi * pi * std::sin(pi * x) * std::sin(pi * y); });
    const Field2D exact = Field2D::sample(m, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
    return nodal_l2(fem_solve(PwConstCoefficient::constant({1, 1}, 1.0), f, m) - exact);
  };
  const double e16 = err(16), e32 = err(32);
  EXPECT_LT(e32, 1e-2);
  EXPECT_NEAR(e16 / e32, 4.0, 0.4);
}

TEST(Fem, GalerkinResidualIsSmall) {
  const std::size_t m = 32;
  const FemOperator op(RectMesh::full(m));
  const PwConstCoefficient a(Partition2D{2, 2}, {1.0, 1.5, 0.8, 1.2});
  const Field2D f = Field2D::sample(m, [](double x, double y) { return 1 + x - y * y; });
  const FemSolution s = fem_solve(op, a, f);
  EXPECT_TRUE(s.cg.converged);
  const CsrMatrix A = op.matrix(cell_coefficients(a, op.mesh()));
  const auto b = op.load(f);
  std::vector<double> Ax;
  A.multiply(op.from_field(s.u), Ax);
  double r = 0, bn = 0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    r += (Ax[k] - b[k]) * (Ax[k] - b[k]);
    bn += b[k] * b[k];
  }
  EXPECT_LT(std::sqrt(r / bn), 1e-9);
}

TEST(HMinusOne, FullSquareIsTheUnitCoefficientEnergy) {
  const std::size_t m = 32;
  const Field2D f(m, 1.0);
  const Field2D w = fem_solve(PwConstCoefficient::constant({1, 1}, 1.0), f, m);
  const double norm = hminus1_norm(f, {1, 1}, 0, m);
  EXPECT_NEAR(norm, gradient_norm(w, RectMesh::full(m)), 1e-12);
  // energy^2 = b . w, and each interior load entry is h^2
  double s = 0;
  for (double v : w.values) s += v;
  EXPECT_NEAR(norm * norm, s * w.h() * w.h(), 1e-9 * norm * norm);
  EXPECT_EQ(hminus1_norm(Field2D(m, 0.0), {1, 1}, 0, m), 0.0);
}

TEST(HMinusOne, ScalesWithBlockSize) {
  const double block = hminus1_norm(Field2D(64, 1.0), {2, 2}, 0, 64);
  const double full = hminus1_norm(Field2D(32, 1.0), {1, 1}, 0, 32);
  EXPECT_NEAR(block, 0.25 * full, 1e-9 * full);
  const auto all = hminus1_norms(Field2D(64, 1.0), {2, 2}, 64);
  for (double v : all) EXPECT_NEAR(v, block, 1e-9 * block);
}

TEST(PwBound, SingleBlockRatioIsProductOverLambdaSquared) {
  const Partition2D p{1, 1};
  const auto rep = verify_pw_bound(PwConstCoefficient(p, {1.0}), PwConstCoefficient(p, {2.0}), Field2D(32, 1.0), 32, box);
  EXPECT_NEAR(rep.results["max_ratio"].get<double>(), 0.5, 0.02);
  EXPECT_TRUE(rep.passed);
  const auto same = verify_pw_bound(PwConstCoefficient(p, {1.3}), PwConstCoefficient(p, {1.3}), Field2D(32, 1.0), 32, box);
  EXPECT_EQ(same.results["max_ratio"].get<double>(), 0.0);
  EXPECT_THROW(verify_pw_bound(PwConstCoefficient(p, {3.0}), PwConstCoefficient(p, {1.0}), Field2D(32, 1.0), 32, box),
               Error);
}

TEST(PwBound, SmallSweepHolds) {
  const auto rep = pw_bound_sweep({2, 2}, Field2D(32, 1.0), 32, 6, 11, box);
  EXPECT_TRUE(rep.passed);
  EXPECT_LE(rep.results["max_ratio"].get<double>(), 1.0 + 5.0 / 32);
  EXPECT_EQ(rep.results["trials"].size(), 6u);
}

TEST(PwBound, SweepIsDeterministic) {
  const auto r1 = pw_bound_sweep({2, 1}, Field2D(16, 1.0), 16, 5, 3, box);
  const auto r2 = pw_bound_sweep({2, 1}, Field2D(16, 1.0), 16, 5, 3, box);
  EXPECT_EQ(r1.dump(), r2.dump());
  const auto r3 = pw_bound_sweep({2, 1}, Field2D(16, 1.0), 16, 5, 4, box);
  EXPECT_NE(r1.dump(), r3.dump());
}

TEST(Fem, SolutionDecreasesWithConstantCoefficient) {
  double prev = INFINITY;
  for (double a : {0.5, 0.8, 1.0, 1.6, 2.0}) {
    const Field2D u = fem_solve(PwConstCoefficient::constant({1, 1}, a), Field2D(16, 1.0), 16);
    const double g = gradient_norm(u, RectMesh::full(16));
    EXPECT_LT(g, prev);
    prev = g;
  }
}

TEST(RecoverPw, RecoversTwoByTwoTruth) {
  const std::size_t m = 32;
  const Partition2D p{2, 2};
  const PwConstCoefficient truth(p, {1.0, 1.5, 0.8, 1.2});
  const Field2D f(m, 1.0);
  const auto res = recover_pw(fem_solve(truth, f, m), f, p, box, m);
  EXPECT_TRUE(res.identifiable);
  EXPECT_TRUE(res.warnings.empty());
  for (std::size_t b = 0; b < 4; ++b) EXPECT_NEAR(res.coefficient.coeffs[b], truth.coeffs[b], 1e-3) << b;
}

TEST(RecoverPw, VanishingSourceWarns) {
  const std::size_t m = 16;
  const Partition2D p{2, 1};
  const Field2D f(m, 0.0);
  const auto res = recover_pw(Field2D(m, 0.0), f, p, box, m);
  EXPECT_FALSE(res.identifiable);
  ASSERT_FALSE(res.warnings.empty());
  EXPECT_NE(res.warnings[0].find("not identifiable"), std::string::npos);
}

TEST(RecoverPw, StartingPointTruthNeedsNoSweeps) {
  const std::size_t m = 16;
  const Partition2D p{2, 2};
  const Field2D f(m, 1.0);
  const auto res = recover_pw(fem_solve(PwConstCoefficient::constant(p, 1.0), f, m), f, p, box, m);
  EXPECT_EQ(res.sweeps, 0u);
  EXPECT_TRUE(res.converged);
  for (double c : res.coefficient.coeffs) EXPECT_EQ(c, 1.0);
}

TEST(Field2D, JsonRoundTrip) {
  const Field2D f = Field2D::sample(9, [](double x, double y) { return std::exp(x) / 3 - y / 7; });
  const Field2D back = Field2D::from_json(Json::parse(f.to_json().dump()));
  EXPECT_EQ(back.m, f.m);
  EXPECT_EQ(back.values, f.values);
  EXPECT_THROW(Field2D::from_json(Json{{"m", 3}, {"values", {1, 2}}}), Error);
}
