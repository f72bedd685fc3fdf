#pragma once

// Piecewise-constant coefficients on axis-aligned blocks of the unit square.
//
// P1 finite elements on a uniform m x m grid, each square cut along the
// diagonal from (i+1, j) to (i, j+1). Homogeneous Dirichlet data. Nodal
// fields are stored row-major: value(i, j) = values[j * (m + 1) + i], with
// i the x index and j the y index.

#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "core.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace coeffid {

struct Partition2D {
  std::size_t nx = 1;
  std::size_t ny = 1;

  std::size_t blocks() const { return nx * ny; }
  /// Row-major block index.
  std::size_t block(std::size_t bx, std::size_t by) const { return by * nx + bx; }
};

struct PwConstCoefficient {
  Partition2D partition;
  std::vector<double> coeffs;

  PwConstCoefficient() = default;
  PwConstCoefficient(Partition2D p, std::vector<double> c) : partition(p), coeffs(std::move(c)) {
    if (coeffs.size() != partition.blocks()) throw Error("one coefficient per block required");
  }
  static PwConstCoefficient constant(Partition2D p, double v) {
    return PwConstCoefficient(p, std::vector<double>(p.blocks(), v));
  }

  bool admissible(const CoefficientBounds& b) const {
    return std::all_of(coeffs.begin(), coeffs.end(), [&](double v) { return b.contains(v); });
  }
};

struct Field2D {
  std::size_t m = 0;
  std::vector<double> values;

  Field2D() = default;
  explicit Field2D(std::size_t m_, double v = 0.0) : m(m_), values((m_ + 1) * (m_ + 1), v) {}

  template <class Fn>
  static Field2D sample(std::size_t m, Fn&& fn) {
    Field2D f(m);
    const double h = 1.0 / static_cast<double>(m);
    for (std::size_t j = 0; j <= m; ++j)
      for (std::size_t i = 0; i <= m; ++i) f.at(i, j) = fn(static_cast<double>(i) * h, static_cast<double>(j) * h);
    return f;
  }

  double& at(std::size_t i, std::size_t j) { return values[j * (m + 1) + i]; }
  double at(std::size_t i, std::size_t j) const { return values[j * (m + 1) + i]; }
  double h() const { return 1.0 / static_cast<double>(m); }

  friend Field2D operator-(const Field2D& a, const Field2D& b) {
    if (a.m != b.m) throw Error("fields live on different meshes");
    Field2D out = a;
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] -= b.values[k];
    return out;
  }

  Json to_json() const { return Json{{"m", m}, {"values", values}}; }
  static Field2D from_json(const Json& j) {
    Field2D f;
    f.m = j.at("m").get<std::size_t>();
    f.values = j.at("values").get<std::vector<double>>();
    if (f.values.size() != (f.m + 1) * (f.m + 1)) throw Error("field JSON: values do not match m");
    return f;
  }
};

/// Sub-rectangle of the global grid, in cell units.
struct RectMesh {
  std::size_t m = 0;  // global resolution, h = 1/m
  std::size_t i0 = 0, j0 = 0;
  std::size_t cx = 0, cy = 0;

  static RectMesh full(std::size_t m) { return {m, 0, 0, m, m}; }
  std::size_t nodes_x() const { return cx + 1; }
  std::size_t local(std::size_t i, std::size_t j) const { return j * (cx + 1) + i; }
  std::size_t global(std::size_t i, std::size_t j) const { return (j0 + j) * (m + 1) + (i0 + i); }
  bool boundary(std::size_t i, std::size_t j) const { return i == 0 || j == 0 || i == cx || j == cy; }
};

struct CsrMatrix {
  std::size_t rows = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> col;
  std::vector<double> val;

  void multiply(const std::vector<double>& x, std::vector<double>& y) const {
    y.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      double s = 0.0;
      for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += val[k] * x[col[k]];
      y[r] = s;
    }
  }

  double at(std::size_t r, std::size_t c) const {
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      if (col[k] == c) return val[k];
    return 0.0;
  }
};

namespace detail {

// Right isosceles triangle, right-angle vertex first. Stiffness of the
// Laplacian is independent of h in 2D; the mass matrix carries area/12.
inline constexpr std::array<std::array<double, 3>, 3> kLocalStiffness{
    {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}}};
inline constexpr std::array<std::array<double, 3>, 3> kLocalMass{
    {{2.0, 1.0, 1.0}, {1.0, 2.0, 1.0}, {1.0, 1.0, 2.0}}};

/// The two triangles of cell (i, j) as local node triples.
inline std::array<std::array<std::size_t, 3>, 2> cell_triangles(const RectMesh& mesh, std::size_t i,
                                                                std::size_t j) {
  const std::size_t n00 = mesh.local(i, j), n10 = mesh.local(i + 1, j);
  const std::size_t n01 = mesh.local(i, j + 1), n11 = mesh.local(i + 1, j + 1);
  return {{{n00, n10, n01}, {n11, n01, n10}}};
}

}  // namespace detail

/// Sparsity pattern and element-to-CSR scatter map for one mesh; matrices
/// for different cellwise coefficients reuse it.
class FemOperator {
public:
  explicit FemOperator(const RectMesh& mesh) : mesh_(mesh) {
    const std::size_t nn = (mesh.cx + 1) * (mesh.cy + 1);
    unknown_.assign(nn, npos);
    for (std::size_t j = 0; j <= mesh.cy; ++j)
      for (std::size_t i = 0; i <= mesh.cx; ++i)
        if (!mesh.boundary(i, j)) {
          unknown_[mesh.local(i, j)] = node_of_.size();
          node_of_.push_back(mesh.local(i, j));
        }

    struct Entry {
      std::size_t row, col, cell;
      double w;
    };
    std::vector<Entry> entries;
    for (std::size_t j = 0; j < mesh.cy; ++j)
      for (std::size_t i = 0; i < mesh.cx; ++i)
        for (const auto& tri : detail::cell_triangles(mesh, i, j))
          for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
              const double w = detail::kLocalStiffness[r][c];
              const std::size_t ur = unknown_[tri[r]], uc = unknown_[tri[c]];
              if (w == 0.0 || ur == npos || uc == npos) continue;
              entries.push_back({ur, uc, j * mesh.cx + i, w});
            }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    pattern_.rows = node_of_.size();
    pattern_.row_ptr.assign(pattern_.rows + 1, 0);
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const bool fresh = k == 0 || entries[k].row != entries[k - 1].row ||
                         entries[k].col != entries[k - 1].col;
      if (fresh) {
        pattern_.col.push_back(entries[k].col);
        ++pattern_.row_ptr[entries[k].row + 1];
      }
      scatter_.push_back({pattern_.col.size() - 1, entries[k].cell, entries[k].w});
    }
    std::partial_sum(pattern_.row_ptr.begin(), pattern_.row_ptr.end(), pattern_.row_ptr.begin());
    pattern_.val.assign(pattern_.col.size(), 0.0);
  }

  const RectMesh& mesh() const { return mesh_; }
  std::size_t unknowns() const { return node_of_.size(); }

  /// Stiffness matrix for a coefficient given per cell (row-major, cy x cx).
  CsrMatrix matrix(const std::vector<double>& cell_coef) const {
    CsrMatrix A = pattern_;
    for (const auto& s : scatter_) A.val[s.pos] += cell_coef[s.cell] * s.w;
    return A;
  }

  /// Consistent load int f_h phi_i for the P1 interpolant of a global nodal field.
  std::vector<double> load(const Field2D& f) const {
    std::vector<double> b(unknowns(), 0.0);
    const double scale = f.h() * f.h() / 24.0;  // (h^2/2) / 12
    for (std::size_t j = 0; j < mesh_.cy; ++j)
      for (std::size_t i = 0; i < mesh_.cx; ++i)
        for (const auto& tri : detail::cell_triangles(mesh_, i, j)) {
          double fv[3];
          for (int r = 0; r < 3; ++r) fv[r] = f.values[global_of(tri[r])];
          for (int r = 0; r < 3; ++r) {
            const std::size_t u = unknown_[tri[r]];
            if (u == npos) continue;
            for (int c = 0; c < 3; ++c) b[u] += scale * detail::kLocalMass[r][c] * fv[c];
          }
        }
    return b;
  }

  /// Scatter unknowns into a global field (zero elsewhere).
  Field2D to_field(const std::vector<double>& x) const {
    Field2D out(mesh_.m);
    for (std::size_t k = 0; k < x.size(); ++k) out.values[global_of(node_of_[k])] = x[k];
    return out;
  }

  std::vector<double> from_field(const Field2D& f) const {
    std::vector<double> x(unknowns());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = f.values[global_of(node_of_[k])];
    return x;
  }

private:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  struct Scatter {
    std::size_t pos, cell;
    double w;
  };

  std::size_t global_of(std::size_t local) const {
    const std::size_t nx = mesh_.nodes_x();
    return mesh_.global(local % nx, local / nx);
  }

  RectMesh mesh_;
  std::vector<std::size_t> unknown_;
  std::vector<std::size_t> node_of_;
  CsrMatrix pattern_;
  std::vector<Scatter> scatter_;
};

struct CgResult {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients; x holds the initial guess.
inline CgResult conjugate_gradient(const CsrMatrix& A, const std::vector<double>& b,
                                   std::vector<double>& x, double rel_tol = 1e-10,
                                   std::size_t max_iter = 0) {
  const std::size_t n = A.rows;
  if (max_iter == 0) max_iter = 10 * n + 100;
  x.resize(n, 0.0);
  CgResult res;
  const double bnorm = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    res.converged = true;
    return res;
  }
  std::vector<double> diag(n), r(n), z(n), p(n), Ap(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = A.at(i, i);
  A.multiply(x, Ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    const double rnorm = std::sqrt(std::inner_product(r.begin(), r.end(), r.begin(), 0.0));
    res.relative_residual = rnorm / bnorm;
    if (res.relative_residual <= rel_tol) {
      res.converged = true;
      return res;
    }
    A.multiply(p, Ap);
    const double alpha = rz / std::inner_product(p.begin(), p.end(), Ap.begin(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
      z[i] = r[i] / diag[i];
    }
    const double rz_new = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return res;
}

inline constexpr std::size_t kMaxMesh = 512;

inline void require_resolves(const Partition2D& p, std::size_t m) {
  if (m == 0 || m > kMaxMesh) throw Error("mesh resolution must lie in [1, 512]");
  if (p.nx == 0 || p.ny == 0 || m % p.nx != 0 || m % p.ny != 0)
    throw Error("mesh must resolve partition");
}

/// Coefficient per cell of `mesh` (row-major, cy x cx).
inline std::vector<double> cell_coefficients(const PwConstCoefficient& a, const RectMesh& mesh) {
  require_resolves(a.partition, mesh.m);
  const std::size_t sx = mesh.m / a.partition.nx, sy = mesh.m / a.partition.ny;
  std::vector<double> c(mesh.cx * mesh.cy);
  for (std::size_t j = 0; j < mesh.cy; ++j)
    for (std::size_t i = 0; i < mesh.cx; ++i)
      c[j * mesh.cx + i] = a.coeffs[a.partition.block((mesh.i0 + i) / sx, (mesh.j0 + j) / sy)];
  return c;
}

struct FemSolution {
  Field2D u;
  CgResult cg;
};

/// Galerkin solve on a prepared operator; `guess` (optional) warm-starts CG.
inline FemSolution fem_solve(const FemOperator& op, const PwConstCoefficient& a, const Field2D& f,
                             const Field2D* guess = nullptr) {
  const std::size_t m = op.mesh().m;
  if (f.m != m) throw Error("source density must live on the solver mesh");
  const CsrMatrix A = op.matrix(cell_coefficients(a, op.mesh()));
  const std::vector<double> b = op.load(f);
  std::vector<double> x = guess ? op.from_field(*guess) : std::vector<double>(op.unknowns(), 0.0);
  FemSolution s;
  s.cg = conjugate_gradient(A, b, x);
  if (!s.cg.converged) throw Error("conjugate gradient did not converge");
  s.u = op.to_field(x);
  return s;
}

inline Field2D fem_solve(const PwConstCoefficient& a, const Field2D& f, std::size_t m) {
  require_resolves(a.partition, m);
  return fem_solve(FemOperator(RectMesh::full(m)), a, f).u;
}

/// ||grad v||^2 over the cells of `mesh` for the P1 interpolant of a global field.
inline double energy_squared(const Field2D& v, const RectMesh& mesh) {
  double e = 0.0;
  for (std::size_t j = 0; j < mesh.cy; ++j)
    for (std::size_t i = 0; i < mesh.cx; ++i)
      for (const auto& tri : detail::cell_triangles(mesh, i, j)) {
        double val[3];
        for (int r = 0; r < 3; ++r) {
          const std::size_t nx = mesh.nodes_x();
          val[r] = v.values[mesh.global(tri[r] % nx, tri[r] / nx)];
        }
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) e += val[r] * detail::kLocalStiffness[r][c] * val[c];
      }
  return e;
}

inline RectMesh block_mesh(const Partition2D& p, std::size_t block, std::size_t m) {
  require_resolves(p, m);
  const std::size_t sx = m / p.nx, sy = m / p.ny;
  const std::size_t bx = block % p.nx, by = block / p.nx;
  return {m, bx * sx, by * sy, sx, sy};
}

inline double gradient_norm(const Field2D& v, const RectMesh& mesh) {
  return std::sqrt(std::max(0.0, energy_squared(v, mesh)));
}

/// ||f||_{H^-1(D_i)} as the energy norm of the Riesz representative w:
/// -Laplace w = f on the block, w = 0 on its boundary.
inline double hminus1_norm(const Field2D& f, const Partition2D& p, std::size_t block,
                           std::size_t m) {
  const RectMesh mesh = block_mesh(p, block, m);
  const FemOperator op(mesh);
  const FemSolution w = fem_solve(op, PwConstCoefficient::constant({1, 1}, 1.0), f);
  return gradient_norm(w.u, mesh);
}

inline std::vector<double> hminus1_norms(const Field2D& f, const Partition2D& p, std::size_t m) {
  return parallel_map(p.blocks(), [&](std::size_t b) { return hminus1_norm(f, p, b, m); });
}

struct PwBoundBlock {
  double lhs = 0.0;  // |a_i - b_i| ||f||_{H^-1(D_i)}
  double rhs = 0.0;  // Lambda^2 ||grad(u_a - u_b)||_{L2(D_i)}
  double ratio = 0.0;
};

/// Per-block check of |a_i - b_i| ||f||_{H^-1(D_i)} <= Lambda^2 ||grad(u_a - u_b)||_{L2(D_i)}
/// with slack 1 + slack_C / m.
inline ExperimentReport verify_pw_bound(const PwConstCoefficient& a, const PwConstCoefficient& b,
                                        const Field2D& f, std::size_t m,
                                        const CoefficientBounds& bounds, double slack_C = 5.0,
                                        const std::vector<double>* hm1 = nullptr) {
  if (a.partition.nx != b.partition.nx || a.partition.ny != b.partition.ny)
    throw Error("coefficients must share a partition");
  if (!a.admissible(bounds) || !b.admissible(bounds)) throw Error("coefficient outside [λ,Λ]");
  require_resolves(a.partition, m);
  const FemOperator op(RectMesh::full(m));
  const Field2D ua = fem_solve(op, a, f).u;
  const Field2D ub = fem_solve(op, b, f).u;
  const Field2D diff = ua - ub;
  const std::vector<double> norms = hm1 ? *hm1 : hminus1_norms(f, a.partition, m);
  const double slack = 1.0 + slack_C / static_cast<double>(m);
  const double L2 = bounds.Lambda * bounds.Lambda;

  ExperimentReport rep;
  rep.experiment = "pw_bound";
  rep.inputs["nx"] = a.partition.nx;
  rep.inputs["ny"] = a.partition.ny;
  rep.inputs["m"] = m;
  rep.inputs["a"] = a.coeffs;
  rep.inputs["b"] = b.coeffs;
  rep.inputs["Lambda"] = bounds.Lambda;
  Json blocks = Json::array();
  double max_ratio = 0.0;
  for (std::size_t i = 0; i < a.partition.blocks(); ++i) {
    PwBoundBlock blk;
    blk.lhs = std::abs(a.coeffs[i] - b.coeffs[i]) * norms[i];
    blk.rhs = L2 * gradient_norm(diff, block_mesh(a.partition, i, m));
    blk.ratio = blk.rhs > 0.0 ? blk.lhs / blk.rhs
                              : (blk.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    max_ratio = std::max(max_ratio, blk.ratio);
    blocks.push_back(Json{{"block", i},
                          {"lhs", blk.lhs},
                          {"rhs", blk.rhs},
                          {"ratio", json_number(blk.ratio)},
                          {"hminus1", norms[i]}});
  }
  rep.results["blocks"] = blocks;
  rep.results["max_ratio"] = json_number(max_ratio);
  rep.results["slack"] = slack;
  rep.passed = max_ratio <= slack;
  return rep;
}

/// Random admissible pairs on a partition, f given. Each trial draws its
/// own stream from (seed, trial) so results do not depend on scheduling.
inline ExperimentReport pw_bound_sweep(const Partition2D& p, const Field2D& f, std::size_t m,
                                       std::size_t trials, std::uint64_t seed,
                                       const CoefficientBounds& bounds, double slack_C = 5.0) {
  const std::vector<double> norms = hminus1_norms(f, p, m);
  auto reports = parallel_map(trials, [&](std::size_t t) {
    Rng rng = task_rng(seed, t);
    std::vector<double> ca(p.blocks()), cb(p.blocks());
    for (auto& v : ca) v = uniform(rng, bounds.lambda, bounds.Lambda);
    for (auto& v : cb) v = uniform(rng, bounds.lambda, bounds.Lambda);
    return verify_pw_bound(PwConstCoefficient(p, ca), PwConstCoefficient(p, cb), f, m, bounds,
                           slack_C, &norms);
  });
  ExperimentReport rep;
  rep.experiment = "pw_bound_sweep";
  rep.inputs["nx"] = p.nx;
  rep.inputs["ny"] = p.ny;
  rep.inputs["m"] = m;
  rep.inputs["trials"] = trials;
  rep.inputs["seed"] = seed;
  rep.inputs["lambda"] = bounds.lambda;
  rep.inputs["Lambda"] = bounds.Lambda;
  double max_ratio = 0.0;
  Json per_trial = Json::array();
  Table t{{"trial", "block", "lhs", "rhs", "ratio"}, {}};
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& r = reports[k];
    rep.passed = rep.passed && r.passed;
    const double mr = r.results["max_ratio"].is_null() ? std::numeric_limits<double>::infinity()
                                                       : r.results["max_ratio"].get<double>();
    max_ratio = std::max(max_ratio, mr);
    per_trial.push_back(Json{{"a", r.inputs["a"]}, {"b", r.inputs["b"]}, {"max_ratio", json_number(mr)}});
    for (const auto& blk : r.results["blocks"])
      t.rows.push_back({static_cast<double>(k), blk["block"].get<double>(), blk["lhs"].get<double>(),
                        blk["rhs"].get<double>(),
                        blk["ratio"].is_null() ? std::numeric_limits<double>::infinity()
                                               : blk["ratio"].get<double>()});
  }
  rep.results["hminus1"] = norms;
  rep.results["max_ratio"] = json_number(max_ratio);
  rep.results["slack"] = 1.0 + slack_C / static_cast<double>(m);
  rep.results["trials"] = per_trial;
  rep.add_curve("ratios", std::move(t));
  return rep;
}

struct PwRecoveryResult {
  PwConstCoefficient coefficient;
  std::size_t sweeps = 0;
  double objective = 0.0;  // ||grad(u_h(a) - u_meas)||_{L2(D)}
  bool converged = false;
  bool identifiable = true;
  std::vector<double> hminus1;
  std::vector<std::string> warnings;

  Json to_json() const {
    return Json{{"coefficients", coefficient.coeffs},
                {"nx", coefficient.partition.nx},
                {"ny", coefficient.partition.ny},
                {"sweeps", sweeps},
                {"objective", objective},
                {"converged", converged},
                {"identifiable", identifiable},
                {"hminus1", hminus1},
                {"warnings", warnings}};
  }
};

struct PwRecoveryOptions {
  std::size_t max_sweeps = 50;
  double objective_decrease = 1e-10;
  double golden_tolerance = 1e-9;   // bracket width in coefficient units
  double hminus1_floor = 1e-12;     // below this f is treated as vanishing on a block
};

/// Block coordinate descent from the geometric mean of the bounds: each
/// block coefficient is set by golden-section search on [lambda, Lambda]
/// minimizing the block misfit ||grad(u_h(a) - u_meas)||_{L2(D_i)}.
inline PwRecoveryResult recover_pw(const Field2D& u_meas, const Field2D& f, const Partition2D& p,
                                   const CoefficientBounds& bounds, std::size_t m,
                                   const PwRecoveryOptions& opt = {}) {
  require_resolves(p, m);
  if (u_meas.m != m || f.m != m) throw Error("measurements must live on the solver mesh");
  const FemOperator op(RectMesh::full(m));
  std::vector<RectMesh> blocks;
  for (std::size_t b = 0; b < p.blocks(); ++b) blocks.push_back(block_mesh(p, b, m));

  PwRecoveryResult res;
  res.hminus1 = hminus1_norms(f, p, m);
  for (std::size_t b = 0; b < p.blocks(); ++b)
    if (!(res.hminus1[b] > opt.hminus1_floor)) {
      res.identifiable = false;
      res.warnings.push_back("f vanishes in H^-1 on block " + std::to_string(b) +
                             ": its coefficient is not identifiable");
    }

  res.coefficient =
      PwConstCoefficient::constant(p, std::sqrt(bounds.lambda * bounds.Lambda));
  Field2D current = fem_solve(op, res.coefficient, f).u;
  auto global_misfit = [&](const Field2D& u) { return gradient_norm(u - u_meas, RectMesh::full(m)); };
  res.objective = global_misfit(current);
  const double scale = 1.0 + gradient_norm(u_meas, RectMesh::full(m));

  constexpr double kInvPhi = 0.6180339887498949;
  res.converged = res.objective <= 1e-14 * scale;
  while (!res.converged && res.sweeps < opt.max_sweeps) {
    ++res.sweeps;
    for (std::size_t b = 0; b < p.blocks(); ++b) {
      auto block_misfit = [&](double v, Field2D* out) {
        PwConstCoefficient trial = res.coefficient;
        trial.coeffs[b] = v;
        Field2D u = fem_solve(op, trial, f, &current).u;
        const double e = gradient_norm(u - u_meas, blocks[b]);
        if (out) *out = std::move(u);
        return e;
      };
      double lo = bounds.lambda, hi = bounds.Lambda;
      double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
      double f1 = block_misfit(x1, nullptr), f2 = block_misfit(x2, nullptr);
      while (hi - lo > opt.golden_tolerance) {
        if (f1 <= f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - kInvPhi * (hi - lo);
          f1 = block_misfit(x1, nullptr);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + kInvPhi * (hi - lo);
          f2 = block_misfit(x2, nullptr);
        }
      }
      const double best = f1 <= f2 ? x1 : x2;
      Field2D u_best;
      const double e_best = block_misfit(best, &u_best);
      if (e_best <= gradient_norm(current - u_meas, blocks[b])) {
        res.coefficient.coeffs[b] = best;
        current = std::move(u_best);
      }
    }
    const double next = global_misfit(current);
    const double decrease = res.objective - next;
    res.objective = std::min(res.objective, next);
    res.converged = decrease < opt.objective_decrease || res.objective <= 1e-14 * scale;
  }
  if (!res.converged) {
    res.warnings.push_back("coordinate descent stopped after " + std::to_string(opt.max_sweeps) +
                           " sweeps without meeting the objective tolerance");
  }
  return res;
}

}  // namespace coeffid
