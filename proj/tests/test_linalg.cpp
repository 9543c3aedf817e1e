#include <cmath>
#include <random>

#include "doctest.h"
#include "mrdwr/fem/dof_map.hpp"
#include "mrdwr/fem/fe_tools.hpp"
#include "mrdwr/linalg/assembly.hpp"
#include "mrdwr/linalg/sparse_lu.hpp"
#include "mrdwr/linalg/sparse_matrix.hpp"

using namespace mrdwr;
using doctest::Approx;
using linalg::LocalMatrix;
using linalg::PatternBuilder;
using linalg::SparseMatrix;
using mesh2d::ConstraintSet;

namespace {

SparseMatrix dense_pattern(std::size_t n) {
  PatternBuilder pb(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      pb.add(static_cast<int>(i), static_cast<int>(j));
  return pb.build();
}

// mass and stiffness of Q_p on a mesh, optionally with constraints
SparseMatrix assemble_mass_stiffness(const fem::DofMap &d, const ConstraintSet &cs, double ks) {
  PatternBuilder pb(d.n_dofs());
  for (std::size_t c = 0; c < d.n_cells(); ++c)
    pb.add_cell(d.cell_dofs(c), cs);
  auto a = pb.build();
  fem::CellValues cv(fem::gauss_table(d.degree(), d.degree() + 1));
  const int n = d.dofs_per_cell();
  LocalMatrix loc(n, n);
  for (std::size_t c = 0; c < d.n_cells(); ++c) {
    cv.reinit(d.cell_box(c));
    loc.zero();
    for (std::size_t q = 0; q < cv.n_points(); ++q)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const auto gi = cv.grad(q, i), gj = cv.grad(q, j);
          loc(i, j) += (cv.shape(q, i) * cv.shape(q, j) + ks * (gi[0] * gj[0] + gi[1] * gj[1])) * cv.JxW(q);
        }
    linalg::assemble_add(a, loc, d.cell_dofs(c), cs);
  }
  return a;
}

} // namespace

TEST_CASE("CSR construction rejects unsorted columns") {
  CHECK_THROWS(SparseMatrix(2, {0, 2, 3}, {1, 0, 1}));
  CHECK_NOTHROW(SparseMatrix(2, {0, 2, 3}, {0, 1, 1}));
}

TEST_CASE("pattern misses are structural errors") {
  SparseMatrix a(2, {0, 1, 2}, {0, 1});
  CHECK_THROWS_AS(a.add(0, 1, 1.0), linalg::StructuralError);
}

TEST_CASE("plain scatter-add without constraints") {
  auto a = dense_pattern(3);
  LocalMatrix loc(2, 2);
  loc(0, 0) = 1;
  loc(0, 1) = 2;
  loc(1, 0) = 3;
  loc(1, 1) = 4;
  const int dofs[2] = {2, 0};
  linalg::assemble_add(a, loc, dofs, ConstraintSet{});
  CHECK(a(2, 2) == 1);
  CHECK(a(2, 0) == 2);
  CHECK(a(0, 2) == 3);
  CHECK(a(0, 0) == 4);
  CHECK(a(1, 1) == 0);
}

TEST_CASE("zero local block leaves the matrix unchanged") {
  auto a = dense_pattern(4);
  a.add(1, 2, 5.0);
  const auto before = a.values();
  LocalMatrix loc(4, 4);
  const int dofs[4] = {0, 1, 2, 3};
  linalg::assemble_add(a, loc, dofs, ConstraintSet{});
  CHECK(a.values() == before);
}

TEST_CASE("one Q1 hanging node spreads the block with weights 0.5") {
  // local dofs 0..3 with dof 3 hanging on masters 3 and 4
  ConstraintSet cs;
  cs.add_entry(3, 4, 0.5);
  cs.add_entry(3, 5, 0.5);
  auto a = dense_pattern(6);
  LocalMatrix loc(4, 4);
  std::mt19937 rng(2);
  for (auto &v : loc.a)
    v = static_cast<double>(rng() % 9) - 4.0;
  const int dofs[4] = {0, 1, 2, 3};
  linalg::assemble_add(a, loc, dofs, cs);
  // hand expansion: C^T K C with C mapping local 3 -> 0.5 (g4 + g5)
  auto expand = [](int l) -> std::vector<std::pair<int, double>> {
    if (l == 3)
      return {{4, 0.5}, {5, 0.5}};
    return {{l, 1.0}};
  };
  std::vector<double> oracle(36, 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (auto [r, wr] : expand(i))
        for (auto [c, wc] : expand(j))
          oracle[r * 6 + c] += wr * wc * loc(i, j);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c)
      CHECK(a(r, c) == Approx(oracle[r * 6 + c]));
  CHECK(a(3, 3) == 0.0);
  const double ph = linalg::finalize_constrained(a, nullptr, cs);
  CHECK(ph > 0);
  CHECK(a(3, 3) == ph);
}

TEST_CASE("LU on small systems") {
  SparseMatrix id(3, {0, 1, 2, 3}, {0, 1, 2});
  for (int k = 0; k < 3; ++k)
    id.set(k, k, 1.0);
  const std::vector<double> b{1, -2, 3};
  CHECK(linalg::lu_solve(id, b) == b);

  auto a = dense_pattern(2);
  a.set(0, 0, 2);
  a.set(0, 1, 1);
  a.set(1, 0, 1);
  a.set(1, 1, 3);
  const auto x = linalg::lu_solve(a, {3, 4});
  CHECK(x[0] == Approx(1.0));
  CHECK(x[1] == Approx(1.0));
}

TEST_CASE("singular pivot names a row") {
  auto a = dense_pattern(3);
  a.set(0, 0, 1);
  a.set(2, 2, 1);
  try {
    linalg::lu_solve(a, {1, 1, 1});
    FAIL("expected a solver error");
  } catch (const linalg::SolverError &e) {
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }
}

TEST_CASE("assembled mass and stiffness are symmetric") {
  auto m = mesh2d::SpatialMesh::unit_square();
  m.refine_global(2);
  m.refine({mesh2d::CellId{2, 1, 2}, mesh2d::CellId{2, 2, 2}});
  for (int p = 1; p <= 2; ++p) {
    fem::DofMap d(m, p);
    const auto a = assemble_mass_stiffness(d, d.hanging_constraints(), 0.7);
    CHECK(a.max_abs_asymmetry() <= 1e-13 * a.frobenius_norm());
  }
}

TEST_CASE("constrained solve reproduces a polynomial projection") {
  // L2 projection of a Q_p polynomial onto the constrained space is exact
  auto m = mesh2d::SpatialMesh::unit_square();
  m.refine_global(2);
  m.refine({mesh2d::CellId{2, 0, 0}, mesh2d::CellId{2, 3, 1}});
  for (int p = 1; p <= 2; ++p) {
    fem::DofMap d(m, p);
    const auto &cs = d.hanging_constraints();
    auto a = assemble_mass_stiffness(d, cs, 0.0);
    auto f = [p](mesh2d::Point x) { return p == 1 ? 1 + 2 * x.x - x.y : x.x * x.x - 3 * x.x * x.y + x.y * x.y; };
    std::vector<double> rhs(d.n_dofs(), 0.0);
    fem::CellValues cv(fem::gauss_table(p, p + 2));
    for (std::size_t c = 0; c < d.n_cells(); ++c) {
      cv.reinit(d.cell_box(c));
      std::vector<double> loc(d.dofs_per_cell(), 0.0);
      for (std::size_t q = 0; q < cv.n_points(); ++q)
        for (int i = 0; i < d.dofs_per_cell(); ++i)
          loc[i] += f(cv.point(q)) * cv.shape(q, i) * cv.JxW(q);
      linalg::assemble_add(rhs, loc, d.cell_dofs(c), cs);
    }
    linalg::finalize_constrained(a, &rhs, cs);
    auto x = linalg::lu_solve(a, rhs);
    CHECK(linalg::relative_residual(a, x, rhs) <= 1e-10);
    cs.distribute(x);
    CHECK(fem::l2_error(d, x, f) < 1e-12);
  }
}

TEST_CASE("Dirichlet lines carry their value through the solve") {
  auto m = mesh2d::SpatialMesh::unit_square();
  m.refine_global(2);
  fem::DofMap d(m, 1);
  ConstraintSet cs = d.hanging_constraints();
  for (std::size_t k = 0; k < d.n_dofs(); ++k)
    if (d.on_boundary(static_cast<int>(k)))
      cs.add_dirichlet(static_cast<int>(k), 1.0);
  cs.close();
  auto a = assemble_mass_stiffness(d, cs, 1.0);
  std::vector<double> rhs(d.n_dofs(), 0.0);
  // assemble again with the rhs overload so inhomogeneities are lifted
  a.values().assign(a.values().size(), 0.0);
  fem::CellValues cv(fem::gauss_table(1, 2));
  LocalMatrix loc(4, 4);
  for (std::size_t c = 0; c < d.n_cells(); ++c) {
    cv.reinit(d.cell_box(c));
    loc.zero();
    for (std::size_t q = 0; q < cv.n_points(); ++q)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          const auto gi = cv.grad(q, i), gj = cv.grad(q, j);
          loc(i, j) += (gi[0] * gj[0] + gi[1] * gj[1]) * cv.JxW(q);
        }
    linalg::assemble_add(a, rhs, loc, std::vector<double>(4, 0.0), d.cell_dofs(c), cs);
  }
  linalg::finalize_constrained(a, &rhs, cs);
  auto x = linalg::lu_solve(a, rhs);
  cs.distribute(x);
  // harmonic with constant boundary data is the constant
  for (double v : x)
    CHECK(v == Approx(1.0).epsilon(1e-12));
}
