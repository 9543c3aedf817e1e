#include "mrdwr/stokes/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mrdwr/fem/quadrature.hpp"
#include "mrdwr/linalg/assembly.hpp"
#include "mrdwr/linalg/sparse_lu.hpp"
#include "mrdwr/slabs/transfer.hpp"

namespace mrdwr::stokes {

using linalg::LocalMatrix;

namespace {

constexpr int nv = 9; // Q2 shapes
constexpr int np = 4; // Q1 shapes

struct LocalFlow {
  LocalMatrix matrix;
  std::vector<double> rhs;
  explicit LocalFlow(int n) : matrix(n, n), rhs(n, 0.0) {}
};

int local_size(bool multiplier) { return 2 * nv + np + (multiplier ? 1 : 0); }

// local block of one cell; `prev` holds the 18 local velocity values of v_prev
void local_flow(const fem::CellValues &fv, const fem::CellValues &fp, double sigma, double mass, double nu,
                const std::function<Vec2(Point, double)> &forcing, double t, const double *prev, bool multiplier,
                LocalFlow &out) {
  out.matrix.zero();
  std::fill(out.rhs.begin(), out.rhs.end(), 0.0);
  auto &a = out.matrix;
  double mm[nv][nv] = {};
  for (std::size_t q = 0; q < fv.n_points(); ++q) {
    const double w = fv.JxW(q);
    Vec2 f{0.0, 0.0};
    if (forcing)
      f = forcing(fv.point(q), t);
    for (int i = 0; i < nv; ++i) {
      const double vi = fv.shape(q, i);
      const Vec2 gi = fv.grad(q, i);
      for (int j = 0; j < nv; ++j) {
        const Vec2 gj = fv.grad(q, j);
        const double m = vi * fv.shape(q, j) * w;
        const double k = sigma * nu * (gi[0] * gj[0] + gi[1] * gj[1]) * w;
        mm[i][j] += m;
        a(i, j) += mass * m + k;
        a(nv + i, nv + j) += mass * m + k;
      }
      out.rhs[i] += sigma * f[0] * vi * w;
      out.rhs[nv + i] += sigma * f[1] * vi * w;
      for (int k = 0; k < np; ++k) {
        const double chi = fp.shape(q, k);
        a(i, 2 * nv + k) -= sigma * chi * gi[0] * w;
        a(nv + i, 2 * nv + k) -= sigma * chi * gi[1] * w;
        a(2 * nv + k, i) += sigma * chi * gi[0] * w;
        a(2 * nv + k, nv + i) += sigma * chi * gi[1] * w;
      }
    }
    if (multiplier)
      for (int k = 0; k < np; ++k) {
        const double c = sigma * fp.shape(q, k) * w;
        a(2 * nv + k, 2 * nv + np) += c;
        a(2 * nv + np, 2 * nv + k) += c;
      }
  }
  if (mass != 0.0)
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < nv; ++j) {
        out.rhs[i] += mass * mm[i][j] * prev[j];
        out.rhs[nv + i] += mass * mm[i][j] * prev[nv + j];
      }
}

std::vector<int> cell_indices(const fem::DofMap &v, const fem::DofMap &p, std::size_t cell, const FlowLayout &l) {
  std::vector<int> idx;
  idx.reserve(local_size(l.multiplier));
  const auto dv = v.cell_dofs(cell);
  for (int d : dv)
    idx.push_back(d);
  for (int d : dv)
    idx.push_back(d + static_cast<int>(l.vy_offset()));
  for (int d : p.cell_dofs(cell))
    idx.push_back(d + static_cast<int>(l.p_offset()));
  if (l.multiplier)
    idx.push_back(static_cast<int>(l.size() - 1));
  return idx;
}

void check_slab(const slabs::Slab &slab) {
  if (slab.kind() != slabs::Subproblem::flow || slab.degree() != 2)
    throw std::invalid_argument("flow step needs a Q2/Q1 flow slab");
}

double l2(const std::vector<double> &v) {
  double s = 0.0;
  for (double x : v)
    s += x * x;
  return std::sqrt(s);
}

} // namespace

void FlowProblem::validate() const {
  if (!(viscosity > 0.0))
    throw std::invalid_argument("viscosity must be positive");
}

FlowLayout flow_layout(const slabs::Slab &slab, const FlowProblem &problem) {
  check_slab(slab);
  return {slab.dofs(2).n_dofs(), slab.dofs(1).n_dofs(), problem.boundary.all_dirichlet()};
}

mesh2d::ConstraintSet apply_flow_bc(const slabs::Slab &slab, const FlowProblem &problem, double t) {
  const auto layout = flow_layout(slab, problem);
  const auto &v = slab.dofs(2);
  mesh2d::ConstraintSet cs;
  cs.merge(v.hanging_constraints(), 0);
  cs.merge(v.hanging_constraints(), static_cast<int>(layout.vy_offset()));
  cs.merge(slab.dofs(1).hanging_constraints(), static_cast<int>(layout.p_offset()));
  for (std::size_t k = 0; k < v.n_dofs(); ++k) {
    const int d = static_cast<int>(k);
    if (!v.on_boundary(d))
      continue;
    const Point x = v.support_point(d);
    if (problem.boundary.outflow && problem.boundary.outflow(x))
      continue;
    const Vec2 g = problem.boundary.velocity ? problem.boundary.velocity(x, t) : Vec2{0.0, 0.0};
    cs.add_dirichlet(d, g[0]);
    cs.add_dirichlet(d + static_cast<int>(layout.vy_offset()), g[1]);
  }
  cs.close();
  return cs;
}

FlowSystem assemble_flow_step(const slabs::Slab &slab, const std::vector<double> &previous,
                              const FlowProblem &problem, FlowStepOptions options) {
  problem.validate();
  check_slab(slab);
  FlowSystem sys;
  sys.layout = flow_layout(slab, problem);
  const auto &vd = slab.dofs(2);
  const auto &pd = slab.dofs(1);
  if (previous.size() != 2 * sys.layout.velocity)
    throw std::invalid_argument("previous velocity does not match the slab mesh");
  const double sigma = slab.time().length();
  const double t = slab.time().midpoint();
  sys.constraints = apply_flow_bc(slab, problem, t);

  linalg::PatternBuilder pb(sys.layout.size());
  std::vector<std::vector<int>> indices(vd.n_cells());
  for (std::size_t c = 0; c < vd.n_cells(); ++c) {
    indices[c] = cell_indices(vd, pd, c, sys.layout);
    pb.add_cell(indices[c], sys.constraints);
  }
  sys.matrix = pb.build();
  sys.rhs.assign(sys.layout.size(), 0.0);

  fem::CellValues fv(fem::gauss_table(2, 3)), fp(fem::gauss_table(1, 3));
  LocalFlow loc(local_size(sys.layout.multiplier));
  std::vector<double> prev(2 * nv);
  for (std::size_t c = 0; c < vd.n_cells(); ++c) {
    fv.reinit(vd.cell_box(c));
    fp.reinit(vd.cell_box(c));
    const auto d = vd.cell_dofs(c);
    for (int i = 0; i < nv; ++i) {
      prev[i] = previous[d[i]];
      prev[nv + i] = previous[d[i] + sys.layout.vy_offset()];
    }
    local_flow(fv, fp, sigma, options.mass_scale, problem.viscosity, problem.forcing, t, prev.data(),
               sys.layout.multiplier, loc);
    linalg::assemble_add(sys.matrix, sys.rhs, loc.matrix, loc.rhs, indices[c], sys.constraints);
  }
  linalg::finalize_constrained(sys.matrix, &sys.rhs, sys.constraints);
  return sys;
}

std::vector<double> solve_flow_system(const FlowSystem &system) {
  auto x = linalg::lu_solve(system.matrix, system.rhs);
  system.constraints.distribute(x);
  return x;
}

double FlowState::max_divergence() const {
  double m = 0.0;
  for (const auto &r : reports)
    m = std::max(m, r.divergence);
  return m;
}

double FlowState::max_orthogonality() const {
  double m = 0.0;
  for (const auto &r : reports)
    m = std::max(m, r.orthogonality);
  return m;
}

std::vector<double> flow_initial_value(const slabs::SlabList &flow, std::size_t n, const FlowProblem &problem) {
  const auto &slab = flow[n];
  const auto &vd = slab.dofs(2);
  std::vector<double> out(2 * vd.n_dofs(), 0.0);
  if (n == 0) {
    if (problem.initial_velocity) {
      const auto vx = fem::interpolate(vd, [&](Point x) { return problem.initial_velocity(x)[0]; });
      const auto vy = fem::interpolate(vd, [&](Point x) { return problem.initial_velocity(x)[1]; });
      std::copy(vx.begin(), vx.end(), out.begin());
      std::copy(vy.begin(), vy.end(), out.begin() + vd.n_dofs());
    }
    return out;
  }
  const auto &left = flow[n - 1];
  if (left.primal.empty())
    throw std::logic_error("previous flow slab has not been solved");
  const auto v = velocity_of(left);
  const auto t = slabs::build_transfer(left.mesh(), left.dofs(2), slab.mesh(), vd);
  const auto vx = t.apply(v.x), vy = t.apply(v.y);
  std::copy(vx.begin(), vx.end(), out.begin());
  std::copy(vy.begin(), vy.end(), out.begin() + vd.n_dofs());
  return out;
}

FlowState solve_flow_forward(slabs::SlabList &flow, const FlowProblem &problem) {
  problem.validate();
  FlowState state;
  for (std::size_t n = 0; n < flow.size(); ++n) {
    const auto previous = flow_initial_value(flow, n, problem);
    const auto sys = assemble_flow_step(flow[n], previous, problem);
    auto x = solve_flow_system(sys);
    FlowSlabReport r;
    r.divergence = weak_divergence_residual(flow[n], x);
    r.orthogonality = flow_orthogonality_residual(flow[n], previous, x, problem);
    flow[n].primal = std::move(x);
    state.reports.push_back(r);
  }
  return state;
}

Velocity velocity_of(const slabs::Slab &slab) {
  const std::size_t n = slab.dofs(2).n_dofs();
  if (slab.primal.size() < 2 * n)
    throw std::logic_error("flow slab has no solution");
  return {std::vector<double>(slab.primal.begin(), slab.primal.begin() + n),
          std::vector<double>(slab.primal.begin() + n, slab.primal.begin() + 2 * n)};
}

std::vector<double> pressure_of(const slabs::Slab &slab) {
  const std::size_t n = slab.dofs(2).n_dofs(), m = slab.dofs(1).n_dofs();
  if (slab.primal.size() < 2 * n + m)
    throw std::logic_error("flow slab has no solution");
  return {slab.primal.begin() + 2 * n, slab.primal.begin() + 2 * n + m};
}

double velocity_l2_norm(const slabs::Slab &slab, const std::vector<double> &solution) {
  const auto &vd = slab.dofs(2);
  fem::CellValues fv(fem::gauss_table(2, 3));
  const std::size_t n = vd.n_dofs();
  double s = 0.0;
  double lx[nv], ly[nv];
  for (std::size_t c = 0; c < vd.n_cells(); ++c) {
    fv.reinit(vd.cell_box(c));
    const auto d = vd.cell_dofs(c);
    for (int i = 0; i < nv; ++i) {
      lx[i] = solution[d[i]];
      ly[i] = solution[d[i] + n];
    }
    for (std::size_t q = 0; q < fv.n_points(); ++q) {
      const double a = fv.value_of(lx, q), b = fv.value_of(ly, q);
      s += (a * a + b * b) * fv.JxW(q);
    }
  }
  return std::sqrt(s);
}

double weak_divergence_residual(const slabs::Slab &slab, const std::vector<double> &solution) {
  const auto &vd = slab.dofs(2);
  const auto &pd = slab.dofs(1);
  const std::size_t n = vd.n_dofs();
  std::vector<double> r(pd.n_dofs(), 0.0);
  fem::CellValues fv(fem::gauss_table(2, 3)), fp(fem::gauss_table(1, 3));
  double lx[nv], ly[nv];
  std::vector<double> loc(np);
  for (std::size_t c = 0; c < vd.n_cells(); ++c) {
    fv.reinit(vd.cell_box(c));
    fp.reinit(vd.cell_box(c));
    const auto d = vd.cell_dofs(c);
    for (int i = 0; i < nv; ++i) {
      lx[i] = solution[d[i]];
      ly[i] = solution[d[i] + n];
    }
    std::fill(loc.begin(), loc.end(), 0.0);
    for (std::size_t q = 0; q < fv.n_points(); ++q) {
      const double div = fv.grad_of(lx, q)[0] + fv.grad_of(ly, q)[1];
      for (int k = 0; k < np; ++k)
        loc[k] += div * fp.shape(q, k) * fv.JxW(q);
    }
    linalg::assemble_add(r, loc, pd.cell_dofs(c), pd.hanging_constraints());
  }
  double m = 0.0;
  for (double x : r)
    m = std::max(m, std::abs(x));
  const double norm = velocity_l2_norm(slab, solution);
  return norm > 0.0 ? m / norm : m;
}

double flow_orthogonality_residual(const slabs::Slab &slab, const std::vector<double> &previous,
                                   const std::vector<double> &solution, const FlowProblem &problem,
                                   FlowStepOptions options) {
  const auto layout = flow_layout(slab, problem);
  const auto &vd = slab.dofs(2);
  const auto &pd = slab.dofs(1);
  const auto cs = apply_flow_bc(slab, problem, slab.time().midpoint());
  std::vector<double> r(layout.size(), 0.0), s(layout.size(), 0.0);
  fem::CellValues fv(fem::gauss_table(2, 3)), fp(fem::gauss_table(1, 3));
  const int nl = local_size(layout.multiplier);
  LocalFlow loc(nl);
  std::vector<double> prev(2 * nv), lr(nl), ls(nl);
  for (std::size_t c = 0; c < vd.n_cells(); ++c) {
    fv.reinit(vd.cell_box(c));
    fp.reinit(vd.cell_box(c));
    const auto d = vd.cell_dofs(c);
    for (int i = 0; i < nv; ++i) {
      prev[i] = previous[d[i]];
      prev[nv + i] = previous[d[i] + layout.vy_offset()];
    }
    local_flow(fv, fp, slab.time().length(), options.mass_scale, problem.viscosity, problem.forcing,
               slab.time().midpoint(), prev.data(), layout.multiplier, loc);
    const auto idx = cell_indices(vd, pd, c, layout);
    for (int i = 0; i < nl; ++i) {
      double ri = -loc.rhs[i], si = std::abs(loc.rhs[i]);
      for (int j = 0; j < nl; ++j) {
        ri += loc.matrix(i, j) * solution[idx[j]];
        si += std::abs(loc.matrix(i, j) * solution[idx[j]]);
      }
      lr[i] = ri;
      ls[i] = si;
    }
    linalg::assemble_add(r, lr, idx, cs);
    linalg::assemble_add(s, ls, idx, cs);
  }
  for (const auto &[dof, line] : cs.lines())
    r[dof] = s[dof] = 0.0;
  const double sn = l2(s);
  return sn > 0.0 ? l2(r) / sn : l2(r);
}

double flow_l2l2_error(const slabs::SlabList &flow, const std::function<Vec2(Point, double)> &exact,
                       int time_points) {
  const auto gt = fem::gauss_points(time_points);
  double total = 0.0;
  double lx[nv], ly[nv];
  for (const auto &slab : flow) {
    const auto &vd = slab.dofs(2);
    const auto v = velocity_of(slab);
    fem::CellValues fv(fem::gauss_table(2, 5));
    for (std::size_t c = 0; c < vd.n_cells(); ++c) {
      fv.reinit(vd.cell_box(c));
      fem::gather(vd, c, v.x, lx);
      fem::gather(vd, c, v.y, ly);
      for (std::size_t q = 0; q < fv.n_points(); ++q) {
        const double ax = fv.value_of(lx, q), ay = fv.value_of(ly, q);
        const Point x = fv.point(q);
        for (std::size_t k = 0; k < gt.size(); ++k) {
          const double t = slab.time().left + gt.points[k] * slab.time().length();
          const Vec2 e = exact(x, t);
          total += gt.weights[k] * slab.time().length() * fv.JxW(q) *
                   ((e[0] - ax) * (e[0] - ax) + (e[1] - ay) * (e[1] - ay));
        }
      }
    }
  }
  return std::sqrt(total);
}

} // namespace mrdwr::stokes
