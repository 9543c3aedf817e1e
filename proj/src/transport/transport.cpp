#include "mrdwr/transport/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mrdwr/fem/quadrature.hpp"
#include "mrdwr/linalg/assembly.hpp"
#include "mrdwr/linalg/sparse_lu.hpp"
#include "mrdwr/slabs/transfer.hpp"

namespace mrdwr::transport {

using linalg::LocalMatrix;

namespace {

constexpr int nvel = 9; // Q2 velocity shapes

struct LocalTransport {
  LocalMatrix matrix, coupling;
  std::vector<double> rhs;
  explicit LocalTransport(int n) : matrix(n, n), coupling(n, n), rhs(n, 0.0) {}
};

// quadrature that integrates the convective SUPG products exactly on squares
int n_quad(int degree) { return degree + 2; }

double diameter(const mesh2d::Box &b) { return std::sqrt(2.0) * b.h; }

// local step matrix, coupling C = M + delta (phi_j, v.grad phi_i) and the
// source part of the rhs
void local_transport(const fem::CellValues &fu, const fem::CellValues &fv, double tau, const TransportCoefficients &k,
                     const double *vx, const double *vy, const std::function<double(Point, double)> &source,
                     double t, LocalTransport &out) {
  const int n = fu.n_shapes();
  out.matrix.zero();
  out.coupling.zero();
  std::fill(out.rhs.begin(), out.rhs.end(), 0.0);
  const double delta = k.delta(diameter(fu.box()));
  std::vector<double> conv(n);
  for (std::size_t q = 0; q < fu.n_points(); ++q) {
    const double w = fu.JxW(q);
    const Vec2 b{fv.value_of(vx, q), fv.value_of(vy, q)};
    const double g = source ? source(fu.point(q), t) : 0.0;
    for (int i = 0; i < n; ++i) {
      const Vec2 gi = fu.grad(q, i);
      conv[i] = b[0] * gi[0] + b[1] * gi[1];
    }
    for (int i = 0; i < n; ++i) {
      const double pi = fu.shape(q, i);
      const Vec2 gi = fu.grad(q, i);
      for (int j = 0; j < n; ++j) {
        const double pj = fu.shape(q, j);
        const Vec2 gj = fu.grad(q, j);
        const double m = pi * pj;
        const double galerkin =
            m + tau * (k.diffusion * (gi[0] * gj[0] + gi[1] * gj[1]) + conv[j] * pi + k.reaction * m);
        const double strong = pj + tau * (-k.diffusion * fu.laplacian(q, j) + conv[j] + k.reaction * pj);
        out.matrix(i, j) += (galerkin + delta * strong * conv[i]) * w;
        out.coupling(i, j) += (m + delta * pj * conv[i]) * w;
      }
      out.rhs[i] += tau * g * (pi + delta * conv[i]) * w;
    }
  }
}

mesh2d::ConstraintSet transport_constraints(const slabs::Slab &slab, int degree, const TransportProblem &problem,
                                            bool homogeneous) {
  const auto &d = slab.dofs(degree);
  mesh2d::ConstraintSet cs = d.hanging_constraints();
  const double t = slab.time().midpoint();
  for (std::size_t k = 0; k < d.n_dofs(); ++k) {
    const int dof = static_cast<int>(k);
    if (!d.on_boundary(dof))
      continue;
    const double g = (!homogeneous && problem.dirichlet) ? problem.dirichlet(d.support_point(dof), t) : 0.0;
    cs.add_dirichlet(dof, g);
  }
  cs.close();
  return cs;
}

void check_velocity(const slabs::Slab &slab, const Velocity &v) {
  const std::size_t n = slab.dofs(VelocityField::degree).n_dofs();
  if (v.x.size() != n || v.y.size() != n)
    throw std::invalid_argument("velocity does not live on the transport mesh");
}

double l2(const std::vector<double> &v) {
  double s = 0.0;
  for (double x : v)
    s += x * x;
  return std::sqrt(s);
}

// cell loop shared by the step assembly and the residual check
template <class Body>
void for_each_cell(const slabs::Slab &slab, int degree, const Velocity &velocity, const TransportProblem &problem,
                   Body body) {
  const auto &d = slab.dofs(degree);
  const auto &dv = slab.dofs(VelocityField::degree);
  fem::CellValues fu(fem::gauss_table(degree, n_quad(degree)));
  fem::CellValues fv(fem::gauss_table(VelocityField::degree, n_quad(degree)));
  LocalTransport loc(d.dofs_per_cell());
  double vx[nvel], vy[nvel];
  const double tau = slab.time().length(), t = slab.time().midpoint();
  for (std::size_t c = 0; c < d.n_cells(); ++c) {
    fu.reinit(d.cell_box(c));
    fv.reinit(d.cell_box(c));
    fem::gather(dv, c, velocity.x, vx);
    fem::gather(dv, c, velocity.y, vy);
    local_transport(fu, fv, tau, problem.coefficients, vx, vy, problem.source, t, loc);
    body(c, loc);
  }
}

std::vector<double> local_previous(const fem::DofMap &d, std::size_t c, const std::vector<double> &previous) {
  std::vector<double> out(d.dofs_per_cell());
  fem::gather(d, c, previous, out.data());
  return out;
}

} // namespace

void TransportCoefficients::validate() const {
  if (!(diffusion > 0.0))
    throw std::invalid_argument("diffusion must be positive");
  if (reaction < 0.0)
    throw std::invalid_argument("reaction must be nonnegative");
  if (delta0 < 0.0)
    throw std::invalid_argument("SUPG scale must be nonnegative");
}

void Goal::validate() const {
  if (kind == GoalKind::final_l2_error && !exact)
    throw std::invalid_argument("final-time goal needs the exact solution");
}

VelocityField VelocityField::from_flow(const slabs::SlabList &flow, std::function<Vec2(Point)> initial) {
  VelocityField f;
  f.flow_ = &flow;
  f.initial_ = std::move(initial);
  return f;
}

VelocityField VelocityField::analytic(std::function<Vec2(Point, double)> field) {
  VelocityField f;
  f.field_ = std::move(field);
  return f;
}

VelocityField VelocityField::zero() { return {}; }

Velocity VelocityField::on(const slabs::Slab &slab) const {
  const auto &d = slab.dofs(degree);
  if (flow_) {
    // flow endpoints are transport endpoints, so the midpoint picks the
    // one flow slab covering this transport slab
    const auto &fs = (*flow_)[flow_->find(slab.time().midpoint())];
    const auto v = stokes::velocity_of(fs);
    const auto t = slabs::build_transfer(fs.mesh(), fs.dofs(2), slab.mesh(), d);
    return {t.apply(v.x), t.apply(v.y)};
  }
  if (field_) {
    const double t = slab.time().midpoint();
    return {fem::interpolate(d, [&](Point x) { return field_(x, t)[0]; }),
            fem::interpolate(d, [&](Point x) { return field_(x, t)[1]; })};
  }
  return {std::vector<double>(d.n_dofs(), 0.0), std::vector<double>(d.n_dofs(), 0.0)};
}

Velocity VelocityField::temporal_difference(const slabs::Slab &slab) const {
  const auto &d = slab.dofs(degree);
  Velocity out{std::vector<double>(d.n_dofs(), 0.0), std::vector<double>(d.n_dofs(), 0.0)};
  if (!flow_)
    return out;
  const std::size_t m = flow_->find(slab.time().midpoint());
  const auto &fs = (*flow_)[m];
  const double s = (slab.time().midpoint() - fs.time().left) / fs.time().length();
  const auto own = on(slab);
  Velocity left;
  if (m == 0) {
    if (initial_) {
      left.x = fem::interpolate(d, [&](Point x) { return initial_(x)[0]; });
      left.y = fem::interpolate(d, [&](Point x) { return initial_(x)[1]; });
    } else {
      left = {out.x, out.y};
    }
  } else {
    const auto &prev = (*flow_)[m - 1];
    const auto v = stokes::velocity_of(prev);
    const auto t = slabs::build_transfer(prev.mesh(), prev.dofs(2), slab.mesh(), d);
    left = {t.apply(v.x), t.apply(v.y)};
  }
  for (std::size_t k = 0; k < d.n_dofs(); ++k) {
    out.x[k] = (1.0 - s) * (left.x[k] - own.x[k]);
    out.y[k] = (1.0 - s) * (left.y[k] - own.y[k]);
  }
  return out;
}

std::vector<Velocity> transport_velocities(const slabs::SlabList &transport, const VelocityField &field) {
  std::vector<Velocity> out;
  out.reserve(transport.size());
  for (const auto &s : transport)
    out.push_back(field.on(s));
  return out;
}

TransportSystem assemble_primal_step(const slabs::Slab &slab, int degree, const std::vector<double> &previous,
                                     const Velocity &velocity, const TransportProblem &problem, bool homogeneous) {
  problem.coefficients.validate();
  check_velocity(slab, velocity);
  const auto &d = slab.dofs(degree);
  if (previous.size() != d.n_dofs())
    throw std::invalid_argument("previous value does not match the slab space");
  TransportSystem sys;
  sys.constraints = transport_constraints(slab, degree, problem, homogeneous);
  linalg::PatternBuilder pb(d.n_dofs());
  for (std::size_t c = 0; c < d.n_cells(); ++c)
    pb.add_cell(d.cell_dofs(c), sys.constraints);
  sys.matrix = pb.build();
  sys.rhs.assign(d.n_dofs(), 0.0);
  const int n = d.dofs_per_cell();
  std::vector<double> rhs(n);
  for_each_cell(slab, degree, velocity, problem, [&](std::size_t c, const LocalTransport &loc) {
    const auto prev = local_previous(d, c, previous);
    for (int i = 0; i < n; ++i) {
      double r = loc.rhs[i];
      for (int j = 0; j < n; ++j)
        r += loc.coupling(i, j) * prev[j];
      rhs[i] = r;
    }
    linalg::assemble_add(sys.matrix, sys.rhs, loc.matrix, rhs, d.cell_dofs(c), sys.constraints);
  });
  linalg::finalize_constrained(sys.matrix, &sys.rhs, sys.constraints);
  return sys;
}

std::vector<double> coupling_transpose_apply(const slabs::Slab &slab, int degree, const Velocity &velocity,
                                             const TransportCoefficients &coefficients,
                                             const std::vector<double> &z) {
  check_velocity(slab, velocity);
  const auto &d = slab.dofs(degree);
  if (z.size() != d.n_dofs())
    throw std::invalid_argument("vector does not match the slab space");
  TransportProblem p;
  p.coefficients = coefficients;
  std::vector<double> out(d.n_dofs(), 0.0);
  const int n = d.dofs_per_cell();
  for_each_cell(slab, degree, velocity, p, [&](std::size_t c, const LocalTransport &loc) {
    const auto zl = local_previous(d, c, z);
    const auto dofs = d.cell_dofs(c);
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        s += loc.coupling(i, j) * zl[i];
      out[dofs[j]] += s;
    }
  });
  return out;
}

double transport_orthogonality_residual(const slabs::Slab &slab, int degree, const std::vector<double> &previous,
                                        const std::vector<double> &solution, const Velocity &velocity,
                                        const TransportProblem &problem, bool homogeneous) {
  const auto &d = slab.dofs(degree);
  const auto cs = transport_constraints(slab, degree, problem, homogeneous);
  std::vector<double> r(d.n_dofs(), 0.0), s(d.n_dofs(), 0.0);
  const int n = d.dofs_per_cell();
  std::vector<double> lr(n), ls(n);
  for_each_cell(slab, degree, velocity, problem, [&](std::size_t c, const LocalTransport &loc) {
    const auto prev = local_previous(d, c, previous);
    const auto u = local_previous(d, c, solution);
    for (int i = 0; i < n; ++i) {
      double ri = -loc.rhs[i], si = std::abs(loc.rhs[i]);
      for (int j = 0; j < n; ++j) {
        ri += loc.matrix(i, j) * u[j] - loc.coupling(i, j) * prev[j];
        si += std::abs(loc.matrix(i, j) * u[j]) + std::abs(loc.coupling(i, j) * prev[j]);
      }
      lr[i] = ri;
      ls[i] = si;
    }
    linalg::assemble_add(r, lr, d.cell_dofs(c), cs);
    linalg::assemble_add(s, ls, d.cell_dofs(c), cs);
  });
  for (const auto &[dof, line] : cs.lines())
    r[dof] = s[dof] = 0.0;
  const double sn = l2(s);
  return sn > 0.0 ? l2(r) / sn : l2(r);
}

double TransportState::max_orthogonality() const {
  double m = 0.0;
  for (double x : orthogonality)
    m = std::max(m, x);
  return m;
}

std::vector<double> primal_initial_value(const slabs::SlabList &transport, std::size_t n,
                                         const TransportProblem &problem) {
  const int p = problem.primal_degree;
  const auto &slab = transport[n];
  if (n == 0) {
    if (!problem.initial)
      return std::vector<double>(slab.dofs(p).n_dofs(), 0.0);
    return fem::interpolate(slab.dofs(p), problem.initial);
  }
  const auto &left = transport[n - 1];
  if (left.primal.empty())
    throw std::logic_error("previous transport slab has not been solved");
  return slabs::build_transfer(left.mesh(), left.dofs(p), slab.mesh(), slab.dofs(p)).apply(left.primal);
}

TransportState solve_primal_forward(slabs::SlabList &transport, const VelocityField &field,
                                    const TransportProblem &problem) {
  problem.coefficients.validate();
  TransportState state;
  state.velocities = transport_velocities(transport, field);
  const int p = problem.primal_degree;
  for (std::size_t n = 0; n < transport.size(); ++n) {
    const auto previous = primal_initial_value(transport, n, problem);
    const auto sys = assemble_primal_step(transport[n], p, previous, state.velocities[n], problem);
    auto u = linalg::lu_solve(sys.matrix, sys.rhs);
    sys.constraints.distribute(u);
    state.orthogonality.push_back(
        transport_orthogonality_residual(transport[n], p, previous, u, state.velocities[n], problem));
    transport[n].primal = std::move(u);
  }
  return state;
}

std::vector<double> goal_rhs(const slabs::SlabList &transport, std::size_t n, const TransportProblem &problem,
                             const Goal &goal) {
  goal.validate();
  const int q = problem.dual_degree;
  const auto &slab = transport[n];
  const auto &d = slab.dofs(q);
  std::vector<double> out(d.n_dofs(), 0.0);
  const int ns = d.dofs_per_cell();
  fem::CellValues fz(fem::gauss_table(q, q + 2));
  if (goal.kind == GoalKind::space_time_mean) {
    const double scale = slab.time().length() / (transport.end_time() * slab.mesh().area());
    for (std::size_t c = 0; c < d.n_cells(); ++c) {
      fz.reinit(d.cell_box(c));
      const auto dofs = d.cell_dofs(c);
      for (std::size_t k = 0; k < fz.n_points(); ++k)
        for (int i = 0; i < ns; ++i)
          out[dofs[i]] += scale * fz.shape(k, i) * fz.JxW(k);
    }
    return out;
  }
  if (n + 1 != transport.size())
    return out;
  // derivative of ||u(T) - u_N|| in the direction of the normalized error
  const double norm = final_l2_error(transport, problem, goal.exact);
  if (norm == 0.0)
    return out;
  const int p = problem.primal_degree;
  const auto &dp = slab.dofs(p);
  fem::CellValues fu(fem::gauss_table(p, q + 3));
  fem::CellValues fq(fem::gauss_table(q, q + 3));
  std::vector<double> ul(dp.dofs_per_cell());
  const double t = transport.end_time();
  for (std::size_t c = 0; c < d.n_cells(); ++c) {
    fu.reinit(d.cell_box(c));
    fq.reinit(d.cell_box(c));
    fem::gather(dp, c, slab.primal, ul.data());
    const auto dofs = d.cell_dofs(c);
    for (std::size_t k = 0; k < fq.n_points(); ++k) {
      const double e = (goal.exact(fq.point(k), t) - fu.value_of(ul.data(), k)) / norm;
      for (int i = 0; i < ns; ++i)
        out[dofs[i]] += e * fq.shape(k, i) * fq.JxW(k);
    }
  }
  return out;
}

void solve_dual_backward(slabs::SlabList &transport, TransportState &state, const TransportProblem &problem,
                         const Goal &goal) {
  problem.coefficients.validate();
  if (state.velocities.size() != transport.size())
    throw std::logic_error("dual sweep needs the primal velocities");
  const int q = problem.dual_degree;
  state.dual_orthogonality.assign(transport.size(), 0.0);
  for (std::size_t m = transport.size(); m-- > 0;) {
    auto &slab = transport[m];
    auto rhs = goal_rhs(transport, m, problem, goal);
    if (m + 1 < transport.size()) {
      const auto &next = transport[m + 1];
      const auto w = coupling_transpose_apply(next, q, state.velocities[m + 1], problem.coefficients, next.dual);
      const auto back = slabs::build_transfer(slab.mesh(), slab.dofs(q), next.mesh(), next.dofs(q))
                            .apply_transpose(w);
      for (std::size_t k = 0; k < rhs.size(); ++k)
        rhs[k] += back[k];
    }
    const std::vector<double> none(slab.dofs(q).n_dofs(), 0.0);
    TransportProblem hom = problem;
    hom.source = nullptr;
    const auto sys = assemble_primal_step(slab, q, none, state.velocities[m], hom, true);
    sys.constraints.condense(rhs);
    const auto at = sys.matrix.transpose();
    auto z = linalg::lu_solve(at, rhs);
    state.dual_orthogonality[m] = linalg::relative_residual(at, z, rhs);
    sys.constraints.distribute_homogeneous(z);
    slab.dual = std::move(z);
  }
}

double space_time_mean(const slabs::SlabList &transport, const TransportProblem &problem) {
  double s = 0.0;
  for (const auto &slab : transport) {
    if (slab.primal.empty())
      throw std::logic_error("transport slab has no solution");
    s += slab.time().length() * fem::integrate(slab.dofs(problem.primal_degree), slab.primal) / slab.mesh().area();
  }
  return s / transport.end_time();
}

double final_l2_error(const slabs::SlabList &transport, const TransportProblem &problem,
                      const std::function<double(Point, double)> &exact) {
  const auto &slab = transport[transport.size() - 1];
  if (slab.primal.empty())
    throw std::logic_error("transport slab has no solution");
  const double t = transport.end_time();
  return fem::l2_error(slab.dofs(problem.primal_degree), slab.primal, [&](Point x) { return exact(x, t); });
}

double eval_goal(const slabs::SlabList &transport, const TransportProblem &problem, const Goal &goal) {
  goal.validate();
  if (goal.kind == GoalKind::space_time_mean)
    return space_time_mean(transport, problem);
  return final_l2_error(transport, problem, goal.exact);
}

double min_value(const slabs::SlabList &transport) {
  double m = INFINITY;
  for (const auto &slab : transport)
    for (double v : slab.primal)
      m = std::min(m, v);
  return m;
}

} // namespace mrdwr::transport
