#include "mrdwr/estimation/indicators.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "mrdwr/estimation/kelly.hpp"
#include "mrdwr/estimation/weights.hpp"
#include "mrdwr/fem/fe_tools.hpp"
#include "mrdwr/fem/quadrature.hpp"
#include "mrdwr/slabs/transfer.hpp"

namespace mrdwr::estimation {

using fem::Vec2;
using mesh2d::Point;

namespace {

constexpr int n_points = 5; // per direction; exact up to degree 9

double dot(const Vec2 &a, const Vec2 &b) { return a[0] * b[0] + a[1] * b[1]; }

// point values of every field one cell needs
struct PointData {
  double un, um, zn, zp, zx, rz;
  Vec2 gun, gum, gzn, gzp, gzx, grz;
  double lap_un;
  Vec2 v, dv, iv;
};

struct FieldTables {
  fem::CellValues q1, q2, q4;
  FieldTables()
      : q1(fem::gauss_table(1, n_points)), q2(fem::gauss_table(2, n_points)), q4(fem::gauss_table(4, n_points)) {}
  void reinit(const mesh2d::Box &b) {
    q1.reinit(b);
    q2.reinit(b);
    q4.reinit(b);
  }
};

std::vector<double> local(const fem::DofMap &d, std::size_t c, const std::vector<double> &u) {
  std::vector<double> out(d.dofs_per_cell());
  fem::gather(d, c, u, out.data());
  return out;
}

// integral of (u_src - u_tgt) z over target cell c, on the common
// refinement of the two meshes; the nodal transfer loses exactly this
double transfer_defect(const slabs::Slab &source, const std::vector<double> &u_src, const slabs::Slab &target,
                       const std::vector<double> &u_tgt, const std::vector<double> &z, std::size_t c) {
  const auto &sm = source.mesh();
  const auto &ds = source.dofs(1);
  const auto &d1 = target.dofs(1);
  const auto &d2 = target.dofs(2);
  const auto kbox = d1.cell_box(c);
  const auto id = target.mesh().cell(c);
  // the source is bilinear on c and agrees at the corners: nothing lost
  if (const auto cov = sm.covering_active(id)) {
    const std::size_t sc = *sm.active_index(*cov);
    const auto sbox = sm.box(*cov);
    bool same = true;
    for (int k = 0; k < 4 && same; ++k) {
      const Point ref{double(k & 1), double(k >> 1)};
      const double a = fem::evaluate(ds, sc, u_src, sbox.to_ref(kbox.to_real(ref)));
      const double b = fem::evaluate(d1, c, u_tgt, ref);
      same = std::abs(a - b) <= 1e-13 * (1.0 + std::abs(a));
    }
    if (same)
      return 0.0;
  }
  const auto rule = fem::gauss_points(n_points);
  double sum = 0.0;
  std::vector<mesh2d::CellId> stack{id};
  while (!stack.empty()) {
    const auto piece = stack.back();
    stack.pop_back();
    const auto cov = sm.covering_active(piece);
    if (!cov) {
      for (int k = 0; k < 4; ++k)
        stack.push_back(piece.child(k));
      continue;
    }
    const std::size_t sc = *sm.active_index(*cov);
    const auto sbox = sm.box(*cov);
    const auto pbox = target.mesh().box(piece);
    for (std::size_t i = 0; i < rule.size(); ++i)
      for (std::size_t j = 0; j < rule.size(); ++j) {
        const Point x = pbox.to_real({rule.points[i], rule.points[j]});
        const Point ref = kbox.to_ref(x);
        const double diff = fem::evaluate(ds, sc, u_src, sbox.to_ref(x)) - fem::evaluate(d1, c, u_tgt, ref);
        sum += rule.weights[i] * rule.weights[j] * pbox.h * pbox.h * diff * fem::evaluate(d2, c, z, ref);
      }
  }
  return sum;
}

} // namespace

ErrorIndicators compute_transport_indicators(const slabs::SlabList &transport,
                                             const transport::VelocityField &field,
                                             const transport::TransportProblem &problem,
                                             const transport::Goal &goal) {
  goal.validate();
  problem.coefficients.validate();
  if (problem.primal_degree != 1 || problem.dual_degree != 2)
    throw std::invalid_argument("indicators expect a Q1 primal and a Q2 dual");
  for (const auto &s : transport)
    if (s.primal.empty() || s.dual.empty())
      throw std::logic_error("indicators need primal and dual solutions on every slab");

  const auto &k = problem.coefficients;
  const double end = transport.end_time();
  const std::size_t N = transport.size();
  const bool mean_goal = goal.kind == transport::GoalKind::space_time_mean;
  const auto time_rule = fem::gauss_points(5);

  ErrorIndicators out;
  out.subproblem = slabs::Subproblem::transport;
  out.temporal.assign(N, 0.0);
  out.temporal_cells.resize(N);
  out.spatial.resize(N);

  FieldTables fe;
  for (std::size_t n = 0; n < N; ++n) {
    const auto &slab = transport[n];
    const auto &d1 = slab.dofs(1);
    const auto &d2 = slab.dofs(2);
    const double tau = slab.time().length();
    const double t0 = slab.time().left, tm = slab.time().midpoint();
    const double mean_scale = mean_goal ? 1.0 / (end * slab.mesh().area()) : 0.0;
    const bool last = n + 1 == N;

    const auto &un = slab.primal;
    const auto um = transport::primal_initial_value(transport, n, problem);
    const auto &zn = slab.dual;
    std::vector<double> zp(d2.n_dofs(), 0.0), zx(d2.n_dofs(), 0.0);
    if (n > 0) {
      const auto &l = transport[n - 1];
      zp = slabs::build_transfer(l.mesh(), l.dofs(2), slab.mesh(), d2).apply(l.dual);
    }
    if (!last) {
      const auto &r = transport[n + 1];
      zx = slabs::build_transfer(r.mesh(), r.dofs(2), slab.mesh(), d2).apply(r.dual);
    }
    const bool moved = n > 0 && !transport[n - 1].mesh().same_active(slab.mesh());
    const auto rz = restrict_space(d2, zn, d1);
    const auto vel = field.on(slab);
    const auto dvel = field.temporal_difference(slab);
    const auto ivx = interpolate_patch_2h(slab.mesh(), d2, vel.x);
    const auto ivy = interpolate_patch_2h(slab.mesh(), d2, vel.y);

    auto &tc = out.temporal_cells[n];
    auto &sc = out.spatial[n];
    tc.assign(d1.n_cells(), 0.0);
    sc.assign(d1.n_cells(), 0.0);

    for (std::size_t c = 0; c < d1.n_cells(); ++c) {
      const auto box = d1.cell_box(c);
      fe.reinit(box);
      const double delta = k.delta(std::sqrt(2.0) * box.h);
      const auto lun = local(d1, c, un), lum = local(d1, c, um), lrz = local(d1, c, rz);
      const auto lzn = local(d2, c, zn), lzp = local(d2, c, zp), lzx = local(d2, c, zx);
      const auto lvx = local(d2, c, vel.x), lvy = local(d2, c, vel.y);
      const auto ldx = local(d2, c, dvel.x), ldy = local(d2, c, dvel.y);
      double rho = 0, rho_star = 0, dcoup = 0;
      double rho_h = 0, dcoup_h = 0;
      for (std::size_t q = 0; q < fe.q1.n_points(); ++q) {
        const double w = fe.q1.JxW(q);
        const Point x = fe.q1.point(q);
        PointData p{};
        p.un = fe.q1.value_of(lun.data(), q);
        p.gun = fe.q1.grad_of(lun.data(), q);
        p.lap_un = fe.q1.laplacian_of(lun.data(), q);
        p.um = fe.q1.value_of(lum.data(), q);
        p.gum = fe.q1.grad_of(lum.data(), q);
        p.rz = fe.q1.value_of(lrz.data(), q);
        p.grz = fe.q1.grad_of(lrz.data(), q);
        p.zn = fe.q2.value_of(lzn.data(), q);
        p.gzn = fe.q2.grad_of(lzn.data(), q);
        p.zp = fe.q2.value_of(lzp.data(), q);
        p.gzp = fe.q2.grad_of(lzp.data(), q);
        p.zx = fe.q2.value_of(lzx.data(), q);
        p.gzx = fe.q2.grad_of(lzx.data(), q);
        p.v = {fe.q2.value_of(lvx.data(), q), fe.q2.value_of(lvy.data(), q)};
        p.dv = {fe.q2.value_of(ldx.data(), q), fe.q2.value_of(ldy.data(), q)};
        p.iv = {fe.q4.value_of(ivx.cell(c), q), fe.q4.value_of(ivy.cell(c), q)};

        // a(u)(w) = eps (grad u, grad w) + (v.grad u, w) + alpha (u, w), pointwise
        auto form = [&](double u, const Vec2 &gu, double wv, const Vec2 &gw) {
          return k.diffusion * dot(gu, gw) + dot(p.v, gu) * wv + k.reaction * u * wv;
        };
        const double g_mid = problem.source ? problem.source(x, tm) : 0.0;

        // time, dual weight: the dual runs backwards, so its reconstruction
        // goes through the right neighbour, s (z_{n+1} - z_n); the terminal
        // datum is rough for the final-time goal, so the last slab takes the
        // left neighbour instead, (1-s)(z_{n-1} - z_n)
        if (!last) {
          const double wz = p.zx - p.zn;
          const Vec2 gwz{p.gzx[0] - p.gzn[0], p.gzx[1] - p.gzn[1]};
          double src = 0.0;
          for (std::size_t j = 0; j < time_rule.size() && problem.source; ++j) {
            const double s = time_rule.points[j];
            src += time_rule.weights[j] * s * problem.source(x, t0 + s * tau);
          }
          rho += w * (tau * src * wz - 0.5 * tau * form(p.un, p.gun, wz, gwz));
        } else if (n > 0) {
          const double wz = p.zp - p.zn;
          const Vec2 gwz{p.gzp[0] - p.gzn[0], p.gzp[1] - p.gzn[1]};
          double src = 0.0;
          for (std::size_t j = 0; j < time_rule.size() && problem.source; ++j) {
            const double s = time_rule.points[j];
            src += time_rule.weights[j] * (1.0 - s) * problem.source(x, t0 + s * tau);
          }
          rho += w * (tau * src * wz - 0.5 * tau * form(p.un, p.gun, wz, gwz) - (p.un - p.um) * wz);
        }
        // time, primal weight (1-s)(u^- - u_n); the jump terms cancel
        const double wu = p.um - p.un;
        const Vec2 gwu{p.gum[0] - p.gun[0], p.gum[1] - p.gun[1]};
        rho_star += w * (0.5 * tau * mean_scale * wu - 0.5 * tau * form(wu, gwu, p.zn, p.gzn));
        // flow in time, and the midpoint rule for the source
        double g_avg = 0.0;
        for (std::size_t j = 0; j < time_rule.size() && problem.source; ++j)
          g_avg += time_rule.weights[j] * problem.source(x, t0 + time_rule.points[j] * tau);
        dcoup += w * tau * ((g_avg - g_mid) * p.zn - dot(p.dv, p.gun) * p.zn);

        // space: z - R_h z against the primal residual, in full (see header)
        const double wzh = p.zn - p.rz;
        const Vec2 gwzh{p.gzn[0] - p.grz[0], p.gzn[1] - p.grz[1]};
        rho_h += w * (tau * g_mid * wzh - (p.un - p.um) * wzh - tau * form(p.un, p.gun, wzh, gwzh));
        if (n == 0 && problem.initial)
          rho_h += w * (problem.initial(x) - p.um) * p.zn;
        const double strong =
            p.un - p.um + tau * (-k.diffusion * p.lap_un + dot(p.v, p.gun) + k.reaction * p.un - g_mid);
        const Vec2 dvh{p.iv[0] - p.v[0], p.iv[1] - p.v[1]};
        dcoup_h += w * (delta * strong * dot(p.v, p.grz) - tau * dot(dvh, p.gun) * p.zn);
      }
      tc[c] = 0.5 * rho + 0.5 * rho_star + dcoup;
      sc[c] = rho_h + dcoup_h;
      if (moved)
        sc[c] += transfer_defect(transport[n - 1], transport[n - 1].primal, slab, um, zn, c);
      out.temporal[n] += tc[c];
      out.spatial_total += sc[c];
    }
    out.temporal_total += out.temporal[n];
  }
  return out;
}

std::vector<double> flow_temporal_indicator(const slabs::SlabList &flow, const stokes::FlowProblem &problem,
                                            const FlowIndicatorOptions &options) {
  std::vector<double> out(flow.size(), 0.0);
  for (std::size_t m = 0; m < flow.size(); ++m) {
    const auto &slab = flow[m];
    const auto &d = slab.dofs(2);
    const double sigma = slab.time().length();
    const auto v = stokes::velocity_of(slab);
    if (options.mode == FlowTemporalMode::exact_error) {
      if (!options.exact)
        throw std::invalid_argument("exact-error flow indicator needs the exact velocity");
      const double t = slab.time().midpoint();
      const double ex = fem::l2_error(d, v.x, [&](Point x) { return options.exact(x, t)[0]; });
      const double ey = fem::l2_error(d, v.y, [&](Point x) { return options.exact(x, t)[1]; });
      out[m] = std::sqrt(sigma * (ex * ex + ey * ey));
      continue;
    }
    if (options.mode == FlowTemporalMode::window && slab.time().left >= options.window_end - flow.tolerance())
      continue;
    const auto prev = stokes::flow_initial_value(flow, m, problem);
    std::vector<double> jx(d.n_dofs()), jy(d.n_dofs());
    for (std::size_t i = 0; i < d.n_dofs(); ++i) {
      jx[i] = v.x[i] - prev[i];
      jy[i] = v.y[i] - prev[d.n_dofs() + i];
    }
    const auto zero = [](Point) { return 0.0; };
    const double a = fem::l2_error(d, jx, zero), b = fem::l2_error(d, jy, zero);
    out[m] = std::sqrt(sigma / 3.0 * (a * a + b * b));
  }
  return out;
}

ErrorIndicators compute_flow_indicators(const slabs::SlabList &flow, const stokes::FlowProblem &problem,
                                        const FlowIndicatorOptions &options) {
  ErrorIndicators out;
  out.subproblem = slabs::Subproblem::flow;
  out.temporal = flow_temporal_indicator(flow, problem, options);
  out.spatial = compute_kelly_flow(flow);
  double t2 = 0.0, s2 = 0.0;
  for (double x : out.temporal)
    t2 += x * x;
  for (std::size_t m = 0; m < flow.size(); ++m)
    for (double e : out.spatial[m])
      s2 += flow[m].time().length() * e * e;
  out.temporal_total = std::sqrt(t2);
  out.spatial_total = std::sqrt(s2);
  return out;
}

double effectivity_index(double temporal, double spatial, double true_error) {
  if (true_error == 0.0) {
    std::cerr << "warning: true goal error is zero, effectivity reported as inf\n";
    return std::numeric_limits<double>::infinity();
  }
  return std::abs((temporal + spatial) / true_error);
}

double effectivity_index(const ErrorIndicators &indicators, double true_error) {
  return effectivity_index(indicators.temporal_total, indicators.spatial_total, true_error);
}

} // namespace mrdwr::estimation
