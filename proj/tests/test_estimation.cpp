#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "mrdwr/estimation/indicators.hpp"
#include "mrdwr/estimation/kelly.hpp"
#include "mrdwr/estimation/weights.hpp"
#include "mrdwr/fem/lagrange.hpp"
#include "mrdwr/fem/quadrature.hpp"
#include "mrdwr/scenarios/example1.hpp"

using namespace mrdwr;
using doctest::Approx;
using estimation::CellwiseField;
using mesh2d::CellId;
using mesh2d::Point;
using mesh2d::SpatialMesh;

namespace {

std::mt19937 &rng() {
  static std::mt19937 g(20240611);
  return g;
}
double uniform(double a = -1.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(rng()); }

SpatialMesh patch_square(int level) {
  auto m = SpatialMesh::unit_square();
  m.set_patch_smoothing(true);
  m.refine_global(level);
  return m;
}

SpatialMesh patch_adaptive() {
  auto m = patch_square(2);
  m.refine({CellId{2, 1, 1}, CellId{2, 3, 0}});
  return m;
}

double eval_cellwise(const SpatialMesh &mesh, const CellwiseField &f, Point x) {
  const auto at = mesh.locate(x);
  REQUIRE(at.has_value());
  const auto s = fem::shape_eval(f.degree, at->second);
  double v = 0.0;
  for (int i = 0; i < f.n_local(); ++i)
    v += s.values[i] * f.cell(at->first)[i];
  return v;
}

double eval_field(const SpatialMesh &mesh, const fem::DofMap &d, const std::vector<double> &u, Point x) {
  const auto at = mesh.locate(x);
  REQUIRE(at.has_value());
  return fem::evaluate(d, at->first, u, at->second);
}

// random polynomial of degree `deg` in each variable
struct Poly2 {
  int deg;
  std::vector<double> c;
  explicit Poly2(int d) : deg(d), c((d + 1) * (d + 1)) {
    for (auto &v : c)
      v = uniform();
  }
  double operator()(Point x) const {
    double s = 0.0;
    for (int j = 0; j <= deg; ++j)
      for (int i = 0; i <= deg; ++i)
        s += c[j * (deg + 1) + i] * std::pow(x.x, i) * std::pow(x.y, j);
    return s;
  }
};

Point random_point() { return {uniform(0.0, 1.0), uniform(0.0, 1.0)}; }

} // namespace

TEST_CASE("time reconstruction of a discontinuous constant") {
  const auto e = estimation::reconstruct_time(1.0, 2.0, {0.8}, {1.5});
  CHECK(e.degree() == 1);
  CHECK(e.value(0, 1.5) == Approx(1.15).epsilon(1e-14));
  CHECK(e.value(0, 1.0) == Approx(0.8).epsilon(1e-14));
  CHECK(e.value(0, 2.0) == Approx(1.5).epsilon(1e-14));
  const auto flat = estimation::reconstruct_time(0.0, 0.3, {2.0, -1.0}, {2.0, -1.0});
  for (double t : {0.0, 0.1, 0.25})
    for (std::size_t k = 0; k < 2; ++k)
      CHECK(std::abs(flat.value(k, t) - (k == 0 ? 2.0 : -1.0)) < 1e-15);
}

TEST_CASE("time reconstruction reproduces degree r+1 polynomials") {
  for (int r = 0; r <= 1; ++r)
    for (int trial = 0; trial < 100; ++trial) {
      const double a = uniform(0.0, 1.0), b = a + uniform(0.01, 0.5);
      std::vector<double> c(r + 2);
      for (auto &x : c)
        x = uniform();
      auto q = [&](double t) {
        double s = 0.0;
        for (int k = r + 1; k >= 0; --k)
          s = s * t + c[k];
        return s;
      };
      fem::TimeBasis basis(r, a, b);
      // the cell's own dG(r) polynomial interpolates q at the Gauss-Lobatto
      // nodes after the first one
      const auto gl = fem::gauss_lobatto_points(r + 2);
      std::vector<double> tn, qn;
      for (std::size_t k = 1; k < gl.size(); ++k) {
        tn.push_back(a + gl.points[k] * (b - a));
        qn.push_back(q(tn.back()));
      }
      auto own_poly = [&](double t) {
        if (r == 0)
          return qn[0];
        return qn[0] + (qn[1] - qn[0]) * (t - tn[0]) / (tn[1] - tn[0]);
      };
      std::vector<std::vector<double>> own;
      for (double t : basis.nodes())
        own.push_back({own_poly(t)});
      const estimation::TimeReconstruction e({q(a)}, basis, own);
      for (int s = 0; s < 5; ++s) {
        const double t = a + uniform(0.0, 1.0) * (b - a);
        CHECK(std::abs(e.value(0, t) - q(t)) <= 1e-12);
      }
    }
}

TEST_CASE("patch interpolation is exact for degree-2p patch polynomials") {
  // uniform meshes: at hanging nodes a conforming field cannot take the
  // polynomial's values, so the exactness class is only defined without them
  const auto meshes = {patch_square(1), patch_square(2), patch_square(3)};
  int cases = 0;
  for (const auto &mesh : meshes)
    for (int p = 1; p <= 2; ++p)
      for (int trial = 0; trial < 20; ++trial, ++cases) {
        const fem::DofMap d(mesh, p);
        const Poly2 poly(2 * p);
        const auto u = fem::interpolate(d, poly);
        const auto iu = estimation::interpolate_patch_2h(mesh, d, u);
        CHECK(iu.degree == 2 * p);
        for (int s = 0; s < 5; ++s) {
          const Point x = random_point();
          CHECK(std::abs(eval_cellwise(mesh, iu, x) - poly(x)) <= 1e-12);
        }
        if (p == 2 && trial == 0) {
          // a field already of the lower degree is left unchanged: weight 0
          const Poly2 low(2);
          const auto v = fem::interpolate(d, low);
          const auto iv = estimation::interpolate_patch_2h(mesh, d, v);
          for (int s = 0; s < 5; ++s) {
            const Point x = random_point();
            CHECK(std::abs(eval_cellwise(mesh, iv, x) - eval_field(mesh, d, v, x)) <= 1e-12);
          }
        }
      }
  CHECK(cases >= 100);
}

TEST_CASE("patch interpolation of x^4 matches the nodal bi-quadratic fit") {
  const auto mesh = patch_square(1);
  const fem::DofMap d(mesh, 1);
  const auto u = fem::interpolate(d, [](Point x) { return std::pow(x.x, 4); });
  const auto iu = estimation::interpolate_patch_2h(mesh, d, u);
  // quadratic through (0,0), (1/2,1/16), (1,1)
  auto fit = [](double x) {
    const double l0 = 2 * (x - 0.5) * (x - 1), l1 = -4 * x * (x - 1), l2 = 2 * x * (x - 0.5);
    return 0.0 * l0 + 0.0625 * l1 + 1.0 * l2;
  };
  double weight = 0.0;
  for (int s = 0; s < 50; ++s) {
    const Point x = random_point();
    CHECK(std::abs(eval_cellwise(mesh, iu, x) - fit(x.x)) <= 1e-12);
    weight = std::max(weight, std::abs(eval_cellwise(mesh, iu, x) - eval_field(mesh, d, u, x)));
  }
  CHECK(weight > 1e-3);
}

TEST_CASE("patch interpolation needs a patch mesh") {
  auto mesh = SpatialMesh::unit_square();
  mesh.refine_global(1);
  mesh.refine({CellId{1, 0, 0}});
  const fem::DofMap d(mesh, 1);
  CHECK_THROWS_WITH(estimation::interpolate_patch_2h(mesh, d, std::vector<double>(d.n_dofs(), 1.0)),
                    "mesh not patch-structured");
}

TEST_CASE("restriction in space") {
  const auto meshes = {patch_square(2), patch_adaptive()};
  int cases = 0;
  for (const auto &mesh : meshes) {
    const fem::DofMap d1(mesh, 1), d2(mesh, 2);
    for (int trial = 0; trial < 60; ++trial, ++cases) {
      // round trip of a degree-1 field
      std::vector<double> u(d1.n_dofs());
      for (auto &v : u)
        v = uniform();
      d1.hanging_constraints().distribute(u);
      std::vector<double> lifted(d2.n_dofs());
      for (std::size_t k = 0; k < d2.n_dofs(); ++k)
        lifted[k] = eval_field(mesh, d1, u, d2.support_point(static_cast<int>(k)));
      const auto back = estimation::restrict_space(d2, lifted, d1);
      for (std::size_t k = 0; k < u.size(); ++k)
        CHECK(std::abs(back[k] - u[k]) <= 1e-12);
      // a random degree-2 field: the weight vanishes at every free Q1 node
      std::vector<double> z(d2.n_dofs());
      for (auto &v : z)
        v = uniform();
      d2.hanging_constraints().distribute(z);
      const auto rz = estimation::restrict_space(d2, z, d1);
      for (std::size_t k = 0; k < d1.n_dofs(); ++k) {
        if (d1.hanging_constraints().is_constrained(static_cast<int>(k)))
          continue;
        const Point x = d1.support_point(static_cast<int>(k));
        CHECK(std::abs(eval_field(mesh, d2, z, x) - eval_field(mesh, d1, rz, x)) <= 1e-12);
      }
    }
  }
  CHECK(cases >= 100);

  const auto one = SpatialMesh::unit_square();
  const fem::DofMap d1(one, 1), d2(one, 2);
  const auto bubble = fem::interpolate(d2, [](Point x) { return 16 * x.x * (1 - x.x) * x.y * (1 - x.y); });
  for (double v : estimation::restrict_space(d2, bubble, d1))
    CHECK(std::abs(v) <= 1e-15);
}

namespace {

stokes::Velocity interpolate_velocity(const fem::DofMap &d, const std::function<fem::Vec2(Point)> &f) {
  return {fem::interpolate(d, [&](Point x) { return f(x)[0]; }),
          fem::interpolate(d, [&](Point x) { return f(x)[1]; })};
}

} // namespace

TEST_CASE("Kelly indicator vanishes on linear fields and is linear-invariant") {
  auto adaptive = SpatialMesh::unit_square();
  adaptive.refine_global(2);
  adaptive.refine({CellId{2, 1, 1}, CellId{2, 2, 2}});
  adaptive.refine({CellId{3, 3, 3}});
  const auto meshes = {patch_square(2), adaptive};
  int cases = 0;
  for (const auto &mesh : meshes) {
    const fem::DofMap d(mesh, 2);
    for (int trial = 0; trial < 50; ++trial, ++cases) {
      const double a = uniform(), b = uniform(), c = uniform(), e = uniform(), f = uniform(), g = uniform();
      auto lin = [&](Point x) { return fem::Vec2{a + b * x.x + c * x.y, e + f * x.x + g * x.y}; };
      const auto v = interpolate_velocity(d, lin);
      for (double eta : estimation::kelly_indicators(mesh, d, v))
        CHECK(eta <= 1e-12);
      const Poly2 px(2), py(2);
      auto w = interpolate_velocity(d, [&](Point x) { return fem::Vec2{px(x), py(x) * x.x * x.x}; });
      const auto base = estimation::kelly_indicators(mesh, d, w);
      for (std::size_t k = 0; k < d.n_dofs(); ++k) {
        w.x[k] += v.x[k];
        w.y[k] += v.y[k];
      }
      const auto shifted = estimation::kelly_indicators(mesh, d, w);
      for (std::size_t k = 0; k < base.size(); ++k)
        CHECK(std::abs(base[k] - shifted[k]) <= 1e-12);
    }
  }
  CHECK(cases >= 100);
}

TEST_CASE("Kelly indicator on one cell and on a two-cell face") {
  const auto one = SpatialMesh::unit_square();
  const fem::DofMap d1(one, 2);
  const auto v1 = interpolate_velocity(d1, [](Point x) { return fem::Vec2{x.x * x.x, std::sin(x.y)}; });
  CHECK(estimation::kelly_indicators(one, d1, v1)[0] == 0.0);

  const auto two = SpatialMesh::rectangle({0.0, 0.0}, 1.0, 2, 1);
  const fem::DofMap d(two, 2);
  auto v = interpolate_velocity(d, [](Point x) { return fem::Vec2{x.x * x.x, 0.0}; });
  for (double eta : estimation::kelly_indicators(two, d, v))
    CHECK(eta <= 1e-12);
  // bump the midpoint node of the left cell; its shape 16 x(1-x) y(1-y)
  // has normal derivative -16 y(1-y) on the shared face
  int mid = -1;
  for (std::size_t k = 0; k < d.n_dofs(); ++k) {
    const Point p = d.support_point(static_cast<int>(k));
    if (std::abs(p.x - 0.5) < 1e-12 && std::abs(p.y - 0.5) < 1e-12)
      mid = static_cast<int>(k);
  }
  REQUIRE(mid >= 0);
  v.x[mid] += 1.0;
  const auto rule = fem::gauss_points(5);
  double integral = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double y = rule.points[q];
    const double jump = 16.0 * y * (1 - y);
    integral += rule.weights[q] * jump * jump;
  }
  const auto eta = estimation::kelly_indicators(two, d, v);
  CHECK(eta[0] * eta[0] + eta[1] * eta[1] == Approx(integral / 24.0).epsilon(1e-12));
  CHECK(eta[0] == Approx(eta[1]).epsilon(1e-14));
}

TEST_CASE("Kelly hanging faces are integrated once on the fine side") {
  auto mesh = SpatialMesh::rectangle({0.0, 0.0}, 1.0, 2, 1);
  mesh.refine({CellId{0, 1, 0}});
  const fem::DofMap d(mesh, 2);
  // x^3 is not in Q2, so the interpolant has gradient jumps everywhere
  const auto v = interpolate_velocity(d, [](Point x) { return fem::Vec2{x.x * x.x * x.x, 0.0}; });
  const auto eta = estimation::kelly_indicators(mesh, d, v);
  // oracle: each interior face integrated once from its finer (or either) side
  double total = 0.0, coarse_share = 0.0;
  const auto rule = fem::gauss_points(3);
  for (std::size_t c = 0; c < mesh.n_active(); ++c) {
    const auto box = mesh.box(c);
    for (int f = 0; f < 4; ++f) {
      const auto nbs = mesh.face_neighbors(mesh.cell(c), f);
      if (nbs.size() != 1 || nbs[0].level > mesh.cell(c).level)
        continue;
      const auto other = *mesh.active_index(nbs[0]);
      if (nbs[0].level == mesh.cell(c).level && other < c)
        continue;
      double integral = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        Point ref = f == 0 ? Point{0, rule.points[q]} : f == 1 ? Point{1, rule.points[q]}
                  : f == 2 ? Point{rule.points[q], 0} : Point{rule.points[q], 1};
        const Point x = box.to_real(ref);
        const auto ga = fem::evaluate_gradient(d, c, v.x, ref);
        const auto gb = fem::evaluate_gradient(d, other, v.x, mesh.box(other).to_ref(x));
        const int axis = f < 2 ? 0 : 1;
        integral += rule.weights[q] * box.h * std::pow(ga[axis] - gb[axis], 2);
      }
      total += box.h / 24.0 * integral;
      if (nbs[0].level < mesh.cell(c).level)
        coarse_share += 0.5 * box.h / 24.0 * integral;
    }
  }
  double sum = 0.0;
  for (double e : eta)
    sum += e * e;
  CHECK(sum == Approx(total).epsilon(1e-12));
  CHECK(coarse_share > 0.0);
  // the coarse left cell only borders the hanging face
  std::size_t coarse = 0;
  while (mesh.cell(coarse).level != 0)
    ++coarse;
  CHECK(eta[coarse] * eta[coarse] == Approx(coarse_share).epsilon(1e-12));
}

namespace {

struct TransportRun {
  slabs::SlabLists lists;
  transport::TransportProblem problem;
  transport::VelocityField field = transport::VelocityField::zero();
  transport::Goal goal;
  transport::TransportState state;
};

TransportRun run_transport(const SpatialMesh &mesh, int slabs, const transport::TransportProblem &problem,
                           transport::VelocityField field, const transport::Goal &goal) {
  TransportRun r{slabs::init_slab_lists(1.0, 1, slabs, mesh, mesh), problem, std::move(field), goal, {}};
  r.state = transport::solve_primal_forward(r.lists.transport, r.field, r.problem);
  transport::solve_dual_backward(r.lists.transport, r.state, r.problem, r.goal);
  return r;
}

} // namespace

TEST_CASE("indicators vanish when the exact solution is discrete") {
  const fem::Vec2 wind{0.7, -0.4};
  const double eps = 0.3, alpha = 0.5;
  for (int constant = 0; constant <= 1; ++constant) {
    auto exact = [constant](Point x, double) { return constant ? 2.5 : 1.0 + 2 * x.x - x.y + 3 * x.x * x.y; };
    auto grad = [constant](Point x) {
      return constant ? fem::Vec2{0, 0} : fem::Vec2{2 + 3 * x.y, -1 + 3 * x.x};
    };
    transport::TransportProblem p;
    p.coefficients = {eps, alpha, 0.1};
    p.source = [&](Point x, double t) {
      const auto g = grad(x);
      return wind[0] * g[0] + wind[1] * g[1] + alpha * exact(x, t);
    };
    p.initial = [&](Point x) { return exact(x, 0.0); };
    p.dirichlet = exact;
    for (int kind = 0; kind <= 1; ++kind) {
      transport::Goal goal;
      goal.kind = kind ? transport::GoalKind::space_time_mean : transport::GoalKind::final_l2_error;
      // final-time goal: an exact field off the discrete one keeps the dual nonzero
      goal.exact = [&](Point x, double t) { return exact(x, t) + 0.1 * std::sin(5 * x.x) * x.y; };
      const auto run = run_transport(patch_adaptive(), 3,
                                     p, transport::VelocityField::analytic([&](Point, double) { return wind; }),
                                     goal);
      const auto ind = estimation::compute_transport_indicators(run.lists.transport, run.field, p, goal);
      CHECK(std::abs(ind.temporal_total) <= 1e-10);
      CHECK(std::abs(ind.spatial_total) <= 1e-10);
      for (std::size_t n = 0; n < ind.temporal.size(); ++n) {
        CHECK(std::abs(ind.temporal[n]) <= 1e-10);
        double s = 0.0;
        for (double v : ind.spatial[n])
          s += v;
        CHECK(std::abs(s) <= 1e-10);
        if (constant)
          for (std::size_t c = 0; c < ind.spatial[n].size(); ++c) {
            CHECK(std::abs(ind.spatial[n][c]) <= 1e-10);
            CHECK(std::abs(ind.temporal_cells[n][c]) <= 1e-10);
          }
      }
    }
  }
}

namespace {

TransportRun ex1_transport(int level, int slabs) {
  namespace e1 = scenarios::ex1;
  transport::TransportProblem p;
  p.coefficients = {1.0, 1.0, 0.0};
  p.source = [](Point x, double t) { return e1::transport_forcing(x, t, 1.0, 1.0); };
  p.initial = [](Point x) { return e1::concentration(x, 0.0); };
  p.dirichlet = e1::concentration;
  transport::Goal goal;
  goal.kind = transport::GoalKind::final_l2_error;
  goal.exact = e1::concentration;
  return run_transport(patch_square(level), slabs, p, transport::VelocityField::analytic(e1::velocity), goal);
}

} // namespace

TEST_CASE("indicators are linear in the dual and roll up per slab") {
  auto run = ex1_transport(2, 4);
  const auto base = estimation::compute_transport_indicators(run.lists.transport, run.field, run.problem, run.goal);
  for (std::size_t n = 0; n < base.temporal.size(); ++n) {
    double s = 0.0;
    for (double v : base.temporal_cells[n])
      s += v;
    CHECK(s == base.temporal[n]);
  }
  for (auto &slab : run.lists.transport)
    for (auto &z : slab.dual)
      z *= 2.0;
  const auto twice = estimation::compute_transport_indicators(run.lists.transport, run.field, run.problem, run.goal);
  CHECK(twice.temporal_total == Approx(2.0 * base.temporal_total).epsilon(1e-12));
  CHECK(twice.spatial_total == Approx(2.0 * base.spatial_total).epsilon(1e-12));
  for (std::size_t n = 0; n < base.spatial.size(); ++n)
    for (std::size_t c = 0; c < base.spatial[n].size(); ++c) {
      CHECK(twice.spatial[n][c] == Approx(2.0 * base.spatial[n][c]).epsilon(1e-10));
      CHECK(twice.temporal_cells[n][c] == Approx(2.0 * base.temporal_cells[n][c]).epsilon(1e-10));
    }
}

TEST_CASE("indicators need a dual solution") {
  auto run = ex1_transport(1, 2);
  run.lists.transport[1].dual.clear();
  CHECK_THROWS_AS(estimation::compute_transport_indicators(run.lists.transport, run.field, run.problem, run.goal),
                  std::logic_error);
}

TEST_CASE("estimator tracks the error of a smooth heat problem") {
  // u = sin(pi x) sin(pi y) sin(6t + 0.3), zero boundary values
  const double pi = std::acos(-1.0);
  auto exact = [pi](Point x, double t) { return std::sin(pi * x.x) * std::sin(pi * x.y) * std::sin(6 * t + 0.3); };
  transport::TransportProblem p;
  p.coefficients = {1.0, 1.0, 0.0};
  p.source = [pi](Point x, double t) {
    return std::sin(pi * x.x) * std::sin(pi * x.y) * (6 * std::cos(6 * t + 0.3) + (2 * pi * pi + 1) * std::sin(6 * t + 0.3));
  };
  p.initial = [&](Point x) { return exact(x, 0.0); };
  transport::Goal mean;
  const auto run = run_transport(patch_square(2), 200, p, transport::VelocityField::zero(), mean);
  const auto ind = estimation::compute_transport_indicators(run.lists.transport, run.field, p, mean);
  const double true_mean = (std::cos(0.3) - std::cos(6.3)) / 6.0 * 4.0 / (pi * pi);
  const double err = true_mean - transport::eval_goal(run.lists.transport, p, mean);
  const double ieff = estimation::effectivity_index(ind, err);
  CHECK(ieff > 0.9);
  CHECK(ieff < 1.1);
}

TEST_CASE("effectivity index") {
  CHECK(estimation::effectivity_index(1.76e-4, 9.77e-5, 2.74e-4) == Approx(1.00).epsilon(0.005));
  CHECK(estimation::effectivity_index(4.67e-2, -1.26e-3, 2.14e-2) == Approx(2.12).epsilon(0.005));
  CHECK(estimation::effectivity_index(0.3, 0.2, -0.5) == 1.0);
  CHECK(std::isinf(estimation::effectivity_index(1.0, 0.0, 0.0)));
}

namespace {

stokes::FlowProblem steady_vortex() {
  stokes::FlowProblem p;
  p.viscosity = 0.5;
  p.forcing = [](Point x, double) { return scenarios::ex1::steady_flow_forcing(x, 0.5); };
  return p;
}

} // namespace

TEST_CASE("flow temporal indicators") {
  auto mesh = SpatialMesh::unit_square();
  mesh.refine_global(2);
  SUBCASE("jumps die out for steady data") {
    auto flow = slabs::init_slab_lists(2.0, 8, 8, mesh, mesh).flow;
    const auto p = steady_vortex();
    stokes::solve_flow_forward(flow, p);
    const auto eta = estimation::flow_temporal_indicator(flow, p, {});
    for (std::size_t m = 1; m < eta.size(); ++m)
      CHECK(eta[m] < eta[m - 1]);
    CHECK(eta.back() < 1e-2 * eta.front());
  }
  SUBCASE("exact-error proxy matches the space-time error") {
    auto flow = slabs::init_slab_lists(1.0, 3, 3, mesh, mesh).flow;
    stokes::FlowProblem p;
    p.viscosity = 0.5;
    p.forcing = [](Point x, double t) { return scenarios::ex1::flow_forcing(x, t, 0.5); };
    p.initial_velocity = [](Point x) { return scenarios::ex1::velocity(x, 0.0); };
    stokes::solve_flow_forward(flow, p);
    estimation::FlowIndicatorOptions o;
    o.mode = estimation::FlowTemporalMode::exact_error;
    o.exact = scenarios::ex1::velocity;
    const auto ind = estimation::compute_flow_indicators(flow, p, o);
    CHECK(ind.temporal_total == Approx(stokes::flow_l2l2_error(flow, scenarios::ex1::velocity)).epsilon(1e-12));
  }
  SUBCASE("window schedule") {
    auto flow = slabs::init_slab_lists(1.0, 10, 10, mesh, mesh).flow;
    const auto p = steady_vortex();
    stokes::solve_flow_forward(flow, p);
    estimation::FlowIndicatorOptions o;
    o.mode = estimation::FlowTemporalMode::window;
    o.window_end = 0.2;
    const auto eta = estimation::flow_temporal_indicator(flow, p, o);
    CHECK(eta[0] > 0.0);
    CHECK(eta[1] > 0.0);
    for (std::size_t m = 2; m < eta.size(); ++m)
      CHECK(eta[m] == 0.0);
  }
}
