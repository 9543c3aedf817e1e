#include "mrdwr/scenarios/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mrdwr/scenarios/channel.hpp"
#include "mrdwr/scenarios/example1.hpp"

namespace mrdwr::scenarios {

using mesh2d::Point;

namespace {

ScenarioSpec example1() {
  ScenarioSpec s;
  s.name = "ex1";
  s.geometry = Geometry::unit_square;
  s.end_time = 1.0;
  s.viscosity = 0.5;
  s.diffusion = 1.0;
  s.reaction = 1.0;
  s.delta0 = 0.0;
  s.goal = transport::GoalKind::final_l2_error;
  s.flow_slabs = 2;
  s.transport_slabs = 10;
  s.root_edge = 1.0;
  s.flow_refinements = 1;
  s.transport_refinements = 2;
  auto &m = s.marking;
  m.theta_tau_top = 0.5;
  m.theta_h1_transport_top = m.theta_h2_transport_top = 0.5;
  m.theta_h_transport_bottom = 0.02;
  m.theta_sigma_top = 1.0;
  m.theta_h1_flow_top = m.theta_h2_flow_top = 0.38;
  m.theta_h_flow_bottom = 0.02;
  m.varpi = 1.0;
  m.omega = 2.0;
  m.max_loops = 10;
  s.dynamic_theta = true;
  s.flow_indicator = estimation::FlowTemporalMode::exact_error;
  s.flow_decision = adaptivity::FlowDecision::proxy_vs_goal_error;
  s.max_level_flow = 7;
  s.max_level_transport = 9;
  return s;
}

ScenarioSpec example2() {
  ScenarioSpec s;
  s.name = "ex2";
  s.geometry = Geometry::constricted_channel;
  s.end_time = 2.5;
  s.viscosity = 1.0;
  s.diffusion = 1e-4;
  s.reaction = 0.1;
  s.delta0 = 0.0;
  s.goal = transport::GoalKind::space_time_mean;
  s.flow_slabs = 25;
  s.transport_slabs = 25;
  // coarse desk default; 0.05 with one refinement gives 0.025 cells
  s.root_edge = 0.1;
  s.flow_refinements = 0;
  s.transport_refinements = 1;
  auto &m = s.marking;
  m.theta_tau_top = 0.5;
  m.theta_h1_transport_top = m.theta_h2_transport_top = 0.5;
  m.theta_h_transport_bottom = 0.02;
  m.theta_sigma_top = 1.0;
  m.theta_h1_flow_top = m.theta_h2_flow_top = 1.0;
  m.theta_h_flow_bottom = 0.0;
  m.varpi = 1.0;
  m.omega = 3.0;
  m.max_loops = 8;
  s.dynamic_theta = true;
  s.flow_indicator = estimation::FlowTemporalMode::window;
  s.flow_window_end = 0.2;
  s.flow_decision = adaptivity::FlowDecision::indicators;
  s.max_level_flow = 2;
  s.max_level_transport = 4;
  return s;
}

ScenarioSpec example3() {
  ScenarioSpec s = example2();
  s.name = "ex3";
  s.diffusion = 1e-6;
  s.delta0 = 0.1;
  auto &m = s.marking;
  m.theta_h1_flow_top = m.theta_h2_flow_top = 0.33;
  m.theta_h_flow_bottom = 0.02;
  m.theta_sigma_top = 0.2;
  s.flow_indicator = estimation::FlowTemporalMode::jump;
  s.flow_window_end = 0.0;
  return s;
}

mesh2d::SpatialMesh base_mesh(const ScenarioSpec &spec) {
  if (spec.geometry == Geometry::constricted_channel)
    return channel::build_geometry(spec.root_edge);
  const int n = static_cast<int>(std::lround(1.0 / spec.root_edge));
  if (n < 1 || std::abs(n * spec.root_edge - 1.0) > 1e-12)
    throw std::invalid_argument("root edge must divide the unit square");
  return mesh2d::SpatialMesh::rectangle({0.0, 0.0}, spec.root_edge, n, n);
}

void check_spec(const ScenarioSpec &spec) {
  if (!(spec.end_time > 0.0))
    throw std::invalid_argument("end_time must be positive");
  if (spec.flow_slabs < 1 || spec.transport_slabs < 1)
    throw std::invalid_argument("slab counts must be positive");
  if (spec.flow_refinements < 0 || spec.transport_refinements < 0)
    throw std::invalid_argument("refinement counts must be nonnegative");
  if (!(spec.viscosity > 0.0))
    throw std::invalid_argument("viscosity must be positive");
  if (spec.goal == transport::GoalKind::final_l2_error && !spec.manufactured())
    throw std::invalid_argument("the final-time L2 goal needs an exact solution");
  if (spec.flow_indicator == estimation::FlowTemporalMode::exact_error && !spec.manufactured())
    throw std::invalid_argument("the exact-error flow indicator needs an exact velocity");
  spec.marking.validate();
}

} // namespace

std::vector<std::string> scenario_names() { return {"ex1", "ex2", "ex3"}; }

ScenarioSpec default_scenario(const std::string &name) {
  if (name == "ex1")
    return example1();
  if (name == "ex2")
    return example2();
  if (name == "ex3")
    return example3();
  throw std::invalid_argument("unknown scenario '" + name + "' (known: ex1, ex2, ex3)");
}

void dynamic_theta(adaptivity::MarkingParams &params, double eta_tau, double eta_h) {
  const double t = std::abs(eta_tau), h = std::abs(eta_h);
  if (!(t + h > 0.0))
    return;
  params.theta_h2_transport_top = 0.5 * std::min(h / (h + t), 1.0);
  params.theta_h1_transport_top = params.theta_h2_transport_top;
  params.theta_tau_top = 0.5 * std::min(t / (h + t), 1.0);
}

Scenario build_scenario(const ScenarioSpec &spec) {
  check_spec(spec);
  auto flow_mesh = base_mesh(spec);
  flow_mesh.refine_global(spec.flow_refinements);
  auto transport_mesh = base_mesh(spec);
  transport_mesh.set_patch_smoothing(true);
  transport_mesh.refine_global(spec.transport_refinements);
  if (!transport_mesh.is_patch_structured())
    throw std::invalid_argument("transport mesh needs at least one refinement of the roots");

  Scenario sc{spec, slabs::init_slab_lists(spec.end_time, spec.flow_slabs, spec.transport_slabs, flow_mesh,
                                           transport_mesh),
              {}};
  auto &setup = sc.setup;
  setup.transport.coefficients = {spec.diffusion, spec.reaction, spec.delta0};
  setup.goal.kind = spec.goal;
  setup.flow_indicator.mode = spec.flow_indicator;
  setup.flow_indicator.window_end = spec.flow_window_end;
  setup.flow_decision = spec.flow_decision;
  setup.max_level_flow = spec.max_level_flow;
  setup.max_level_transport = spec.max_level_transport;
  if (spec.dynamic_theta)
    setup.update_params = [](adaptivity::MarkingParams &p, double eta_tau, double eta_h) {
      dynamic_theta(p, eta_tau, eta_h);
    };

  if (spec.geometry == Geometry::unit_square) {
    if (!spec.manufactured())
      throw std::invalid_argument("the unit square only carries the manufactured problem");
    const double nu = spec.viscosity, eps = spec.diffusion, alpha = spec.reaction;
    setup.flow.viscosity = nu;
    setup.flow.forcing = [nu](Point x, double t) { return ex1::flow_forcing(x, t, nu); };
    setup.flow.initial_velocity = [](Point x) { return ex1::velocity(x, 0.0); };
    setup.transport.source = [eps, alpha](Point x, double t) { return ex1::transport_forcing(x, t, eps, alpha); };
    setup.transport.initial = [](Point x) { return ex1::concentration(x, 0.0); };
    setup.transport.dirichlet = ex1::concentration;
    setup.goal.exact = ex1::concentration;
    setup.flow_indicator.exact = ex1::velocity;
  } else {
    setup.flow.viscosity = spec.viscosity;
    setup.flow.boundary.outflow = channel::on_outflow;
    setup.flow.boundary.velocity = channel::inflow_velocity;
    setup.transport.dirichlet = channel::inflow_concentration;
  }
  return sc;
}

SelfCheck run_self_check(const ScenarioSpec &spec, int samples, unsigned seed) {
  SelfCheck out;
  if (!spec.manufactured()) {
    out.message = "no manufactured data to check";
    return out;
  }
  const double nu = spec.viscosity, eps = spec.diffusion, alpha = spec.reaction;
  const double h = 2.5e-4;
  // fourth-order central stencils
  auto d1 = [h](auto f) { return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h); };
  auto d2 = [h](auto f) { return (-f(2 * h) + 16 * f(h) - 30 * f(0.0) + 16 * f(-h) - f(-2 * h)) / (12 * h * h); };

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> space(0.0, 1.0), time(0.0, spec.end_time);
  double vmax = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Point x{space(rng), space(rng)};
    const double t = time(rng);
    // the cone height has kinks at whole and half periods
    const double phase = t - std::floor(t);
    if (std::min({phase, std::abs(phase - 0.5), 1.0 - phase}) < 4 * h) {
      --k;
      continue;
    }
    auto v = [&](double dx, double dy, double dt, int c) { return ex1::velocity({x.x + dx, x.y + dy}, t + dt)[c]; };
    auto p = [&](double dx, double dy) { return ex1::pressure({x.x + dx, x.y + dy}, t); };
    const auto f = ex1::flow_forcing(x, t, nu);
    const double gradp[2] = {d1([&](double s) { return p(s, 0); }), d1([&](double s) { return p(0, s); })};
    for (int c = 0; c < 2; ++c) {
      const double dt = d1([&](double s) { return v(0, 0, s, c); });
      const double lap = d2([&](double s) { return v(s, 0, 0, c); }) + d2([&](double s) { return v(0, s, 0, c); });
      const double fd = dt - nu * lap + gradp[c];
      out.flow_forcing = std::max(out.flow_forcing, std::abs(fd - f[c]) / std::max(1.0, std::abs(f[c])));
    }
    const double div = d1([&](double s) { return v(s, 0, 0, 0); }) + d1([&](double s) { return v(0, s, 0, 1); });
    out.divergence = std::max(out.divergence, std::abs(div));
    const auto vx = ex1::velocity(x, t);
    vmax = std::max({vmax, std::abs(vx[0]), std::abs(vx[1])});

    auto u = [&](double dx, double dy, double dt) { return ex1::concentration({x.x + dx, x.y + dy}, t + dt); };
    const double ut = d1([&](double s) { return u(0, 0, s); });
    const double ux = d1([&](double s) { return u(s, 0, 0); });
    const double uy = d1([&](double s) { return u(0, s, 0); });
    const double lap = d2([&](double s) { return u(s, 0, 0); }) + d2([&](double s) { return u(0, s, 0); });
    const double fd = ut - eps * lap + vx[0] * ux + vx[1] * uy + alpha * u(0, 0, 0);
    const double g = ex1::transport_forcing(x, t, eps, alpha);
    out.transport_forcing = std::max(out.transport_forcing, std::abs(fd - g) / std::max(1.0, std::abs(g)));
  }
  out.divergence /= std::max(vmax, 1e-300);
  const double tol = 1e-5;
  out.passed = out.flow_forcing <= tol && out.transport_forcing <= tol && out.divergence <= 1e-6;
  std::ostringstream msg;
  msg << "forcing self-check: flow " << out.flow_forcing << ", transport " << out.transport_forcing
      << ", divergence " << out.divergence << (out.passed ? " (ok)" : " (FAILED)");
  out.message = msg.str();
  return out;
}

} // namespace mrdwr::scenarios
