#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "mrdwr/scenarios/channel.hpp"
#include "mrdwr/scenarios/example1.hpp"
#include "mrdwr/scenarios/scenario.hpp"

using namespace mrdwr;
using doctest::Approx;
using mesh2d::Point;

TEST_CASE("channel geometry covers the three blocks") {
  const auto mesh = scenarios::channel::build_geometry(0.1);
  double area = 0.0;
  for (std::size_t c = 0; c < mesh.n_active(); ++c) {
    const auto b = mesh.box(c);
    area += b.h * b.h;
  }
  CHECK(area == Approx(scenarios::channel::area).epsilon(1e-12));
  CHECK(mesh.n_active() == 220);
  CHECK(mesh.locate({0.5, 0.05}).has_value());
  CHECK_FALSE(mesh.locate({0.5, 0.2}).has_value());
  CHECK(mesh.locate({1.5, -0.45}).has_value());
  CHECK_THROWS(scenarios::channel::build_geometry(0.03));
}

TEST_CASE("channel inflow data") {
  using namespace scenarios::channel;
  // ramp: atan(0.05) / (pi/2) on the centreline
  CHECK(inflow_velocity({-1.0, 0.0}, 0.05)[0] == Approx(std::atan(0.05) * 2 / std::numbers::pi));
  CHECK(inflow_velocity({-1.0, 0.0}, 0.05)[0] == Approx(0.0318).epsilon(1e-3));
  CHECK(inflow_velocity({-1.0, 0.25}, 0.05)[0] == Approx(0.75 * std::atan(0.05) * 2 / std::numbers::pi));
  CHECK(inflow_velocity({-1.0, 0.0}, 0.5)[0] == 1.0);
  CHECK(inflow_velocity({-1.0, 0.0}, 0.5)[1] == 0.0);
  CHECK(inflow_velocity({-1.0, 0.5}, 0.5)[0] == 0.0);  // corner belongs to the wall
  CHECK(inflow_velocity({0.5, 0.0}, 0.5)[0] == 0.0);
  CHECK(inflow_concentration({-1.0, 0.3}, 0.05) == 1.0);
  CHECK(inflow_concentration({-1.0, 0.45}, 0.05) == 0.0);
  CHECK(inflow_concentration({-1.0, 0.0}, 0.2) == 0.0);
  CHECK(on_inflow({-1.0, 0.1}));
  CHECK(on_outflow({2.0, 0.1}));
  CHECK_FALSE(on_outflow({1.9, 0.1}));
}

TEST_CASE("rotating cone facts") {
  using namespace scenarios::ex1;
  // the height factor vanishes at quarter and three-quarter periods
  for (double t : {0.25, 0.75})
    for (Point x : {Point{0.5, 0.5}, Point{0.75, 0.5}, Point{0.2, 0.9}})
      CHECK(std::abs(concentration(x, t)) < 1e-14);
  // divergence free vortex vanishing on the boundary
  for (Point x : {Point{0.0, 0.3}, Point{1.0, 0.7}, Point{0.4, 0.0}, Point{0.6, 1.0}}) {
    CHECK(std::abs(velocity(x, 0.3)[0]) < 1e-14);
    CHECK(std::abs(velocity(x, 0.3)[1]) < 1e-14);
  }
}

TEST_CASE("manufactured forcings agree with finite differences") {
  for (const char *name : {"ex1"}) {
    const auto check = scenarios::run_self_check(scenarios::default_scenario(name), 300);
    INFO(check.message);
    CHECK(check.passed);
    CHECK(check.divergence < 1e-6);
  }
}

TEST_CASE("config round trip and overrides") {
  for (const auto &name : scenarios::scenario_names()) {
    auto spec = scenarios::default_scenario(name);
    std::stringstream ini;
    scenarios::write_config(ini, spec);
    const auto back = scenarios::load_config(ini);
    for (const auto &key : scenarios::parameter_keys())
      CHECK_MESSAGE(scenarios::get_parameter(back, key) == scenarios::get_parameter(spec, key), key);
  }
  auto spec = scenarios::default_scenario("ex3");
  scenarios::apply_override(spec, "delta0=0");
  CHECK(spec.delta0 == 0.0);
  scenarios::apply_override(spec, "max_loops=3");
  CHECK(spec.marking.max_loops == 3);
  CHECK_THROWS_AS(scenarios::apply_override(spec, "nonsense=1"), std::invalid_argument);
  CHECK_THROWS_AS(scenarios::apply_override(spec, "max_loops=many"), std::invalid_argument);
  CHECK_THROWS_AS(scenarios::apply_override(spec, "no_equals_sign"), std::invalid_argument);
  CHECK_THROWS(scenarios::default_scenario("ex9"));
  std::stringstream bad("[scenario]\nname = ex1\n[coefficients]\nviscosity = -1\n");
  CHECK_THROWS(scenarios::build_scenario(scenarios::load_config(bad)));
}

TEST_CASE("dynamic theta splits by indicator share") {
  adaptivity::MarkingParams p;
  scenarios::dynamic_theta(p, 1.0, 3.0);
  CHECK(p.theta_tau_top == Approx(0.125));
  CHECK(p.theta_h1_transport_top == Approx(0.375));
  CHECK(p.theta_h2_transport_top == Approx(0.375));
  scenarios::dynamic_theta(p, -2.0, 2.0);
  CHECK(p.theta_tau_top == Approx(0.25));
  const auto before = p.theta_tau_top;
  scenarios::dynamic_theta(p, 0.0, 0.0);
  CHECK(p.theta_tau_top == before);
}

TEST_CASE("scenario lists are aligned") {
  for (const auto &name : scenarios::scenario_names()) {
    const auto sc = scenarios::build_scenario(scenarios::default_scenario(name));
    CHECK_NOTHROW(slabs::audit_alignment(sc.lists.flow, sc.lists.transport));
    CHECK(sc.lists.flow.size() == static_cast<std::size_t>(sc.spec.flow_slabs));
    CHECK(sc.lists.transport.size() == static_cast<std::size_t>(sc.spec.transport_slabs));
  }
}
