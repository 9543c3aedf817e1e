#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mrdwr/adaptivity/dwr_loop.hpp"

namespace mrdwr::scenarios {

enum class Geometry { unit_square, constricted_channel };

/// Tunable description of a run. Every scalar is reachable as a config key.
struct ScenarioSpec {
  std::string name;
  Geometry geometry = Geometry::unit_square;
  double end_time = 1.0;
  double viscosity = 1.0;
  double diffusion = 1.0;
  double reaction = 0.0;
  double delta0 = 0.0;
  transport::GoalKind goal = transport::GoalKind::space_time_mean;
  int flow_slabs = 1;
  int transport_slabs = 1;
  double root_edge = 1.0;
  int flow_refinements = 0;
  int transport_refinements = 1;
  adaptivity::MarkingParams marking;
  /// theta_h2 and theta_tau follow the indicator split each loop.
  bool dynamic_theta = false;
  estimation::FlowTemporalMode flow_indicator = estimation::FlowTemporalMode::jump;
  double flow_window_end = 0.0;
  adaptivity::FlowDecision flow_decision = adaptivity::FlowDecision::indicators;
  int max_level_flow = 8;
  int max_level_transport = 9;

  /// Exact solutions and forcings are known.
  bool manufactured() const { return name == "ex1"; }
};

std::vector<std::string> scenario_names();
/// Defaults of a named scenario; throws std::invalid_argument if unknown.
ScenarioSpec default_scenario(const std::string &name);

/// Type-checked access by key; unknown keys and malformed values throw
/// std::invalid_argument.
std::vector<std::string> parameter_keys();
void set_parameter(ScenarioSpec &spec, const std::string &key, const std::string &value);
std::string get_parameter(const ScenarioSpec &spec, const std::string &key);
/// "key=value".
void apply_override(ScenarioSpec &spec, const std::string &assignment);

/// INI text. `name` in [scenario] picks the defaults; every other key, in any
/// section, is an override.
ScenarioSpec load_config(std::istream &in);
ScenarioSpec load_config_file(const std::string &path);
void write_config(std::ostream &out, const ScenarioSpec &spec);

/// theta_h = theta_h2 = min(|eta_h| / (|eta_h| + |eta_tau|), 1) / 2 and the
/// same for theta_tau; the first fraction never drops below the second.
void dynamic_theta(adaptivity::MarkingParams &params, double eta_tau, double eta_h);

struct Scenario {
  ScenarioSpec spec;
  slabs::SlabLists lists;
  adaptivity::DwrSetup setup;
};

Scenario build_scenario(const ScenarioSpec &spec);

/// Finite-difference check of the manufactured forcings and of the
/// divergence of the exact velocity at random space-time points.
struct SelfCheck {
  bool passed = true;
  double flow_forcing = 0.0;     // max relative deviation
  double transport_forcing = 0.0;
  double divergence = 0.0;       // max |div v| / max |v|
  std::string message;
};
SelfCheck run_self_check(const ScenarioSpec &spec, int samples = 1000, unsigned seed = 7);

} // namespace mrdwr::scenarios
