#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mrdwr/fem/fe_tools.hpp"
#include "mrdwr/mesh2d/vtk.hpp"
#include "mrdwr/scenarios/scenario.hpp"
#include "mrdwr/stokes/stokes.hpp"

namespace fs = std::filesystem;
using namespace mrdwr;

namespace {

constexpr int usage_error = 2;

void print_characteristic_times(const scenarios::ScenarioSpec &spec) {
  // reference length and speed per geometry
  const double length = 1.0;
  const double speed = spec.geometry == scenarios::Geometry::unit_square ? 0.25 : 1.0;
  if (spec.reaction > 0.0 && spec.diffusion > 0.0) {
    const auto ct = slabs::compute_characteristic_times(spec.diffusion, spec.reaction, length, speed);
    std::cout << "characteristic times: flow " << ct.flow << ", transport " << ct.transport << '\n';
  }
}

// transport and flow fields at the ends of the slabs nearest to T/4, T/2, 3T/4, T
void write_snapshots(const fs::path &dir, int loop, const slabs::SlabLists &lists) {
  fs::create_directories(dir);
  const double end = lists.transport.end_time();
  for (int k = 1; k <= 4; ++k) {
    const double t = end * k / 4.0;
    const auto &ts = lists.transport[lists.transport.find(t)];
    const auto &flow_slab = lists.flow[lists.flow.find(t)];
    std::ostringstream stem;
    stem << "loop" << loop << "_q" << k;
    std::vector<mesh2d::CornerField> fields{fem::corner_field(ts.dofs(ts.degree()), "concentration", ts.primal)};
    if (!ts.dual.empty())
      fields.push_back(fem::corner_field(ts.dofs(2), "dual", ts.dual));
    mesh2d::write_vtk((dir / (stem.str() + "_transport.vtk")).string(), ts.mesh(), fields);
    const auto v = stokes::velocity_of(flow_slab);
    mesh2d::write_vtk((dir / (stem.str() + "_flow.vtk")).string(), flow_slab.mesh(),
                      {fem::corner_field(flow_slab.dofs(2), "velocity", v.x, v.y)});
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Multirate DWR space-time adaptivity for coupled flow and transport"};
  std::string config, scenario, out_dir;
  int loops = 0, snapshots = 0;
  double tol = -1.0;
  std::vector<std::string> overrides;
  bool skip_selfcheck = false, print_config = false;
  app.add_option("config", config, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--scenario", scenario, "built-in scenario: ex1, ex2, ex3");
  app.add_option("--loops", loops, "maximum number of DWR loops")->check(CLI::PositiveNumber);
  app.add_option("--tol", tol, "goal error tolerance (manufactured scenarios)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_dir, "output directory (default runs/<scenario>)");
  app.add_option("--set", overrides, "override a parameter, key=value (repeatable)")->take_all();
  app.add_option("--snapshots", snapshots, "write VTK snapshots every N loops and at the last one")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--skip-selfcheck", skip_selfcheck, "skip the forcing self-check");
  app.add_flag("--print-config", print_config, "print the effective configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : usage_error;
  }
  if (config.empty() == scenario.empty()) {
    std::cerr << "error: give either a config file or --scenario\n\n" << app.help();
    return usage_error;
  }

  scenarios::ScenarioSpec spec;
  try {
    spec = config.empty() ? scenarios::default_scenario(scenario) : scenarios::load_config_file(config);
    for (const auto &o : overrides)
      scenarios::apply_override(spec, o);
    if (loops > 0)
      spec.marking.max_loops = loops;
    if (tol >= 0.0)
      spec.marking.goal_tolerance = tol;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage_error;
  }
  if (print_config) {
    scenarios::write_config(std::cout, spec);
    return 0;
  }

  try {
    const fs::path out = out_dir.empty() ? fs::path("runs") / spec.name : fs::path(out_dir);
    fs::create_directories(out);
    {
      std::ofstream cfg(out / "config.ini");
      if (!cfg)
        throw std::runtime_error("cannot write to output directory " + out.string());
      scenarios::write_config(cfg, spec);
    }

    print_characteristic_times(spec);
    if (!skip_selfcheck && spec.manufactured()) {
      const auto check = scenarios::run_self_check(spec);
      std::cout << check.message << '\n';
      if (!check.passed)
        return 1;
    }

    auto sc = scenarios::build_scenario(spec);
    adaptivity::LoopHooks hooks;
    hooks.log = &std::cout;
    const int last = spec.marking.max_loops;
    if (snapshots > 0)
      hooks.on_solved = [&](int loop, const slabs::SlabLists &lists) {
        if (loop % snapshots == 0 || loop == last)
          write_snapshots(out / "vtk", loop, lists);
      };
    std::ofstream trace_file(out / "trace.csv");
    const auto state = adaptivity::run_dwr_loop(sc.lists, sc.setup, spec.marking, hooks);
    adaptivity::write_trace_csv(trace_file, state);
    std::ofstream slabs_file(out / "slabs.csv");
    slabs::write_slabs_csv(slabs_file, sc.lists.flow, sc.lists.transport);
    std::cout << "wrote " << (out / "trace.csv").string() << " and " << (out / "slabs.csv").string() << '\n';
  } catch (const std::exception &e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
