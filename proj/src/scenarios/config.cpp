#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mrdwr/scenarios/scenario.hpp"

namespace mrdwr::scenarios {

namespace {

using Setter = std::function<void(ScenarioSpec &, const std::string &)>;
using Getter = std::function<std::string(const ScenarioSpec &)>;

struct Entry {
  std::string section;
  Setter set;
  Getter get;
};

[[noreturn]] void bad_value(const std::string &key, const std::string &value, const char *kind) {
  throw std::invalid_argument("parameter '" + key + "' expects " + kind + ", got '" + value + "'");
}

double parse_double(const std::string &key, const std::string &v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception &) {
    bad_value(key, v, "a number");
  }
  if (used != v.size())
    bad_value(key, v, "a number");
  return out;
}

int parse_int(const std::string &key, const std::string &v) {
  std::size_t used = 0;
  int out = 0;
  try {
    out = std::stoi(v, &used);
  } catch (const std::exception &) {
    bad_value(key, v, "an integer");
  }
  if (used != v.size())
    bad_value(key, v, "an integer");
  return out;
}

bool parse_bool(const std::string &key, const std::string &v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on")
    return true;
  if (v == "false" || v == "0" || v == "no" || v == "off")
    return false;
  bad_value(key, v, "a boolean");
}

// shortest text that reads back to the same double
std::string show(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T>
std::pair<std::string, Entry> real(const std::string &section, const std::string &key, T member) {
  return {key, Entry{section, [key, member](ScenarioSpec &s, const std::string &v) { member(s) = parse_double(key, v); },
                     [member](const ScenarioSpec &s) { return show(member(s)); }}};
}

template <class T>
std::pair<std::string, Entry> integer(const std::string &section, const std::string &key, T member) {
  return {key, Entry{section, [key, member](ScenarioSpec &s, const std::string &v) { member(s) = parse_int(key, v); },
                     [member](const ScenarioSpec &s) {
                       return std::to_string(member(s));
                     }}};
}

template <class T>
std::pair<std::string, Entry> boolean(const std::string &section, const std::string &key, T member) {
  return {key, Entry{section, [key, member](ScenarioSpec &s, const std::string &v) { member(s) = parse_bool(key, v); },
                     [member](const ScenarioSpec &s) {
                       return std::string(member(s) ? "true" : "false");
                     }}};
}

// enum keys map names both ways
template <class E, class T>
std::pair<std::string, Entry> choice(const std::string &section, const std::string &key, T member,
                                     std::vector<std::pair<std::string, E>> names) {
  return {key, Entry{section,
                     [key, member, names](ScenarioSpec &s, const std::string &v) {
                       for (const auto &[n, e] : names)
                         if (n == v) {
                           member(s) = e;
                           return;
                         }
                       std::string all;
                       for (const auto &p : names)
                         all += (all.empty() ? "" : "|") + p.first;
                       bad_value(key, v, all.c_str());
                     },
                     [member, names](const ScenarioSpec &s) {
                       const E e = member(s);
                       for (const auto &[n, x] : names)
                         if (x == e)
                           return n;
                       return std::string("?");
                     }}};
}

// works on const and mutable specs alike
#define FIELD(expr) [](auto &s) -> auto & { return s.expr; }

const std::map<std::string, Entry> &table() {
  using adaptivity::FlowDecision;
  using estimation::FlowTemporalMode;
  using transport::GoalKind;
  static const std::map<std::string, Entry> t = {
      choice<Geometry>("scenario", "geometry", FIELD(geometry),
                       {{"unit_square", Geometry::unit_square}, {"channel", Geometry::constricted_channel}}),
      real("scenario", "end_time", FIELD(end_time)),
      choice<GoalKind>("scenario", "goal", FIELD(goal),
                       {{"mean", GoalKind::space_time_mean}, {"final_l2", GoalKind::final_l2_error}}),
      real("coefficients", "viscosity", FIELD(viscosity)),
      real("coefficients", "diffusion", FIELD(diffusion)),
      real("coefficients", "reaction", FIELD(reaction)),
      real("coefficients", "delta0", FIELD(delta0)),
      integer("discretization", "flow_slabs", FIELD(flow_slabs)),
      integer("discretization", "transport_slabs", FIELD(transport_slabs)),
      real("discretization", "root_edge", FIELD(root_edge)),
      integer("discretization", "flow_refinements", FIELD(flow_refinements)),
      integer("discretization", "transport_refinements", FIELD(transport_refinements)),
      integer("discretization", "max_level_flow", FIELD(max_level_flow)),
      integer("discretization", "max_level_transport", FIELD(max_level_transport)),
      real("marking", "theta_tau_top", FIELD(marking.theta_tau_top)),
      real("marking", "theta_h1_transport_top", FIELD(marking.theta_h1_transport_top)),
      real("marking", "theta_h2_transport_top", FIELD(marking.theta_h2_transport_top)),
      real("marking", "theta_h_transport_bottom", FIELD(marking.theta_h_transport_bottom)),
      real("marking", "theta_sigma_top", FIELD(marking.theta_sigma_top)),
      real("marking", "theta_h1_flow_top", FIELD(marking.theta_h1_flow_top)),
      real("marking", "theta_h2_flow_top", FIELD(marking.theta_h2_flow_top)),
      real("marking", "theta_h_flow_bottom", FIELD(marking.theta_h_flow_bottom)),
      real("marking", "varpi", FIELD(marking.varpi)),
      real("marking", "omega", FIELD(marking.omega)),
      integer("marking", "max_loops", FIELD(marking.max_loops)),
      real("marking", "goal_tolerance", FIELD(marking.goal_tolerance)),
      boolean("marking", "dynamic_theta", FIELD(dynamic_theta)),
      choice<FlowTemporalMode>("flow", "flow_indicator", FIELD(flow_indicator),
                               {{"jump", FlowTemporalMode::jump},
                                {"exact_error", FlowTemporalMode::exact_error},
                                {"window", FlowTemporalMode::window}}),
      real("flow", "flow_window_end", FIELD(flow_window_end)),
      choice<FlowDecision>("flow", "flow_decision", FIELD(flow_decision),
                           {{"indicators", FlowDecision::indicators},
                            {"proxy", FlowDecision::proxy_vs_goal_error}}),
  };
  return t;
}

#undef FIELD

const Entry &entry(const std::string &key) {
  const auto &t = table();
  const auto it = t.find(key);
  if (it == t.end())
    throw std::invalid_argument("unknown parameter '" + key + "'");
  return it->second;
}

} // namespace

std::vector<std::string> parameter_keys() {
  std::vector<std::string> keys;
  for (const auto &[k, e] : table())
    keys.push_back(k);
  return keys;
}

void set_parameter(ScenarioSpec &spec, const std::string &key, const std::string &value) {
  entry(key).set(spec, value);
}

std::string get_parameter(const ScenarioSpec &spec, const std::string &key) { return entry(key).get(spec); }

void apply_override(ScenarioSpec &spec, const std::string &assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("override must look like key=value: '" + assignment + "'");
  set_parameter(spec, assignment.substr(0, eq), assignment.substr(eq + 1));
}

ScenarioSpec load_config(std::istream &in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error &e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  const auto name = tree.get_optional<std::string>("scenario.name");
  if (!name)
    throw std::invalid_argument("config: [scenario] name is required");
  ScenarioSpec spec = default_scenario(*name);
  for (const auto &[section, keys] : tree) {
    if (keys.empty())
      throw std::invalid_argument("config: key '" + section + "' outside a section");
    for (const auto &[key, value] : keys) {
      if (section == "scenario" && key == "name")
        continue;
      set_parameter(spec, key, value.data());
    }
  }
  return spec;
}

ScenarioSpec load_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open config '" + path + "'");
  return load_config(in);
}

void write_config(std::ostream &out, const ScenarioSpec &spec) {
  std::map<std::string, std::vector<std::string>> by_section;
  for (const auto &[k, e] : table())
    by_section[e.section].push_back(k);
  out << "[scenario]\nname = " << spec.name << '\n';
  for (const auto &k : by_section["scenario"])
    out << k << " = " << get_parameter(spec, k) << '\n';
  for (const auto &[section, keys] : by_section) {
    if (section == "scenario")
      continue;
    out << '\n' << '[' << section << "]\n";
    for (const auto &k : keys)
      out << k << " = " << get_parameter(spec, k) << '\n';
  }
}

} // namespace mrdwr::scenarios
