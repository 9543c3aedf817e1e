#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mrdwr/adaptivity/marking.hpp"
#include "mrdwr/estimation/indicators.hpp"
#include "mrdwr/slabs/slab_list.hpp"
#include "mrdwr/stokes/stokes.hpp"
#include "mrdwr/transport/transport.hpp"

namespace mrdwr::adaptivity {

/// How the loop decides whether the flow gets refined.
enum class FlowDecision {
  indicators,        // flow indicator sums against varpi-weighted transport sums
  proxy_vs_goal_error // flow error proxy against the true goal error
};

/// Everything the loop needs besides the slab lists and the marking fractions.
struct DwrSetup {
  stokes::FlowProblem flow;
  transport::TransportProblem transport;
  transport::Goal goal;
  estimation::FlowIndicatorOptions flow_indicator;
  FlowDecision flow_decision = FlowDecision::indicators;
  /// Exact goal value for the mean goal; unset means unknown. The final-L2
  /// goal is an error itself and needs no reference value.
  std::function<double()> exact_goal;
  /// Replaces the computed flow as the transport velocity when set.
  std::function<stokes::Vec2(stokes::Point, double)> analytic_velocity;
  /// Called once per loop after the indicators, before marking.
  std::function<void(MarkingParams &, double eta_tau, double eta_h)> update_params;
  int max_level_flow = 8;
  int max_level_transport = 9;
};

/// One row of the loop trace.
struct LoopRecord {
  int loop = 0;
  std::size_t flow_slabs = 0, flow_max_cells = 0, flow_dofs = 0;
  double flow_error_or_indicator = 0.0;
  std::size_t transport_slabs = 0, transport_max_cells = 0, transport_dofs = 0;
  double goal_value = 0.0;
  double goal_error = 0.0; // NaN when unknown
  double eta_h = 0.0, eta_tau = 0.0;
  double flow_eta_tau = 0.0, flow_eta_h = 0.0;
  double effectivity = 0.0; // NaN when unknown or not computed
  bool dual_solved = false;
  bool adapted = false;
  bool flow_refined = false;
  TransportMode mode = TransportMode::both;
  std::size_t transport_time_marks = 0, transport_space_marks = 0;
  int forced_splits = 0;
  double min_transport = 0.0;
  double max_divergence = 0.0;
  double flow_orthogonality = 0.0, transport_orthogonality = 0.0, dual_orthogonality = 0.0;
  double seconds = 0.0;
  /// Executed adaptation steps in order, e.g. "flow:space", "transport:time".
  std::vector<std::string> steps;
};

struct LoopState {
  std::vector<LoopRecord> records;
  /// Appends; the loop index must increase strictly.
  void append(LoopRecord record);
};

struct LoopHooks {
  std::function<void(const LoopRecord &)> on_record;
  /// After the solves of a loop (and the dual when computed).
  std::function<void(int loop, const slabs::SlabLists &)> on_solved;
  std::ostream *log = nullptr;
};

/// Solve, estimate, mark and adapt until the goal tolerance or the loop
/// budget is reached. The last loop is estimated but not adapted.
LoopState run_dwr_loop(slabs::SlabLists &lists, const DwrSetup &setup, MarkingParams params,
                       const LoopHooks &hooks = {});

/// Header plus one line per record; NaN cells stay empty.
void write_trace_csv(std::ostream &out, const LoopState &state);
std::string format_record(const LoopRecord &record);

} // namespace mrdwr::adaptivity
