#include "mrdwr/adaptivity/dwr_loop.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mrdwr::adaptivity {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

struct SpatialPlan {
  std::vector<mesh2d::CellId> refine, coarsen;
};

// marks for one slab mesh from its cell indicators
SpatialPlan plan_cells(const mesh2d::SpatialMesh &mesh, const std::vector<double> &eta, double top, double bottom,
                       int max_level) {
  SpatialPlan plan;
  for (const auto c : mark_top_fraction(eta, top)) {
    const auto id = mesh.cell(c);
    if (id.level < max_level)
      plan.refine.push_back(id);
  }
  for (const auto c : mark_bottom_fraction(eta, bottom))
    plan.coarsen.push_back(mesh.cell(c));
  return plan;
}

void apply_plan(slabs::Slab &slab, const SpatialPlan &plan) {
  if (plan.refine.empty() && plan.coarsen.empty())
    return;
  auto mesh = slab.mesh();
  mesh.adapt(plan.refine, plan.coarsen);
  slab.set_mesh(std::move(mesh));
}

// transport marks survive forced splits through the original time cell
struct TransportPlan {
  slabs::TimeCell time;
  bool split = false;
  SpatialPlan cells;
};

const TransportPlan &plan_for(const std::vector<TransportPlan> &plans, const slabs::TimeCell &t) {
  const double mid = t.midpoint();
  auto it = std::lower_bound(plans.begin(), plans.end(), mid,
                             [](const TransportPlan &p, double x) { return p.time.right < x; });
  if (it == plans.end())
    throw std::logic_error("transport slab outside the planned time cells");
  return *it;
}

double goal_error_of(const DwrSetup &setup, double value) {
  if (setup.goal.kind == transport::GoalKind::final_l2_error)
    return value;
  if (setup.exact_goal)
    return setup.exact_goal() - value;
  return nan;
}

void fill_sizes(LoopRecord &rec, const slabs::SlabLists &lists) {
  rec.flow_slabs = lists.flow.size();
  rec.flow_max_cells = lists.flow.max_cells();
  rec.flow_dofs = lists.flow.total_dofs();
  rec.transport_slabs = lists.transport.size();
  rec.transport_max_cells = lists.transport.max_cells();
  rec.transport_dofs = lists.transport.total_dofs();
}

int adapt_flow(slabs::SlabLists &lists, const estimation::ErrorIndicators &flow_ind, const MarkingParams &params,
               const DwrSetup &setup, LoopRecord &rec) {
  auto &flow = lists.flow;
  auto time_marks = mark_top_fraction(flow_ind.temporal, params.theta_sigma_top);
  // slabs the indicator switched off are not refined
  std::erase_if(time_marks, [&](std::size_t m) { return flow_ind.temporal[m] == 0.0; });
  std::vector<bool> in_time(flow.size(), false);
  for (const auto m : time_marks)
    in_time[m] = true;

  for (std::size_t m = 0; m < flow.size(); ++m) {
    const double top = in_time[m] ? params.theta_h1_flow_top : params.theta_h2_flow_top;
    apply_plan(flow[m], plan_cells(flow[m].mesh(), flow_ind.spatial[m], top, params.theta_h_flow_bottom,
                                   setup.max_level_flow));
  }
  rec.steps.emplace_back("flow:space");

  int forced = 0;
  for (auto it = time_marks.rbegin(); it != time_marks.rend(); ++it)
    forced += slabs::split_flow_slab(flow, lists.transport, *it);
  rec.steps.emplace_back("flow:time");
  return forced;
}

void adapt_transport(slabs::SlabLists &lists, const std::vector<TransportPlan> &plans, LoopRecord &rec) {
  auto &transport = lists.transport;
  const double tol = transport.tolerance();
  if (rec.mode != TransportMode::time_only) {
    for (auto &slab : transport)
      apply_plan(slab, plan_for(plans, slab.time()).cells);
    rec.steps.emplace_back("transport:space");
  }
  if (rec.mode != TransportMode::space_only) {
    for (std::size_t n = transport.size(); n-- > 0;) {
      const auto &plan = plan_for(plans, transport[n].time());
      // a forced split has already halved this cell
      if (plan.split && std::abs(transport[n].time().length() - plan.time.length()) <= tol)
        slabs::split_slab_in_time(transport, n);
    }
    rec.steps.emplace_back("transport:time");
  }
}

} // namespace

void LoopState::append(LoopRecord record) {
  if (!records.empty() && record.loop <= records.back().loop)
    throw std::logic_error("loop index must increase");
  records.push_back(std::move(record));
}

LoopState run_dwr_loop(slabs::SlabLists &lists, const DwrSetup &setup, MarkingParams params,
                       const LoopHooks &hooks) {
  params.validate();
  setup.goal.validate();
  slabs::audit_alignment(lists.flow, lists.transport);
  LoopState state;

  for (int loop = 1;; ++loop) {
    const auto start = std::chrono::steady_clock::now();
    LoopRecord rec;
    rec.loop = loop;
    fill_sizes(rec, lists);

    // Steps 1-2: flow, then primal transport
    const auto flow_state = stokes::solve_flow_forward(lists.flow, setup.flow);
    rec.max_divergence = flow_state.max_divergence();
    rec.flow_orthogonality = flow_state.max_orthogonality();
    const auto field = setup.analytic_velocity
                           ? transport::VelocityField::analytic(setup.analytic_velocity)
                           : transport::VelocityField::from_flow(lists.flow, setup.flow.initial_velocity);
    auto tstate = transport::solve_primal_forward(lists.transport, field, setup.transport);
    rec.transport_orthogonality = tstate.max_orthogonality();
    rec.min_transport = transport::min_value(lists.transport);
    rec.goal_value = transport::eval_goal(lists.transport, setup.transport, setup.goal);
    rec.goal_error = goal_error_of(setup, rec.goal_value);

    const auto flow_ind = estimation::compute_flow_indicators(lists.flow, setup.flow, setup.flow_indicator);
    rec.flow_eta_tau = flow_ind.temporal_total;
    rec.flow_eta_h = flow_ind.spatial_total;
    rec.flow_error_or_indicator = setup.flow_indicator.mode == estimation::FlowTemporalMode::exact_error
                                      ? flow_ind.temporal_total
                                      : flow_ind.temporal_total + flow_ind.spatial_total;
    rec.eta_h = rec.eta_tau = rec.effectivity = nan;

    // Step 3
    const bool converged = params.goal_tolerance > 0.0 && std::isfinite(rec.goal_error) &&
                           std::abs(rec.goal_error) < params.goal_tolerance;
    if (converged) {
      if (hooks.on_solved)
        hooks.on_solved(loop, lists);
      rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (hooks.log)
        *hooks.log << format_record(rec) << " (goal tolerance reached)\n";
      if (hooks.on_record)
        hooks.on_record(rec);
      state.append(std::move(rec));
      break;
    }

    // Steps 4-5
    transport::solve_dual_backward(lists.transport, tstate, setup.transport, setup.goal);
    rec.dual_solved = true;
    rec.dual_orthogonality = *std::max_element(tstate.dual_orthogonality.begin(), tstate.dual_orthogonality.end());
    const auto ind = estimation::compute_transport_indicators(lists.transport, field, setup.transport, setup.goal);
    rec.eta_tau = ind.temporal_total;
    rec.eta_h = ind.spatial_total;
    if (std::isfinite(rec.goal_error))
      rec.effectivity = rec.goal_error == 0.0 ? std::numeric_limits<double>::infinity()
                                              : std::abs((rec.eta_tau + rec.eta_h) / rec.goal_error);
    if (hooks.on_solved)
      hooks.on_solved(loop, lists);

    const bool last = loop >= params.max_loops;
    if (!last) {
      if (setup.update_params) {
        setup.update_params(params, rec.eta_tau, rec.eta_h);
        params.validate();
      }
      // transport marks first, against the unchanged list
      rec.mode = decide_transport_mode(rec.eta_tau, rec.eta_h, params.omega);
      std::vector<TransportPlan> plans(lists.transport.size());
      for (std::size_t n = 0; n < plans.size(); ++n)
        plans[n].time = lists.transport[n].time();
      if (rec.mode != TransportMode::space_only)
        for (const auto n : mark_top_fraction(ind.temporal, params.theta_tau_top)) {
          plans[n].split = true;
          ++rec.transport_time_marks;
        }
      if (rec.mode != TransportMode::time_only)
        for (std::size_t n = 0; n < plans.size(); ++n) {
          const double top = plans[n].split ? params.theta_h1_transport_top : params.theta_h2_transport_top;
          plans[n].cells = plan_cells(lists.transport[n].mesh(), ind.spatial[n], top,
                                      params.theta_h_transport_bottom, setup.max_level_transport);
          rec.transport_space_marks += plans[n].cells.refine.size();
        }

      // Step 6
      if (setup.flow_decision == FlowDecision::proxy_vs_goal_error)
        rec.flow_refined = rec.flow_error_or_indicator > std::abs(rec.goal_error);
      else
        rec.flow_refined = decide_flow_refinement(flow_ind.temporal_total, flow_ind.spatial_total, rec.eta_tau,
                                                  rec.eta_h, params.varpi);
      if (rec.flow_refined)
        rec.forced_splits = adapt_flow(lists, flow_ind, params, setup, rec);

      // Step 7
      adapt_transport(lists, plans, rec);
      rec.adapted = true;
      slabs::audit_alignment(lists.flow, lists.transport);
    }

    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (hooks.log)
      *hooks.log << format_record(rec) << '\n';
    if (hooks.on_record)
      hooks.on_record(rec);
    state.append(std::move(rec));
    if (last)
      break;
  }
  return state;
}

namespace {

void cell(std::ostream &out, double v) {
  if (std::isfinite(v))
    out << v;
}

} // namespace

void write_trace_csv(std::ostream &out, const LoopState &state) {
  out << "loop,N_f,N_K_f_max,dofs_f,flow_err_or_ind,N_t,N_K_t_max,dofs_t,goal_err,eta_h,eta_tau,I_eff\n";
  const auto flags = out.flags();
  out << std::setprecision(6) << std::scientific;
  for (const auto &r : state.records) {
    out << r.loop << ',' << r.flow_slabs << ',' << r.flow_max_cells << ',' << r.flow_dofs << ',';
    cell(out, r.flow_error_or_indicator);
    out << ',' << r.transport_slabs << ',' << r.transport_max_cells << ',' << r.transport_dofs << ',';
    cell(out, r.goal_error);
    out << ',';
    cell(out, r.eta_h);
    out << ',';
    cell(out, r.eta_tau);
    out << ',';
    cell(out, r.effectivity);
    out << '\n';
  }
  out.flags(flags);
}

std::string format_record(const LoopRecord &r) {
  std::ostringstream s;
  s << std::setprecision(3) << std::scientific;
  s << "loop " << r.loop << ": flow " << r.flow_slabs << " slabs/" << r.flow_max_cells << " cells, transport "
    << r.transport_slabs << " slabs/" << r.transport_max_cells << " cells/" << r.transport_dofs << " dofs, J "
    << r.goal_value << " min u " << r.min_transport;
  if (std::isfinite(r.goal_error))
    s << " err " << r.goal_error;
  if (r.dual_solved)
    s << " eta_h " << r.eta_h << " eta_tau " << r.eta_tau;
  if (std::isfinite(r.effectivity))
    s << std::fixed << std::setprecision(2) << " I_eff " << r.effectivity;
  if (r.adapted) {
    s << " | " << (r.flow_refined ? "flow refined" : "flow kept") << ", transport " << to_string(r.mode);
    if (r.forced_splits > 0)
      s << ", " << r.forced_splits << " forced splits";
  }
  s << std::fixed << std::setprecision(1) << " (" << r.seconds << " s)";
  return s.str();
}

} // namespace mrdwr::adaptivity
