#pragma once

#include <functional>
#include <vector>

#include "mrdwr/fem/fe_tools.hpp"
#include "mrdwr/linalg/sparse_matrix.hpp"
#include "mrdwr/mesh2d/constraints.hpp"
#include "mrdwr/slabs/slab_list.hpp"

namespace mrdwr::stokes {

using fem::Vec2;
using mesh2d::Point;

/// Boundary partition. Without an outflow part the whole boundary is
/// Dirichlet and the pressure mean is fixed by a multiplier.
struct FlowBoundary {
  std::function<bool(Point)> outflow;              // do-nothing part; empty means none
  std::function<Vec2(Point, double)> velocity;     // Dirichlet data elsewhere; empty means zero
  bool all_dirichlet() const { return !outflow; }
};

struct FlowProblem {
  double viscosity = 1.0;
  std::function<Vec2(Point, double)> forcing;  // empty means zero
  std::function<Vec2(Point)> initial_velocity; // empty means zero
  FlowBoundary boundary;
  void validate() const;
};

/// Unknown layout [vx | vy | p | multiplier].
struct FlowLayout {
  std::size_t velocity = 0; // per component
  std::size_t pressure = 0;
  bool multiplier = false;
  std::size_t vy_offset() const { return velocity; }
  std::size_t p_offset() const { return 2 * velocity; }
  std::size_t size() const { return 2 * velocity + pressure + (multiplier ? 1 : 0); }
};

FlowLayout flow_layout(const slabs::Slab &slab, const FlowProblem &problem);

/// Hanging constraints of all fields plus Dirichlet velocity rows at time t.
mesh2d::ConstraintSet apply_flow_bc(const slabs::Slab &slab, const FlowProblem &problem, double t);

struct FlowStepOptions {
  double mass_scale = 1.0; // 0 gives the stationary operator
};

struct FlowSystem {
  linalg::SparseMatrix matrix;
  std::vector<double> rhs;
  mesh2d::ConstraintSet constraints;
  FlowLayout layout;
};

/// One dG(0) step on `slab`: (v - v_prev, psi) + sigma [nu (grad v, grad psi)
/// - (p, div psi) + (div v, chi)] = sigma (f(t_mid), psi). `previous` holds
/// [vx | vy] on the slab's own velocity space.
FlowSystem assemble_flow_step(const slabs::Slab &slab, const std::vector<double> &previous,
                              const FlowProblem &problem, FlowStepOptions options = {});

/// Solves the assembled step and returns the distributed coefficients.
std::vector<double> solve_flow_system(const FlowSystem &system);

struct FlowSlabReport {
  double divergence = 0.0;   // max |(div v, chi)| / ||v||
  double orthogonality = 0.0; // relative cell-assembled residual
};

struct FlowState {
  std::vector<FlowSlabReport> reports;
  double max_divergence() const;
  double max_orthogonality() const;
};

/// Sequential forward sweep; the end value of each slab is transferred to
/// the next slab's mesh as its initial value.
FlowState solve_flow_forward(slabs::SlabList &flow, const FlowProblem &problem);

/// Initial value [vx | vy] for slab n of the list (transfer of slab n-1 or
/// interpolation of the initial velocity).
std::vector<double> flow_initial_value(const slabs::SlabList &flow, std::size_t n, const FlowProblem &problem);

/// Velocity components of a solved flow slab.
struct Velocity {
  std::vector<double> x, y;
};
Velocity velocity_of(const slabs::Slab &slab);
std::vector<double> pressure_of(const slabs::Slab &slab);

double weak_divergence_residual(const slabs::Slab &slab, const std::vector<double> &solution);
double flow_orthogonality_residual(const slabs::Slab &slab, const std::vector<double> &previous,
                                   const std::vector<double> &solution, const FlowProblem &problem,
                                   FlowStepOptions options = {});

/// Space-time L2 error of the piecewise constant velocity against `exact`,
/// with `time_points` Gauss points per slab. One point is the temporal rule of
/// the dG(0) scheme itself and is what the reference table reports.
double flow_l2l2_error(const slabs::SlabList &flow, const std::function<Vec2(Point, double)> &exact,
                       int time_points = 1);

/// L2 norm of the velocity on one slab.
double velocity_l2_norm(const slabs::Slab &slab, const std::vector<double> &solution);

} // namespace mrdwr::stokes
