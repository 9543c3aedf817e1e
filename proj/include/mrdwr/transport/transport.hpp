#pragma once

#include <functional>
#include <vector>

#include "mrdwr/fem/fe_tools.hpp"
#include "mrdwr/linalg/sparse_matrix.hpp"
#include "mrdwr/mesh2d/constraints.hpp"
#include "mrdwr/slabs/slab_list.hpp"
#include "mrdwr/stokes/stokes.hpp"

namespace mrdwr::transport {

using fem::Vec2;
using mesh2d::Point;
using stokes::Velocity;

struct TransportCoefficients {
  double diffusion = 1.0;
  double reaction = 0.0;
  double delta0 = 0.0; // SUPG scale; delta_K = delta0 * diam(K)
  void validate() const;
  double delta(double diameter) const { return delta0 * diameter; }
};

struct TransportProblem {
  TransportCoefficients coefficients;
  std::function<double(Point, double)> source;    // empty means zero
  std::function<double(Point)> initial;           // empty means zero
  std::function<double(Point, double)> dirichlet; // on the whole boundary; empty means zero
  int primal_degree = 1;
  int dual_degree = 2;
};

/// Where the convection field comes from: a solved flow slab list or an
/// analytic field. It is always represented as Q2 on the transport mesh.
class VelocityField {
public:
  /// `initial` is the flow's initial velocity, the left datum of the first
  /// flow slab in the time reconstruction.
  static VelocityField from_flow(const slabs::SlabList &flow, std::function<Vec2(Point)> initial = {});
  static VelocityField analytic(std::function<Vec2(Point, double)> field);
  static VelocityField zero();

  Velocity on(const slabs::Slab &slab) const;
  /// Slab mean of E v - v, with E the linear reconstruction over the flow
  /// slab: (1 - s)(v_left - v_own), s the relative position of the transport
  /// midpoint in its flow slab. Zero for analytic fields.
  Velocity temporal_difference(const slabs::Slab &slab) const;
  bool from_flow_list() const { return flow_ != nullptr; }
  const slabs::SlabList *flow() const { return flow_; }

  static constexpr int degree = 2;

private:
  const slabs::SlabList *flow_ = nullptr;
  std::function<Vec2(Point, double)> field_;
  std::function<Vec2(Point)> initial_;
};

/// Per-slab velocities on the transport meshes.
std::vector<Velocity> transport_velocities(const slabs::SlabList &transport, const VelocityField &field);

struct TransportSystem {
  linalg::SparseMatrix matrix; // constrained rows carry placeholders
  std::vector<double> rhs;
  mesh2d::ConstraintSet constraints;
};

/// One SUPG-stabilized dG(0) step in the degree-`degree` space of `slab`:
/// (u - u_prev, phi) + tau a(u)(phi) + sum_K delta_K (u - u_prev + tau(-eps lap u
/// + v.grad u + alpha u - g), v.grad phi)_K = tau (g, phi). `previous` lives
/// on the same space. With `homogeneous` the Dirichlet values are zero.
TransportSystem assemble_primal_step(const slabs::Slab &slab, int degree, const std::vector<double> &previous,
                                     const Velocity &velocity, const TransportProblem &problem,
                                     bool homogeneous = false);

/// Transpose of the full (unconstrained) coupling matrix
/// C = M + sum_K delta_K (phi_j, v.grad phi_i)_K applied to z.
std::vector<double> coupling_transpose_apply(const slabs::Slab &slab, int degree, const Velocity &velocity,
                                             const TransportCoefficients &coefficients,
                                             const std::vector<double> &z);

/// Relative cell-assembled residual of a computed step.
double transport_orthogonality_residual(const slabs::Slab &slab, int degree, const std::vector<double> &previous,
                                        const std::vector<double> &solution, const Velocity &velocity,
                                        const TransportProblem &problem, bool homogeneous = false);

enum class GoalKind { space_time_mean, final_l2_error };

struct Goal {
  GoalKind kind = GoalKind::space_time_mean;
  std::function<double(Point, double)> exact; // required for final_l2_error
  void validate() const;
};

struct TransportState {
  std::vector<Velocity> velocities;
  std::vector<double> orthogonality; // per slab, primal
  std::vector<double> dual_orthogonality;
  double max_orthogonality() const;
};

/// Initial value for slab n in degree `degree`: u0 for n = 0, otherwise the
/// transfer of slab n-1's primal solution.
std::vector<double> primal_initial_value(const slabs::SlabList &transport, std::size_t n,
                                         const TransportProblem &problem);

TransportState solve_primal_forward(slabs::SlabList &transport, const VelocityField &field,
                                    const TransportProblem &problem);

/// Goal derivative on slab n in the dual space (unconstrained vector).
std::vector<double> goal_rhs(const slabs::SlabList &transport, std::size_t n, const TransportProblem &problem,
                             const Goal &goal);

/// Backward sweep of the discrete adjoint in the dual degree; fills slab.dual.
void solve_dual_backward(slabs::SlabList &transport, TransportState &state, const TransportProblem &problem,
                         const Goal &goal);

/// Mean goal: the space-time mean of u. Final goal: ||u(T) - u_N||.
double eval_goal(const slabs::SlabList &transport, const TransportProblem &problem, const Goal &goal);

/// Space-time mean of the discrete solution.
double space_time_mean(const slabs::SlabList &transport, const TransportProblem &problem);
double final_l2_error(const slabs::SlabList &transport, const TransportProblem &problem,
                      const std::function<double(Point, double)> &exact);
/// Smallest nodal value over all slabs.
double min_value(const slabs::SlabList &transport);

} // namespace mrdwr::transport
