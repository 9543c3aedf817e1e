#pragma once

#include <functional>
#include <vector>

#include "mrdwr/slabs/slab_list.hpp"
#include "mrdwr/stokes/stokes.hpp"
#include "mrdwr/transport/transport.hpp"

namespace mrdwr::estimation {

/// Signed error contributions of one subproblem. For transport the temporal
/// value of slab n is the sum of temporal_cells[n]; for flow temporal_cells
/// stays empty and the totals are root-sum-of-squares (see flow helpers).
struct ErrorIndicators {
  slabs::Subproblem subproblem = slabs::Subproblem::transport;
  std::vector<double> temporal;                     // per slab
  std::vector<std::vector<double>> temporal_cells;  // per slab, per cell
  std::vector<std::vector<double>> spatial;         // per slab, per cell
  double temporal_total = 0.0;
  double spatial_total = 0.0;
};

/// DWR indicators of the transport goal. Needs primal (degree p) and dual
/// (degree q) coefficients stored on every slab.
/// Time: half the primal residual against the dual reconstruction weight plus
/// half the adjoint residual against (1-s)(u^- - u_n), and the flow term with
/// E v - v. The dual reconstruction follows the dual's own direction (through
/// the right neighbour), except on the last slab.
/// Space: the primal residual against z - R_h z in full. The adjoint residual
/// against I_2h u - u vanishes identically here, since that weight lies in the
/// dual's Q2 space, so averaging the two would halve the estimate. Added: SUPG
/// consistency S(u)(R_h z), the I_2h v - v flow term and, on the first slab,
/// the initial interpolation error against z.
ErrorIndicators compute_transport_indicators(const slabs::SlabList &transport,
                                             const transport::VelocityField &field,
                                             const transport::TransportProblem &problem,
                                             const transport::Goal &goal);

enum class FlowTemporalMode {
  jump,        // sqrt(sigma/3) ||v_m - v_{m-1}||, the L2(I;L2) norm of E v - v
  exact_error, // per-slab L2(L2) error against the exact velocity
  window       // jump indicator inside [0, window_end], zero after
};

struct FlowIndicatorOptions {
  FlowTemporalMode mode = FlowTemporalMode::jump;
  std::function<stokes::Vec2(stokes::Point, double)> exact; // exact_error mode
  double window_end = 0.0;                                   // window mode
};

/// Temporal values per flow slab.
std::vector<double> flow_temporal_indicator(const slabs::SlabList &flow, const stokes::FlowProblem &problem,
                                            const FlowIndicatorOptions &options);

/// Temporal values from flow_temporal_indicator and Kelly per cell. Totals:
/// temporal = sqrt(sum of squares), spatial = sqrt(sum_m sigma_m sum_K eta_K^2).
ErrorIndicators compute_flow_indicators(const slabs::SlabList &flow, const stokes::FlowProblem &problem,
                                        const FlowIndicatorOptions &options);

/// |(eta_tau + eta_h) / true_error|; +inf (with a warning on stderr) when
/// the true error is zero.
double effectivity_index(double temporal, double spatial, double true_error);
double effectivity_index(const ErrorIndicators &indicators, double true_error);

} // namespace mrdwr::estimation
