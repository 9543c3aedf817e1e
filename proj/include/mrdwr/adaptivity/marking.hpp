#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mrdwr::adaptivity {

/// Fractions of the marking strategy and the equilibration constants.
/// `_1` fractions apply to slabs also marked in time, `_2` to the others.
struct MarkingParams {
  double theta_tau_top = 0.5;
  double theta_h1_transport_top = 0.5;
  double theta_h2_transport_top = 0.5;
  double theta_h_transport_bottom = 0.0;
  double theta_sigma_top = 1.0;
  double theta_h1_flow_top = 0.5;
  double theta_h2_flow_top = 0.5;
  double theta_h_flow_bottom = 0.0;
  double varpi = 1.0; // flow vs transport balance
  double omega = 2.0; // time vs space balance
  int max_loops = 10;
  double goal_tolerance = 0.0; // 0 disables the tolerance stop

  /// Throws std::invalid_argument on fractions outside [0,1], varpi or
  /// omega below one, or a `_2` fraction above its `_1` counterpart.
  void validate() const;
};

/// The ceil(theta N) indices of largest |value|, ties to the lower index,
/// returned in ascending order.
std::vector<std::size_t> mark_top_fraction(const std::vector<double> &values, double theta);

/// The floor(theta N) indices of smallest |value|, ties to the higher index.
std::vector<std::size_t> mark_bottom_fraction(const std::vector<double> &values, double theta);

/// |flow_temporal| + |flow_spatial| > varpi |transport_temporal| + |transport_spatial|.
bool decide_flow_refinement(double flow_temporal, double flow_spatial, double transport_temporal,
                            double transport_spatial, double varpi);

enum class TransportMode { time_only, space_only, both };
const char *to_string(TransportMode mode);

TransportMode decide_transport_mode(double eta_tau, double eta_h, double omega);

} // namespace mrdwr::adaptivity
