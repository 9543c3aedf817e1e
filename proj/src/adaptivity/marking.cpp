#include "mrdwr/adaptivity/marking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mrdwr::adaptivity {

namespace {

void check_fraction(double v, const char *name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
}

// indices sorted by descending magnitude, stable so ties keep index order
std::vector<std::size_t> by_magnitude(const std::vector<double> &values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(values[a]) > std::abs(values[b]); });
  return order;
}

} // namespace

void MarkingParams::validate() const {
  check_fraction(theta_tau_top, "theta_tau_top");
  check_fraction(theta_h1_transport_top, "theta_h1_transport_top");
  check_fraction(theta_h2_transport_top, "theta_h2_transport_top");
  check_fraction(theta_h_transport_bottom, "theta_h_transport_bottom");
  check_fraction(theta_sigma_top, "theta_sigma_top");
  check_fraction(theta_h1_flow_top, "theta_h1_flow_top");
  check_fraction(theta_h2_flow_top, "theta_h2_flow_top");
  check_fraction(theta_h_flow_bottom, "theta_h_flow_bottom");
  if (theta_h2_transport_top > theta_h1_transport_top || theta_h2_flow_top > theta_h1_flow_top)
    throw std::invalid_argument("theta_h2 must not exceed theta_h1");
  if (!(varpi >= 1.0) || !(omega >= 1.0))
    throw std::invalid_argument("varpi and omega must be at least 1");
  if (max_loops < 1)
    throw std::invalid_argument("max_loops must be positive");
  if (!(goal_tolerance >= 0.0))
    throw std::invalid_argument("goal_tolerance must be non-negative");
}

std::vector<std::size_t> mark_top_fraction(const std::vector<double> &values, double theta) {
  check_fraction(theta, "theta");
  const auto count = static_cast<std::size_t>(std::ceil(theta * static_cast<double>(values.size()) - 1e-12));
  auto order = by_magnitude(values);
  order.resize(std::min(count, order.size()));
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<std::size_t> mark_bottom_fraction(const std::vector<double> &values, double theta) {
  check_fraction(theta, "theta");
  const auto count = static_cast<std::size_t>(std::floor(theta * static_cast<double>(values.size()) + 1e-12));
  auto order = by_magnitude(values);
  std::reverse(order.begin(), order.end());
  order.resize(std::min(count, order.size()));
  std::sort(order.begin(), order.end());
  return order;
}

bool decide_flow_refinement(double flow_temporal, double flow_spatial, double transport_temporal,
                            double transport_spatial, double varpi) {
  return std::abs(flow_temporal) + std::abs(flow_spatial) >
         varpi * std::abs(transport_temporal) + std::abs(transport_spatial);
}

const char *to_string(TransportMode mode) {
  switch (mode) {
  case TransportMode::time_only: return "time";
  case TransportMode::space_only: return "space";
  default: return "both";
  }
}

TransportMode decide_transport_mode(double eta_tau, double eta_h, double omega) {
  if (!(omega >= 1.0))
    throw std::invalid_argument("omega must be at least 1");
  const double t = std::abs(eta_tau), h = std::abs(eta_h);
  if (t > omega * h)
    return TransportMode::time_only;
  if (h > omega * t)
    return TransportMode::space_only;
  return TransportMode::both;
}

} // namespace mrdwr::adaptivity
