#include "mrdwr/scenarios/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mrdwr::scenarios::channel {

namespace {
constexpr double eps = 1e-10;
} // namespace

mesh2d::SpatialMesh build_geometry(double root_edge) {
  if (!(root_edge > 0.0))
    throw std::invalid_argument("root edge must be positive");
  const double per_tenth = 0.1 / root_edge;
  const int k = static_cast<int>(std::lround(per_tenth));
  if (k < 1 || std::abs(per_tenth - k) > 1e-9)
    throw std::invalid_argument("root edge must divide 0.1");
  const int unit = 10 * k; // roots per unit length
  std::vector<std::array<int, 2>> roots;
  for (int i = 0; i < 3 * unit; ++i) {
    const bool neck = i >= unit && i < 2 * unit;
    const int j0 = neck ? 4 * k : 0, j1 = neck ? 6 * k : unit;
    for (int j = j0; j < j1; ++j)
      roots.push_back({i, j});
  }
  return mesh2d::SpatialMesh({-1.0, -0.5}, root_edge, std::move(roots));
}

bool on_inflow(Point x) { return std::abs(x.x + 1.0) < eps; }
bool on_outflow(Point x) { return std::abs(x.x - 2.0) < eps; }

Vec2 inflow_velocity(Point x, double t) {
  if (!on_inflow(x) || std::abs(x.y) >= 0.5 - eps)
    return {0.0, 0.0};
  if (t <= 0.1)
    return {std::atan(t) / (0.5 * std::numbers::pi) * (1.0 - 4.0 * x.y * x.y), 0.0};
  return {1.0, 0.0};
}

double inflow_concentration(Point x, double t) {
  return (on_inflow(x) && std::abs(x.y) < 0.4 - eps && t <= 0.1) ? 1.0 : 0.0;
}

} // namespace mrdwr::scenarios::channel
