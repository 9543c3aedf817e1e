#pragma once

#include "mrdwr/fem/fe_tools.hpp"
#include "mrdwr/mesh2d/spatial_mesh.hpp"

namespace mrdwr::scenarios::channel {

using fem::Vec2;
using mesh2d::Point;

/// Two unit squares joined by a 1 x 0.2 constriction:
/// (-1,0)x(-0.5,0.5), (0,1)x(-0.1,0.1), (1,2)x(-0.5,0.5).
/// The root edge must divide the constriction half-height 0.1.
mesh2d::SpatialMesh build_geometry(double root_edge);

constexpr double area = 2.2;

bool on_inflow(Point x);  // x = -1
bool on_outflow(Point x); // x = 2

/// Inlet profile: ramped parabola until t = 0.1, then (1, 0). Zero on walls.
Vec2 inflow_velocity(Point x, double t);
/// 1 on the inlet segment |y| < 0.4 while t <= 0.1, else 0.
double inflow_concentration(Point x, double t);

} // namespace mrdwr::scenarios::channel
