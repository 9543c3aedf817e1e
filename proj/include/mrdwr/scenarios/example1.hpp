#pragma once

#include "mrdwr/fem/fe_tools.hpp"

namespace mrdwr::scenarios::ex1 {

using fem::Vec2;
using mesh2d::Point;

/// Divergence-free vortex on the unit square, vanishing on the boundary.
Vec2 velocity(Point x, double t);
double pressure(Point x, double t);
/// Momentum forcing d_t v - nu lap v + grad p.
Vec2 flow_forcing(Point x, double t, double viscosity);

/// Steady shape of the vortex (time factor one) and its forcing.
Vec2 steady_velocity(Point x);
double steady_pressure(Point x);
Vec2 steady_flow_forcing(Point x, double viscosity);

/// Rotating cone whose height and orientation change over each unit period.
double concentration(Point x, double t);
Vec2 concentration_gradient(Point x, double t);
double concentration_rate(Point x, double t);
double concentration_laplacian(Point x, double t);
/// d_t u - eps lap u + v . grad u + alpha u with the exact vortex as v.
double transport_forcing(Point x, double t, double diffusion, double reaction);

struct ConeParameters {
  double steepness = 50.0;
  double scale = -1.0 / 3.0;
};

} // namespace mrdwr::scenarios::ex1
