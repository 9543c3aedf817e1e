#include "mrdwr/scenarios/example1.hpp"

#include <cmath>
#include <numbers>

namespace mrdwr::scenarios::ex1 {

namespace {

constexpr double pi = std::numbers::pi;
constexpr ConeParameters cone{};

struct Shape {
  double s1, s2;     // velocity shape
  double l1, l2;     // its Laplacian
  double px, py;     // pressure gradient shape
};

Shape shape(Point x) {
  const double c2x = std::cos(2 * pi * x.x), s2x = std::sin(2 * pi * x.x);
  const double c2y = std::cos(2 * pi * x.y), s2y = std::sin(2 * pi * x.y);
  return {(1 - c2x) * s2y / 4,
          -s2x * (1 - c2y) / 4,
          pi * pi * s2y * (2 * c2x - 1),
          pi * pi * s2x * (1 - 2 * c2y),
          0.5 * pi * c2x * s2y,
          0.5 * pi * s2x * c2y};
}

struct Centre {
  double m1, m2, d1, d2;
};

Centre centre(double t) {
  return {0.5 + 0.25 * std::cos(2 * pi * t), 0.5 + 0.25 * std::sin(2 * pi * t), -0.5 * pi * std::sin(2 * pi * t),
          0.5 * pi * std::cos(2 * pi * t)};
}

// height factor and its time derivative
std::pair<double, double> height(double t) {
  double th = t - std::floor(t);
  double sign = -1.0;
  if (th >= 0.5) {
    th -= 0.5;
    sign = 1.0;
  }
  const double arg = 5 * pi * (4 * th - 1);
  return {sign * cone.scale * std::atan(arg), sign * cone.scale * 20 * pi / (1 + arg * arg)};
}

struct Bump {
  double u1, r, dx, dy;
};

Bump bump(Point x, double t) {
  const auto c = centre(t);
  const double dx = x.x - c.m1, dy = x.y - c.m2;
  const double r = dx * dx + dy * dy;
  return {1.0 / (1.0 + cone.steepness * r), r, dx, dy};
}

} // namespace

Vec2 velocity(Point x, double t) {
  const auto s = shape(x);
  return {std::sin(t) * s.s1, std::sin(t) * s.s2};
}

double pressure(Point x, double t) {
  return std::sin(t) * std::sin(2 * pi * x.x) * std::sin(2 * pi * x.y) / 4;
}

Vec2 flow_forcing(Point x, double t, double viscosity) {
  const auto s = shape(x);
  const double st = std::sin(t), ct = std::cos(t);
  return {ct * s.s1 - viscosity * st * s.l1 + st * s.px, ct * s.s2 - viscosity * st * s.l2 + st * s.py};
}

Vec2 steady_velocity(Point x) {
  const auto s = shape(x);
  return {s.s1, s.s2};
}

double steady_pressure(Point x) { return std::sin(2 * pi * x.x) * std::sin(2 * pi * x.y) / 4; }

Vec2 steady_flow_forcing(Point x, double viscosity) {
  const auto s = shape(x);
  return {-viscosity * s.l1 + s.px, -viscosity * s.l2 + s.py};
}

double concentration(Point x, double t) { return bump(x, t).u1 * height(t).first; }

Vec2 concentration_gradient(Point x, double t) {
  const auto b = bump(x, t);
  const double f = -cone.steepness * b.u1 * b.u1 * height(t).first * 2;
  return {f * b.dx, f * b.dy};
}

double concentration_rate(Point x, double t) {
  const auto b = bump(x, t);
  const auto c = centre(t);
  const auto [h, dh] = height(t);
  const double dr = -2 * b.dx * c.d1 - 2 * b.dy * c.d2;
  return -cone.steepness * b.u1 * b.u1 * dr * h + b.u1 * dh;
}

double concentration_laplacian(Point x, double t) {
  const auto b = bump(x, t);
  const double a = cone.steepness;
  return height(t).first * (8 * a * a * b.u1 * b.u1 * b.u1 * b.r - 4 * a * b.u1 * b.u1);
}

double transport_forcing(Point x, double t, double diffusion, double reaction) {
  const Vec2 v = velocity(x, t);
  const Vec2 g = concentration_gradient(x, t);
  return concentration_rate(x, t) - diffusion * concentration_laplacian(x, t) + v[0] * g[0] + v[1] * g[1] +
         reaction * concentration(x, t);
}

} // namespace mrdwr::scenarios::ex1
