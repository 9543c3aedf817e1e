#include "mrdwr/fem/lagrange.hpp"

#include <stdexcept>

namespace mrdwr::fem {

void lagrange_1d(int p, double x, double *values, double *first, double *second) {
  if (p < 1 || p > 4)
    throw std::invalid_argument("Lagrange degree must be in 1..4");
  double nodes[5];
  for (int k = 0; k <= p; ++k)
    nodes[k] = static_cast<double>(k) / p;
  for (int a = 0; a <= p; ++a) {
    double denom = 1.0;
    for (int m = 0; m <= p; ++m)
      if (m != a)
        denom *= nodes[a] - nodes[m];
    // product rule written out over the factors (x - x_m), m != a
    double v = 1.0, d1 = 0.0, d2 = 0.0;
    for (int m = 0; m <= p; ++m) {
      if (m == a)
        continue;
      const double f = x - nodes[m];
      d2 = d2 * f + 2.0 * d1;
      d1 = d1 * f + v;
      v = v * f;
    }
    if (values)
      values[a] = v / denom;
    if (first)
      first[a] = d1 / denom;
    if (second)
      second[a] = d2 / denom;
  }
}

ShapeValues shape_eval(int p, Point ref) {
  double vx[5], dx[5], sx[5], vy[5], dy[5], sy[5];
  lagrange_1d(p, ref.x, vx, dx, sx);
  lagrange_1d(p, ref.y, vy, dy, sy);
  const int n = shape_count(p);
  ShapeValues out;
  out.values.resize(n);
  out.gradients.resize(n);
  out.second.resize(n);
  for (int b = 0; b <= p; ++b)
    for (int a = 0; a <= p; ++a) {
      const int k = b * (p + 1) + a;
      out.values[k] = vx[a] * vy[b];
      out.gradients[k] = {dx[a] * vy[b], vx[a] * dy[b]};
      out.second[k] = {sx[a] * vy[b], vx[a] * sy[b]};
    }
  return out;
}

} // namespace mrdwr::fem
