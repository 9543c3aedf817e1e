#pragma once

#include <array>
#include <vector>

#include "mrdwr/mesh2d/spatial_mesh.hpp"

namespace mrdwr::fem {

using mesh2d::Point;

/// 1D Lagrange basis of degree p on the equispaced nodes k/p of [0,1].
/// Any of the output pointers may be null.
void lagrange_1d(int p, double x, double *values, double *first = nullptr, double *second = nullptr);

inline int shape_count(int p) { return (p + 1) * (p + 1); }

/// Local node k = b*(p+1) + a sits at (a/p, b/p).
inline Point local_node(int p, int k) {
  return {static_cast<double>(k % (p + 1)) / p, static_cast<double>(k / (p + 1)) / p};
}

struct ShapeValues {
  std::vector<double> values;
  std::vector<std::array<double, 2>> gradients;
  // pure second derivatives (d_xx, d_yy); enough for the Laplacian
  std::vector<std::array<double, 2>> second;
};

/// Tensor-product Lagrange Q_p shape functions on the reference square.
ShapeValues shape_eval(int p, Point ref);

} // namespace mrdwr::fem
