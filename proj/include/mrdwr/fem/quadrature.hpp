#pragma once

#include <vector>

#include "mrdwr/mesh2d/spatial_mesh.hpp"

namespace mrdwr::fem {

/// Rule on [0,1].
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
  std::size_t size() const { return points.size(); }
};

/// Rule on the reference square [0,1]^2.
struct QuadratureRule2D {
  std::vector<mesh2d::Point> points;
  std::vector<double> weights;
  std::size_t size() const { return points.size(); }
};

/// n-point Gauss-Legendre, 1 <= n <= 5; exact up to degree 2n-1.
QuadratureRule gauss_points(int n);
/// n-point Gauss-Lobatto, 2 <= n <= 5; endpoints included, exact up to 2n-3.
QuadratureRule gauss_lobatto_points(int n);
QuadratureRule2D tensor_rule(const QuadratureRule &rule);

} // namespace mrdwr::fem
