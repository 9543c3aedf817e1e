#pragma once

#include <array>
#include <functional>
#include <vector>

#include "mrdwr/fem/dof_map.hpp"
#include "mrdwr/fem/quadrature.hpp"
#include "mrdwr/mesh2d/vtk.hpp"

namespace mrdwr::fem {

using Vec2 = std::array<double, 2>;

/// Shape data of Q_p at a fixed set of reference points.
class ReferenceTable {
public:
  ReferenceTable(int p, const QuadratureRule2D &rule);
  ReferenceTable(int p, const std::vector<Point> &points);

  int degree() const { return p_; }
  int n_shapes() const { return ns_; }
  std::size_t n_points() const { return points_.size(); }
  const std::vector<Point> &points() const { return points_; }
  const std::vector<double> &weights() const { return weights_; }
  double value(std::size_t q, int i) const { return val_[q * ns_ + i]; }
  const Vec2 &grad(std::size_t q, int i) const { return grad_[q * ns_ + i]; }
  double laplacian(std::size_t q, int i) const { return lap_[q * ns_ + i]; }

private:
  void fill();
  int p_, ns_;
  std::vector<Point> points_;
  std::vector<double> weights_;
  std::vector<double> val_;
  std::vector<Vec2> grad_;
  std::vector<double> lap_;
};

/// Cached table for Q_p with an n x n Gauss rule.
const ReferenceTable &gauss_table(int p, int n);

/// Reference data mapped to one axis-aligned cell.
class CellValues {
public:
  explicit CellValues(const ReferenceTable &table) : t_(table) {}
  void reinit(const Box &box) { box_ = box; inv_h_ = 1.0 / box.h; }

  std::size_t n_points() const { return t_.n_points(); }
  int n_shapes() const { return t_.n_shapes(); }
  double JxW(std::size_t q) const { return t_.weights()[q] * box_.h * box_.h; }
  Point point(std::size_t q) const { return box_.to_real(t_.points()[q]); }
  double shape(std::size_t q, int i) const { return t_.value(q, i); }
  Vec2 grad(std::size_t q, int i) const {
    const Vec2 &g = t_.grad(q, i);
    return {g[0] * inv_h_, g[1] * inv_h_};
  }
  double laplacian(std::size_t q, int i) const { return t_.laplacian(q, i) * inv_h_ * inv_h_; }
  const Box &box() const { return box_; }
  const ReferenceTable &table() const { return t_; }

  double value_of(const double *local, std::size_t q) const;
  Vec2 grad_of(const double *local, std::size_t q) const;
  double laplacian_of(const double *local, std::size_t q) const;

private:
  const ReferenceTable &t_;
  Box box_{};
  double inv_h_ = 1.0;
};

/// Local coefficients of `u` on `cell`.
void gather(const DofMap &dofs, std::size_t cell, const std::vector<double> &u, double *out);

/// Nodal interpolation of a function; hanging values follow their constraints.
std::vector<double> interpolate(const DofMap &dofs, const std::function<double(Point)> &f);

double evaluate(const DofMap &dofs, std::size_t cell, const std::vector<double> &u, Point ref);
Vec2 evaluate_gradient(const DofMap &dofs, std::size_t cell, const std::vector<double> &u, Point ref);

/// Integral of u over the domain (exact for Q_p).
double integrate(const DofMap &dofs, const std::vector<double> &u);
/// L2 norm of u - f, Gauss rule with p+3 points per direction.
double l2_error(const DofMap &dofs, const std::vector<double> &u, const std::function<double(Point)> &f);

/// Samples u at cell corners for VTK output.
mesh2d::CornerField corner_field(const DofMap &dofs, const std::string &name, const std::vector<double> &u);
mesh2d::CornerField corner_field(const DofMap &dofs, const std::string &name, const std::vector<double> &ux,
                                 const std::vector<double> &uy);

} // namespace mrdwr::fem
