#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "mrdwr/mesh2d/constraints.hpp"
#include "mrdwr/mesh2d/spatial_mesh.hpp"

namespace mrdwr::fem {

using mesh2d::Box;
using mesh2d::Point;

/// Global numbering of a continuous scalar Q_p space.
///
/// Nodes are identified by position on an integer lattice, so vertex and
/// edge nodes are shared between neighbours. A Q2 node at a hanging edge
/// midpoint coincides with the coarse edge node and is therefore free; the
/// remaining hanging nodes get interpolatory constraints.
class DofMap {
public:
  DofMap(const mesh2d::SpatialMesh &mesh, int degree);

  int degree() const { return p_; }
  std::size_t n_dofs() const { return support_.size(); }
  std::size_t n_cells() const { return boxes_.size(); }
  int dofs_per_cell() const { return (p_ + 1) * (p_ + 1); }

  std::span<const int> cell_dofs(std::size_t cell) const {
    return {dofs_.data() + cell * dofs_per_cell(), static_cast<std::size_t>(dofs_per_cell())};
  }
  const Box &cell_box(std::size_t cell) const { return boxes_[cell]; }
  Point support_point(int dof) const { return support_[dof]; }
  bool on_boundary(int dof) const { return boundary_[dof] != 0; }
  const mesh2d::ConstraintSet &hanging_constraints() const { return hanging_; }
  std::optional<int> dof_at(Point p) const;

private:
  std::uint64_t lattice_key(Point p) const;

  int p_;
  Point origin_;
  double unit_;
  std::vector<Box> boxes_;
  std::vector<int> dofs_;
  std::vector<Point> support_;
  std::vector<char> boundary_;
  std::unordered_map<std::uint64_t, int> lookup_;
  mesh2d::ConstraintSet hanging_;
};

} // namespace mrdwr::fem

namespace mrdwr::mesh2d {
/// Hanging-node constraints of a degree-p space on a one-irregular mesh.
ConstraintSet build_constraints(const SpatialMesh &mesh, int degree, const fem::DofMap &dofs);
} // namespace mrdwr::mesh2d
