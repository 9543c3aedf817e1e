#pragma once

#include <vector>

#include "mrdwr/fem/dof_map.hpp"
#include "mrdwr/fem/time_basis.hpp"
#include "mrdwr/mesh2d/spatial_mesh.hpp"

namespace mrdwr::estimation {

/// Degree r+1 reconstruction in time on a cell (a, b]. The polynomial goes
/// through the left neighbour's end value at a and through the cell's own
/// dG(r) polynomial at the remaining r+1 Gauss-Lobatto nodes. Works on whole
/// coefficient vectors, one polynomial per entry.
class TimeReconstruction {
public:
  /// `own` holds the dG(r) nodal vectors of the cell (r+1 of them, at the
  /// Gauss nodes of `basis`).
  TimeReconstruction(std::vector<double> left_end, const fem::TimeBasis &basis,
                     const std::vector<std::vector<double>> &own);
  int degree() const { return static_cast<int>(nodes_.size()) - 1; }
  double t_a() const { return ta_; }
  double t_b() const { return tb_; }
  std::vector<double> value(double t) const;
  double value(std::size_t entry, double t) const;

private:
  double lagrange(std::size_t k, double t) const;
  double ta_, tb_;
  std::vector<double> nodes_;                // in time
  std::vector<std::vector<double>> values_;  // per node
};

/// Shortcut for dG(0): the line through (a, left_end) and (b, own).
TimeReconstruction reconstruct_time(double a, double b, std::vector<double> left_end, std::vector<double> own);

/// Per-cell local coefficients of a discontinuous Q_p field, used for the
/// higher-order patch interpolants that do not fit any conforming space.
struct CellwiseField {
  int degree = 1;
  std::size_t n_cells = 0;
  std::vector<double> coefficients;
  int n_local() const { return (degree + 1) * (degree + 1); }
  const double *cell(std::size_t c) const { return coefficients.data() + c * n_local(); }
  double *cell(std::size_t c) { return coefficients.data() + c * n_local(); }
};

/// Patch-wise interpolation to degree 2p on the 2h parent mesh, restricted
/// back to the fine cells. Throws if the mesh is not patch-structured.
CellwiseField interpolate_patch_2h(const mesh2d::SpatialMesh &mesh, const fem::DofMap &dofs,
                                   const std::vector<double> &u);

/// Nodal interpolation from the degree-q space into the degree-p space on the
/// same mesh (p < q); hanging values follow the target constraints.
std::vector<double> restrict_space(const fem::DofMap &from, const std::vector<double> &z, const fem::DofMap &to);

/// Local coefficients of a conforming field as a CellwiseField of the same degree.
CellwiseField as_cellwise(const fem::DofMap &dofs, const std::vector<double> &u);

} // namespace mrdwr::estimation
