#pragma once

#include <vector>

#include "mrdwr/fem/dof_map.hpp"
#include "mrdwr/mesh2d/spatial_mesh.hpp"

namespace mrdwr::slabs {

/// Nodal interpolation between two FE spaces over the same forest, stored
/// as an explicit (target x source) matrix so that the dual sweep can apply
/// its transpose.
class TransferOperator {
public:
  std::vector<double> apply(const std::vector<double> &source) const;
  std::vector<double> apply_transpose(const std::vector<double> &target) const;
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_identity() const { return identity_; }

  friend TransferOperator build_transfer(const mesh2d::SpatialMesh &, const fem::DofMap &,
                                         const mesh2d::SpatialMesh &, const fem::DofMap &);

private:
  std::size_t rows_ = 0, cols_ = 0;
  bool identity_ = false;
  std::vector<std::size_t> ptr_{0};
  std::vector<int> idx_;
  std::vector<double> w_;
};

TransferOperator build_transfer(const mesh2d::SpatialMesh &source_mesh, const fem::DofMap &source,
                                const mesh2d::SpatialMesh &target_mesh, const fem::DofMap &target);

/// Evaluates the source FE function at every target node; hanging target
/// values follow the target constraints.
std::vector<double> transfer_between_meshes(const mesh2d::SpatialMesh &source_mesh, const fem::DofMap &source,
                                            const std::vector<double> &values,
                                            const mesh2d::SpatialMesh &target_mesh, const fem::DofMap &target);

} // namespace mrdwr::slabs
