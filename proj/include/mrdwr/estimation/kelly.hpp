#pragma once

#include <vector>

#include "mrdwr/fem/dof_map.hpp"
#include "mrdwr/mesh2d/spatial_mesh.hpp"
#include "mrdwr/slabs/slab_list.hpp"
#include "mrdwr/stokes/stokes.hpp"

namespace mrdwr::estimation {

/// Kelly indicator per cell: eta_K^2 = sum over faces of (h_F/24) times the
/// face integral of the squared normal-gradient jump, both velocity
/// components. Each face integral is split half/half between its two cells;
/// hanging faces are integrated on the fine side. Returns eta_K (not squared).
std::vector<double> kelly_indicators(const mesh2d::SpatialMesh &mesh, const fem::DofMap &dofs,
                                     const stokes::Velocity &velocity);

/// Kelly indicators for every solved flow slab.
std::vector<std::vector<double>> compute_kelly_flow(const slabs::SlabList &flow);

} // namespace mrdwr::estimation
