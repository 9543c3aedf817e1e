#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mrdwr/mesh2d/spatial_mesh.hpp"

namespace mrdwr::mesh2d {

/// Point data sampled at the four corners of every active cell, corners in
/// VTK quad order (0,0) (1,0) (1,1) (0,1). Vectors use 3 components.
struct CornerField {
  std::string name;
  int components = 1;
  std::vector<double> values;
};

/// Legacy ASCII unstructured grid; corners are duplicated per cell so that
/// hanging nodes need no special treatment.
void write_vtk(std::ostream &out, const SpatialMesh &mesh, const std::vector<CornerField> &fields = {});
void write_vtk(const std::string &path, const SpatialMesh &mesh, const std::vector<CornerField> &fields = {});

} // namespace mrdwr::mesh2d
