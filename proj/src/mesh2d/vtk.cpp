#include "mrdwr/mesh2d/vtk.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace mrdwr::mesh2d {

void write_vtk(std::ostream &out, const SpatialMesh &mesh, const std::vector<CornerField> &fields) {
  const std::size_t nc = mesh.n_active();
  out << "# vtk DataFile Version 3.0\n"
      << "mrdwr snapshot\n"
      << "ASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << 4 * nc << " double\n" << std::setprecision(12);
  static constexpr double cx[4] = {0, 1, 1, 0};
  static constexpr double cy[4] = {0, 0, 1, 1};
  for (std::size_t c = 0; c < nc; ++c) {
    const Box b = mesh.box(c);
    for (int k = 0; k < 4; ++k)
      out << b.x0 + cx[k] * b.h << ' ' << b.y0 + cy[k] * b.h << " 0\n";
  }
  out << "CELLS " << nc << ' ' << 5 * nc << '\n';
  for (std::size_t c = 0; c < nc; ++c)
    out << "4 " << 4 * c << ' ' << 4 * c + 1 << ' ' << 4 * c + 2 << ' ' << 4 * c + 3 << '\n';
  out << "CELL_TYPES " << nc << '\n';
  for (std::size_t c = 0; c < nc; ++c)
    out << "9\n";
  out << "CELL_DATA " << nc << "\nSCALARS level int 1\nLOOKUP_TABLE default\n";
  for (std::size_t c = 0; c < nc; ++c)
    out << mesh.cell(c).level << '\n';
  if (fields.empty())
    return;
  out << "POINT_DATA " << 4 * nc << '\n';
  for (const auto &f : fields) {
    if (f.values.size() != 4 * nc * static_cast<std::size_t>(f.components))
      throw std::invalid_argument("corner field '" + f.name + "' has wrong length");
    if (f.components == 1)
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
    else
      out << "VECTORS " << f.name << " double\n";
    for (std::size_t k = 0; k < 4 * nc; ++k) {
      for (int d = 0; d < f.components; ++d)
        out << (d ? " " : "") << f.values[k * f.components + d];
      out << '\n';
    }
  }
}

void write_vtk(const std::string &path, const SpatialMesh &mesh, const std::vector<CornerField> &fields) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open " + path);
  write_vtk(out, mesh, fields);
}

} // namespace mrdwr::mesh2d
