#include "mrdwr/estimation/kelly.hpp"

#include <cmath>
#include <stdexcept>

#include "mrdwr/fem/fe_tools.hpp"
#include "mrdwr/fem/quadrature.hpp"

namespace mrdwr::estimation {

using mesh2d::Point;

namespace {

// reference point on face f at parameter s along it
Point face_point(int f, double s) {
  switch (f) {
  case mesh2d::Face::left: return {0.0, s};
  case mesh2d::Face::right: return {1.0, s};
  case mesh2d::Face::bottom: return {s, 0.0};
  default: return {s, 1.0};
  }
}

// outward unit normal component index and sign
int normal_axis(int f) { return f < 2 ? 0 : 1; }
double normal_sign(int f) { return (f & 1) ? 1.0 : -1.0; }

} // namespace

std::vector<double> kelly_indicators(const mesh2d::SpatialMesh &mesh, const fem::DofMap &dofs,
                                     const stokes::Velocity &velocity) {
  if (dofs.n_cells() != mesh.n_active())
    throw std::invalid_argument("dof map does not match the mesh");
  if (velocity.x.size() != dofs.n_dofs() || velocity.y.size() != dofs.n_dofs())
    throw std::invalid_argument("velocity does not match the dof map");
  const auto rule = fem::gauss_points(dofs.degree() + 1);
  std::vector<double> eta2(mesh.n_active(), 0.0);
  for (std::size_t c = 0; c < mesh.n_active(); ++c) {
    const auto id = mesh.cell(c);
    const auto box = mesh.box(c);
    for (int f = 0; f < 4; ++f) {
      const auto nbs = mesh.face_neighbors(id, f);
      // boundary faces carry no jump; faces towards finer cells are done from there
      if (nbs.size() != 1 || nbs[0].level > id.level)
        continue;
      const std::size_t other = *mesh.active_index(nbs[0]);
      const auto obox = mesh.box(other);
      const int axis = normal_axis(f);
      const double sign = normal_sign(f);
      double integral = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Point ref = face_point(f, rule.points[q]);
        const Point x = box.to_real(ref);
        const Point oref = obox.to_ref(x);
        for (const auto *u : {&velocity.x, &velocity.y}) {
          const double jump = sign * (fem::evaluate_gradient(dofs, c, *u, ref)[axis] -
                                      fem::evaluate_gradient(dofs, other, *u, oref)[axis]);
          integral += rule.weights[q] * box.h * jump * jump;
        }
      }
      const double share = 0.5 * box.h / 24.0 * integral;
      eta2[c] += share;
      // equal neighbours see this face themselves; a coarse one does not
      if (nbs[0].level < id.level)
        eta2[other] += share;
    }
  }
  for (auto &v : eta2)
    v = std::sqrt(v);
  return eta2;
}

std::vector<std::vector<double>> compute_kelly_flow(const slabs::SlabList &flow) {
  std::vector<std::vector<double>> out;
  out.reserve(flow.size());
  for (const auto &slab : flow)
    out.push_back(kelly_indicators(slab.mesh(), slab.dofs(2), stokes::velocity_of(slab)));
  return out;
}

} // namespace mrdwr::estimation
