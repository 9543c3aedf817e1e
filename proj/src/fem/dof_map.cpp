#include "mrdwr/fem/dof_map.hpp"

#include <cmath>
#include <stdexcept>

#include "mrdwr/fem/lagrange.hpp"

namespace mrdwr::fem {

namespace {

// local nodes on face f, ordered along the face
std::vector<int> face_nodes(int p, int f) {
  std::vector<int> out;
  for (int k = 0; k <= p; ++k) {
    switch (f) {
    case mesh2d::Face::left: out.push_back(k * (p + 1)); break;
    case mesh2d::Face::right: out.push_back(k * (p + 1) + p); break;
    case mesh2d::Face::bottom: out.push_back(k); break;
    default: out.push_back(p * (p + 1) + k); break;
    }
  }
  return out;
}

} // namespace

std::uint64_t DofMap::lattice_key(Point p) const {
  const auto X = static_cast<std::int64_t>(std::llround((p.x - origin_.x) / unit_));
  const auto Y = static_cast<std::int64_t>(std::llround((p.y - origin_.y) / unit_));
  return (static_cast<std::uint64_t>(X) << 32) | static_cast<std::uint64_t>(Y);
}

std::optional<int> DofMap::dof_at(Point p) const {
  const auto it = lookup_.find(lattice_key(p));
  if (it == lookup_.end())
    return std::nullopt;
  return it->second;
}

DofMap::DofMap(const mesh2d::SpatialMesh &mesh, int degree) : p_(degree), origin_(mesh.origin()) {
  if (degree < 1 || degree > 4)
    throw std::invalid_argument("DofMap degree must be in 1..4");
  unit_ = std::ldexp(mesh.root_edge(), -mesh.max_level()) / p_;
  const int nloc = dofs_per_cell();
  boxes_.reserve(mesh.n_active());
  dofs_.reserve(mesh.n_active() * nloc);
  for (std::size_t c = 0; c < mesh.n_active(); ++c) {
    const Box b = mesh.box(c);
    boxes_.push_back(b);
    for (int k = 0; k < nloc; ++k) {
      const Point x = b.to_real(local_node(p_, k));
      auto [it, fresh] = lookup_.emplace(lattice_key(x), static_cast<int>(support_.size()));
      if (fresh) {
        support_.push_back(x);
        boundary_.push_back(0);
      }
      dofs_.push_back(it->second);
    }
  }

  for (std::size_t c = 0; c < mesh.n_active(); ++c) {
    const mesh2d::CellId id = mesh.cell(c);
    const Box b = boxes_[c];
    for (int f = 0; f < 4; ++f) {
      const auto nbs = mesh.face_neighbors(id, f);
      const auto local = face_nodes(p_, f);
      if (nbs.empty()) {
        for (int k : local)
          boundary_[dofs_[c * nloc + k]] = 1;
        continue;
      }
      if (nbs.size() != 1 || nbs[0].level >= id.level)
        continue;
      if (nbs[0].level < id.level - 1)
        throw std::logic_error("mesh is not one-irregular");
      // coarse neighbour: constrain our face nodes to its edge trace
      const Box cb = mesh.box(nbs[0]);
      const int opposite = f ^ 1;
      std::vector<int> masters;
      for (int k : face_nodes(p_, opposite)) {
        const auto m = dof_at(cb.to_real(local_node(p_, k)));
        if (!m)
          throw std::logic_error("coarse edge node missing");
        masters.push_back(*m);
      }
      const bool vertical = (f == mesh2d::Face::left || f == mesh2d::Face::right);
      std::vector<double> w(p_ + 1);
      for (int k : local) {
        const Point x = b.to_real(local_node(p_, k));
        const double s = vertical ? (x.y - cb.y0) / cb.h : (x.x - cb.x0) / cb.h;
        const double scaled = s * p_;
        if (std::abs(scaled - std::round(scaled)) < 1e-9)
          continue; // coincides with a coarse node
        const int dof = dofs_[c * nloc + k];
        if (hanging_.is_constrained(dof))
          continue;
        lagrange_1d(p_, s, w.data());
        hanging_.add_line(dof);
        for (int m = 0; m <= p_; ++m)
          if (std::abs(w[m]) > 1e-15)
            hanging_.add_entry(dof, masters[m], w[m]);
      }
    }
  }
  hanging_.close();
}

} // namespace mrdwr::fem

namespace mrdwr::mesh2d {
ConstraintSet build_constraints(const SpatialMesh &mesh, int degree, const fem::DofMap &dofs) {
  if (!mesh.is_one_irregular())
    throw std::invalid_argument("build_constraints requires a one-irregular mesh");
  if (dofs.degree() != degree || dofs.n_cells() != mesh.n_active())
    throw std::invalid_argument("dof map does not match mesh");
  return dofs.hanging_constraints();
}
} // namespace mrdwr::mesh2d
