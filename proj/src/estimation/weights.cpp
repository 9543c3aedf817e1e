#include "mrdwr/estimation/weights.hpp"

#include <array>
#include <stdexcept>

#include "mrdwr/fem/fe_tools.hpp"
#include "mrdwr/fem/lagrange.hpp"
#include "mrdwr/fem/quadrature.hpp"

namespace mrdwr::estimation {

TimeReconstruction::TimeReconstruction(std::vector<double> left_end, const fem::TimeBasis &basis,
                                       const std::vector<std::vector<double>> &own)
    : ta_(basis.t_a()), tb_(basis.t_b()) {
  const int r = basis.degree();
  if (own.size() != static_cast<std::size_t>(r + 1))
    throw std::invalid_argument("reconstruction needs one vector per time node");
  for (const auto &v : own)
    if (v.size() != left_end.size())
      throw std::invalid_argument("reconstruction inputs differ in size");
  const auto gl = fem::gauss_lobatto_points(r + 2);
  for (double s : gl.points)
    nodes_.push_back(ta_ + s * (tb_ - ta_));
  values_.push_back(std::move(left_end));
  for (std::size_t k = 1; k < nodes_.size(); ++k) {
    std::vector<double> v(values_[0].size(), 0.0);
    for (int j = 0; j <= r; ++j) {
      const double w = basis.value(j, nodes_[k]);
      for (std::size_t i = 0; i < v.size(); ++i)
        v[i] += w * own[j][i];
    }
    values_.push_back(std::move(v));
  }
}

double TimeReconstruction::lagrange(std::size_t k, double t) const {
  double l = 1.0;
  for (std::size_t m = 0; m < nodes_.size(); ++m)
    if (m != k)
      l *= (t - nodes_[m]) / (nodes_[k] - nodes_[m]);
  return l;
}

std::vector<double> TimeReconstruction::value(double t) const {
  std::vector<double> out(values_[0].size(), 0.0);
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const double l = lagrange(k, t);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] += l * values_[k][i];
  }
  return out;
}

double TimeReconstruction::value(std::size_t entry, double t) const {
  double s = 0.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k)
    s += lagrange(k, t) * values_[k][entry];
  return s;
}

TimeReconstruction reconstruct_time(double a, double b, std::vector<double> left_end, std::vector<double> own) {
  return TimeReconstruction(std::move(left_end), fem::TimeBasis(0, a, b), {std::move(own)});
}

namespace {

// evaluation of the parent Q_2p polynomial at the child's Q_2p nodes, one
// matrix per child position
struct PatchTables {
  int p;
  int n; // (2p+1)^2
  std::array<std::vector<double>, 4> eval;
  explicit PatchTables(int degree) : p(degree), n((2 * degree + 1) * (2 * degree + 1)) {
    const int q = 2 * p;
    for (int child = 0; child < 4; ++child) {
      const double cx = child & 1, cy = (child >> 1) & 1;
      auto &m = eval[child];
      m.assign(static_cast<std::size_t>(n) * n, 0.0);
      for (int k = 0; k < n; ++k) {
        const mesh2d::Point loc = fem::local_node(q, k);
        const auto s = fem::shape_eval(q, {0.5 * (cx + loc.x), 0.5 * (cy + loc.y)});
        for (int j = 0; j < n; ++j)
          m[static_cast<std::size_t>(k) * n + j] = s.values[j];
      }
    }
  }
};

} // namespace

CellwiseField interpolate_patch_2h(const mesh2d::SpatialMesh &mesh, const fem::DofMap &dofs,
                                   const std::vector<double> &u) {
  if (!mesh.is_patch_structured())
    throw std::runtime_error("mesh not patch-structured");
  if (dofs.n_cells() != mesh.n_active() || u.size() != dofs.n_dofs())
    throw std::invalid_argument("field does not match the mesh");
  const int p = dofs.degree();
  const int q = 2 * p;
  const PatchTables tables(p);
  CellwiseField out;
  out.degree = q;
  out.n_cells = mesh.n_active();
  out.coefficients.assign(out.n_cells * out.n_local(), 0.0);
  std::vector<double> parent(tables.n);
  std::array<std::size_t, 4> kids{};
  for (std::size_t c = 0; c < mesh.n_active(); ++c) {
    const auto id = mesh.cell(c);
    const auto par = id.parent();
    for (int k = 0; k < 4; ++k)
      kids[k] = *mesh.active_index(par.child(k));
    // parent lattice node (A, B) lies in child (A >= p, B >= p)
    for (int B = 0; B <= q; ++B)
      for (int A = 0; A <= q; ++A) {
        const int cx = A >= p ? 1 : 0, cy = B >= p ? 1 : 0;
        const int a = A - cx * p, b = B - cy * p;
        const int child = cx | (cy << 1);
        parent[B * (q + 1) + A] = u[dofs.cell_dofs(kids[child])[b * (p + 1) + a]];
      }
    const auto &m = tables.eval[id.child_index()];
    double *dst = out.cell(c);
    for (int k = 0; k < tables.n; ++k) {
      double s = 0.0;
      for (int j = 0; j < tables.n; ++j)
        s += m[static_cast<std::size_t>(k) * tables.n + j] * parent[j];
      dst[k] = s;
    }
  }
  return out;
}

std::vector<double> restrict_space(const fem::DofMap &from, const std::vector<double> &z, const fem::DofMap &to) {
  if (to.degree() > from.degree())
    throw std::invalid_argument("restriction needs a lower target degree");
  if (z.size() != from.n_dofs() || from.n_cells() != to.n_cells())
    throw std::invalid_argument("restriction inputs do not match");
  std::vector<double> out(to.n_dofs(), 0.0);
  std::vector<char> done(to.n_dofs(), 0);
  std::vector<double> local(from.dofs_per_cell());
  std::vector<fem::ShapeValues> at_nodes;
  for (int k = 0; k < to.dofs_per_cell(); ++k)
    at_nodes.push_back(fem::shape_eval(from.degree(), fem::local_node(to.degree(), k)));
  for (std::size_t c = 0; c < to.n_cells(); ++c) {
    const auto td = to.cell_dofs(c);
    bool need = false;
    for (int d : td)
      need = need || !done[d];
    if (!need)
      continue;
    fem::gather(from, c, z, local.data());
    for (int k = 0; k < to.dofs_per_cell(); ++k) {
      if (done[td[k]])
        continue;
      double v = 0.0;
      for (int j = 0; j < from.dofs_per_cell(); ++j)
        v += at_nodes[k].values[j] * local[j];
      out[td[k]] = v;
      done[td[k]] = 1;
    }
  }
  to.hanging_constraints().distribute(out);
  return out;
}

CellwiseField as_cellwise(const fem::DofMap &dofs, const std::vector<double> &u) {
  CellwiseField out;
  out.degree = dofs.degree();
  out.n_cells = dofs.n_cells();
  out.coefficients.resize(out.n_cells * out.n_local());
  for (std::size_t c = 0; c < dofs.n_cells(); ++c)
    fem::gather(dofs, c, u, out.cell(c));
  return out;
}

} // namespace mrdwr::estimation
