#include "mrdwr/slabs/transfer.hpp"

#include <cmath>
#include <stdexcept>

#include "mrdwr/fem/lagrange.hpp"

namespace mrdwr::slabs {

std::vector<double> TransferOperator::apply(const std::vector<double> &source) const {
  if (source.size() != cols_)
    throw std::invalid_argument("transfer: source length mismatch");
  if (identity_)
    return source;
  std::vector<double> out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t k = ptr_[r]; k < ptr_[r + 1]; ++k)
      s += w_[k] * source[idx_[k]];
    out[r] = s;
  }
  return out;
}

std::vector<double> TransferOperator::apply_transpose(const std::vector<double> &target) const {
  if (target.size() != rows_)
    throw std::invalid_argument("transfer: target length mismatch");
  if (identity_)
    return target;
  std::vector<double> out(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = ptr_[r]; k < ptr_[r + 1]; ++k)
      out[idx_[k]] += w_[k] * target[r];
  return out;
}

TransferOperator build_transfer(const mesh2d::SpatialMesh &source_mesh, const fem::DofMap &source,
                                const mesh2d::SpatialMesh &target_mesh, const fem::DofMap &target) {
  if (!source_mesh.same_forest(target_mesh))
    throw std::invalid_argument("incompatible roots");
  TransferOperator t;
  t.rows_ = target.n_dofs();
  t.cols_ = source.n_dofs();
  if (source.degree() == target.degree() && source_mesh.same_active(target_mesh)) {
    t.identity_ = true;
    return t;
  }
  const int ps = source.degree();
  const auto &hanging = target.hanging_constraints();
  std::vector<std::vector<std::pair<int, double>>> rows(t.rows_);
  std::vector<double> vx(ps + 1), vy(ps + 1);
  for (std::size_t r = 0; r < t.rows_; ++r) {
    if (hanging.is_constrained(static_cast<int>(r)))
      continue;
    const auto hit = source_mesh.locate(target.support_point(static_cast<int>(r)));
    if (!hit)
      throw std::runtime_error("transfer: target node outside source domain");
    const auto [cell, ref] = *hit;
    fem::lagrange_1d(ps, ref.x, vx.data());
    fem::lagrange_1d(ps, ref.y, vy.data());
    const auto d = source.cell_dofs(cell);
    for (int b = 0; b <= ps; ++b)
      for (int a = 0; a <= ps; ++a) {
        const double w = vx[a] * vy[b];
        if (std::abs(w) > 1e-14)
          rows[r].emplace_back(d[b * (ps + 1) + a], w);
      }
  }
  for (const auto &[dof, line] : hanging.lines()) {
    auto &row = rows[dof];
    for (const auto &e : line.entries)
      for (const auto &[c, w] : rows[e.master])
        row.emplace_back(c, e.weight * w);
  }
  for (const auto &row : rows) {
    for (const auto &[c, w] : row) {
      t.idx_.push_back(c);
      t.w_.push_back(w);
    }
    t.ptr_.push_back(t.idx_.size());
  }
  return t;
}

std::vector<double> transfer_between_meshes(const mesh2d::SpatialMesh &source_mesh, const fem::DofMap &source,
                                            const std::vector<double> &values,
                                            const mesh2d::SpatialMesh &target_mesh, const fem::DofMap &target) {
  return build_transfer(source_mesh, source, target_mesh, target).apply(values);
}

} // namespace mrdwr::slabs
