#include "mrdwr/linalg/assembly.hpp"

#include <cmath>

namespace mrdwr::linalg {

namespace {

struct Target {
  int dof;
  double weight;
};

// expansion of each local dof onto free global dofs
void expand(std::span<const int> dofs, const ConstraintSet &cs, std::vector<std::vector<Target>> &out,
            std::vector<double> &inhomogeneity) {
  out.resize(dofs.size());
  inhomogeneity.assign(dofs.size(), 0.0);
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    out[i].clear();
    if (const auto *l = cs.line(dofs[i])) {
      for (const auto &e : l->entries)
        out[i].push_back({e.master, e.weight});
      inhomogeneity[i] = l->inhomogeneity;
    } else {
      out[i].push_back({dofs[i], 1.0});
    }
  }
}

} // namespace

void assemble_add(SparseMatrix &matrix, const LocalMatrix &local, std::span<const int> dofs,
                  const ConstraintSet &constraints) {
  std::vector<std::vector<Target>> t;
  std::vector<double> inh;
  expand(dofs, constraints, t, inh);
  for (int i = 0; i < local.rows; ++i)
    for (int j = 0; j < local.cols; ++j) {
      const double v = local(i, j);
      if (v == 0.0)
        continue;
      for (const auto &r : t[i])
        for (const auto &c : t[j])
          matrix.add(r.dof, c.dof, r.weight * c.weight * v);
    }
}

void assemble_add(SparseMatrix &matrix, std::vector<double> &rhs, const LocalMatrix &local,
                  const std::vector<double> &local_rhs, std::span<const int> dofs, const ConstraintSet &constraints) {
  std::vector<std::vector<Target>> t;
  std::vector<double> inh;
  expand(dofs, constraints, t, inh);
  for (int i = 0; i < local.rows; ++i) {
    double f = local_rhs[i];
    for (int j = 0; j < local.cols; ++j) {
      const double v = local(i, j);
      if (v == 0.0)
        continue;
      f -= v * inh[j];
      for (const auto &r : t[i])
        for (const auto &c : t[j])
          matrix.add(r.dof, c.dof, r.weight * c.weight * v);
    }
    for (const auto &r : t[i])
      rhs[r.dof] += r.weight * f;
  }
}

void assemble_add(std::vector<double> &rhs, const std::vector<double> &local_rhs, std::span<const int> dofs,
                  const ConstraintSet &constraints) {
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    if (const auto *l = constraints.line(dofs[i])) {
      for (const auto &e : l->entries)
        rhs[e.master] += e.weight * local_rhs[i];
    } else {
      rhs[dofs[i]] += local_rhs[i];
    }
  }
}

double finalize_constrained(SparseMatrix &matrix, std::vector<double> *rhs, const ConstraintSet &constraints) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    if (constraints.is_constrained(static_cast<int>(r)))
      continue;
    const double d = std::abs(matrix(static_cast<int>(r), static_cast<int>(r)));
    if (d > 0.0) {
      sum += d;
      ++count;
    }
  }
  const double placeholder = count ? sum / static_cast<double>(count) : 1.0;
  for (const auto &[dof, l] : constraints.lines()) {
    matrix.set(dof, dof, placeholder);
    if (rhs)
      (*rhs)[dof] = placeholder * l.inhomogeneity;
  }
  return placeholder;
}

double relative_residual(const SparseMatrix &a, const std::vector<double> &x, const std::vector<double> &b) {
  std::vector<double> ax;
  a.vmult(x, ax);
  double rn = 0.0, bn = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    rn += (ax[i] - b[i]) * (ax[i] - b[i]);
    bn += b[i] * b[i];
  }
  rn = std::sqrt(rn);
  bn = std::sqrt(bn);
  return bn > 0.0 ? rn / bn : rn;
}

} // namespace mrdwr::linalg
