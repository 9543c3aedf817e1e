#pragma once

#include <span>
#include <vector>

#include "mrdwr/linalg/sparse_matrix.hpp"
#include "mrdwr/mesh2d/constraints.hpp"

namespace mrdwr::linalg {

using mesh2d::ConstraintSet;

/// Scatter-add of a local block. Rows and columns of constrained DoFs are
/// expanded onto their masters; with a rhs, column inhomogeneities are moved
/// to the right-hand side.
void assemble_add(SparseMatrix &matrix, const LocalMatrix &local, std::span<const int> dofs,
                  const ConstraintSet &constraints);
void assemble_add(SparseMatrix &matrix, std::vector<double> &rhs, const LocalMatrix &local,
                  const std::vector<double> &local_rhs, std::span<const int> dofs, const ConstraintSet &constraints);
void assemble_add(std::vector<double> &rhs, const std::vector<double> &local_rhs, std::span<const int> dofs,
                  const ConstraintSet &constraints);

/// Puts a positive placeholder on constrained diagonals (mean magnitude of the
/// free diagonal) so the system stays invertible; constrained rhs entries get
/// placeholder * inhomogeneity.
double finalize_constrained(SparseMatrix &matrix, std::vector<double> *rhs, const ConstraintSet &constraints);

/// Relative residual ||A x - b|| / ||b|| (absolute when b = 0).
double relative_residual(const SparseMatrix &a, const std::vector<double> &x, const std::vector<double> &b);

} // namespace mrdwr::linalg
