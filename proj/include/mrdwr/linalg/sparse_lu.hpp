#pragma once

#include <memory>
#include <vector>

#include "mrdwr/linalg/sparse_matrix.hpp"

namespace mrdwr::linalg {

/// Direct sparse LU with partial pivoting (fill-reducing column ordering).
/// Solves are followed by iterative refinement and a residual check.
class SparseLU {
public:
  SparseLU();
  ~SparseLU();
  SparseLU(SparseLU &&) noexcept;
  SparseLU &operator=(SparseLU &&) noexcept;

  void factorize(const SparseMatrix &matrix);
  std::vector<double> solve(const std::vector<double> &rhs) const;

  static constexpr double residual_tolerance = 1e-10;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<double> lu_solve(const SparseMatrix &matrix, const std::vector<double> &rhs);

} // namespace mrdwr::linalg
