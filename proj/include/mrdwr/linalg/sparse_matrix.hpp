#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mrdwr/mesh2d/constraints.hpp"

namespace mrdwr::linalg {

struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Square CSR matrix; column indices strictly increasing per row.
class SparseMatrix {
public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t n, std::vector<std::size_t> row_ptr, std::vector<int> cols);

  std::size_t size() const { return n_; }
  std::size_t nnz() const { return cols_.size(); }
  const std::vector<std::size_t> &row_ptr() const { return row_ptr_; }
  const std::vector<int> &cols() const { return cols_; }
  const std::vector<double> &values() const { return vals_; }
  std::vector<double> &values() { return vals_; }

  std::optional<std::size_t> find(int r, int c) const;
  void add(int r, int c, double v);
  void set(int r, int c, double v);
  double operator()(int r, int c) const;

  void vmult(const std::vector<double> &x, std::vector<double> &y) const;
  void Tvmult(const std::vector<double> &x, std::vector<double> &y) const;
  SparseMatrix transpose() const;
  double max_abs_asymmetry() const;
  double frobenius_norm() const;

private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<int> cols_;
  std::vector<double> vals_;
};

/// Collects couplings, then emits a zero-valued CSR matrix.
class PatternBuilder {
public:
  explicit PatternBuilder(std::size_t n) : rows_(n) {}
  void add(int r, int c) { rows_[r].push_back(c); }
  /// All couplings of one cell after constraint expansion; every row also
  /// gets its diagonal.
  void add_cell(std::span<const int> dofs, const mesh2d::ConstraintSet &constraints);
  SparseMatrix build();

private:
  std::vector<std::vector<int>> rows_;
};

/// Dense local block, row-major.
struct LocalMatrix {
  LocalMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
  double &operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
  void zero() { std::fill(a.begin(), a.end(), 0.0); }
  int rows, cols;
  std::vector<double> a;
};

} // namespace mrdwr::linalg
