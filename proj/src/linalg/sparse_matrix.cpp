#include "mrdwr/linalg/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mrdwr::linalg {

SparseMatrix::SparseMatrix(std::size_t n, std::vector<std::size_t> row_ptr, std::vector<int> cols)
    : n_(n), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), vals_(cols_.size(), 0.0) {
  if (row_ptr_.size() != n_ + 1 || row_ptr_.back() != cols_.size())
    throw StructuralError("inconsistent CSR row pointer");
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (cols_[k] < 0 || static_cast<std::size_t>(cols_[k]) >= n_)
        throw StructuralError("column index out of range in row " + std::to_string(r));
      if (k > row_ptr_[r] && cols_[k] <= cols_[k - 1])
        throw StructuralError("column indices not strictly increasing in row " + std::to_string(r));
    }
}

std::optional<std::size_t> SparseMatrix::find(int r, int c) const {
  const auto b = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
  const auto e = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
  const auto it = std::lower_bound(b, e, c);
  if (it == e || *it != c)
    return std::nullopt;
  return static_cast<std::size_t>(it - cols_.begin());
}

void SparseMatrix::add(int r, int c, double v) {
  const auto k = find(r, c);
  if (!k)
    throw StructuralError("sparsity pattern has no entry (" + std::to_string(r) + ", " + std::to_string(c) + ")");
  vals_[*k] += v;
}

void SparseMatrix::set(int r, int c, double v) {
  const auto k = find(r, c);
  if (!k)
    throw StructuralError("sparsity pattern has no entry (" + std::to_string(r) + ", " + std::to_string(c) + ")");
  vals_[*k] = v;
}

double SparseMatrix::operator()(int r, int c) const {
  const auto k = find(r, c);
  return k ? vals_[*k] : 0.0;
}

void SparseMatrix::vmult(const std::vector<double> &x, std::vector<double> &y) const {
  y.assign(n_, 0.0);
  for (std::size_t r = 0; r < n_; ++r) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      s += vals_[k] * x[cols_[k]];
    y[r] = s;
  }
}

void SparseMatrix::Tvmult(const std::vector<double> &x, std::vector<double> &y) const {
  y.assign(n_, 0.0);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      y[cols_[k]] += vals_[k] * x[r];
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<std::size_t> ptr(n_ + 1, 0);
  for (int c : cols_)
    ++ptr[c + 1];
  for (std::size_t r = 0; r < n_; ++r)
    ptr[r + 1] += ptr[r];
  std::vector<int> cols(cols_.size());
  std::vector<double> vals(cols_.size());
  std::vector<std::size_t> fill(ptr.begin(), ptr.end() - 1);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const std::size_t dst = fill[cols_[k]]++;
      cols[dst] = static_cast<int>(r);
      vals[dst] = vals_[k];
    }
  SparseMatrix t(n_, std::move(ptr), std::move(cols));
  t.vals_ = std::move(vals);
  return t;
}

double SparseMatrix::max_abs_asymmetry() const {
  double m = 0.0;
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      m = std::max(m, std::abs(vals_[k] - (*this)(cols_[k], static_cast<int>(r))));
  return m;
}

double SparseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : vals_)
    s += v * v;
  return std::sqrt(s);
}

void PatternBuilder::add_cell(std::span<const int> dofs, const mesh2d::ConstraintSet &constraints) {
  std::vector<int> targets;
  for (int d : dofs) {
    if (const auto *l = constraints.line(d)) {
      for (const auto &e : l->entries)
        targets.push_back(e.master);
      rows_[d].push_back(d);
    } else {
      targets.push_back(d);
    }
  }
  for (int r : targets)
    for (int c : targets)
      rows_[r].push_back(c);
}

SparseMatrix PatternBuilder::build() {
  const std::size_t n = rows_.size();
  std::vector<std::size_t> ptr(n + 1, 0);
  std::vector<int> cols;
  for (std::size_t r = 0; r < n; ++r) {
    auto &row = rows_[r];
    row.push_back(static_cast<int>(r));
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    cols.insert(cols.end(), row.begin(), row.end());
    ptr[r + 1] = cols.size();
    std::vector<int>().swap(row);
  }
  return SparseMatrix(n, std::move(ptr), std::move(cols));
}

} // namespace mrdwr::linalg
