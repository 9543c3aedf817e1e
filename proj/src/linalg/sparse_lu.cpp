#include "mrdwr/linalg/sparse_lu.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <regex>
#include <string>

#include "mrdwr/linalg/assembly.hpp"

namespace mrdwr::linalg {

struct SparseLU::Impl {
  SparseMatrix a;
  Eigen::SparseMatrix<double> m;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

SparseLU::SparseLU() : impl_(std::make_unique<Impl>()) {}
SparseLU::~SparseLU() = default;
SparseLU::SparseLU(SparseLU &&) noexcept = default;
SparseLU &SparseLU::operator=(SparseLU &&) noexcept = default;

void SparseLU::factorize(const SparseMatrix &matrix) {
  const auto n = static_cast<Eigen::Index>(matrix.size());
  const auto &ptr = matrix.row_ptr();
  const auto &cols = matrix.cols();
  const auto &vals = matrix.values();
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    bool nonzero = false;
    for (std::size_t k = ptr[r]; k < ptr[r + 1] && !nonzero; ++k)
      nonzero = vals[k] != 0.0;
    if (!nonzero)
      throw SolverError("singular pivot: row " + std::to_string(r) + " is zero");
  }
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(matrix.nnz());
  for (std::size_t r = 0; r < matrix.size(); ++r)
    for (std::size_t k = ptr[r]; k < ptr[r + 1]; ++k)
      if (vals[k] != 0.0)
        trip.emplace_back(static_cast<int>(r), cols[k], vals[k]);
  impl_->a = matrix;
  impl_->m.resize(n, n);
  impl_->m.setFromTriplets(trip.begin(), trip.end());
  impl_->m.makeCompressed();
  impl_->lu.analyzePattern(impl_->m);
  impl_->lu.factorize(impl_->m);
  if (impl_->lu.info() != Eigen::Success) {
    // the factorization reports the failing pivot as a column of the
    // permuted matrix; map it back to an original row index
    const std::string msg = impl_->lu.lastErrorMessage();
    std::smatch hit;
    std::string where = "unknown row";
    if (std::regex_search(msg, hit, std::regex("([0-9]+)"))) {
      const long k = std::stol(hit[1]);
      if (k >= 0 && k < n)
        where = "row " + std::to_string(impl_->lu.colsPermutation().indices()(k));
    }
    throw SolverError("singular pivot at " + where + " (" + msg + ")");
  }
}

std::vector<double> SparseLU::solve(const std::vector<double> &rhs) const {
  const auto n = static_cast<Eigen::Index>(rhs.size());
  if (static_cast<std::size_t>(n) != impl_->a.size())
    throw SolverError("rhs length does not match matrix");
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), n);
  Eigen::VectorXd x = impl_->lu.solve(b);
  const double bn = b.norm();
  const double scale = bn > 0.0 ? bn : 1.0;
  for (int it = 0; it < 4; ++it) {
    const Eigen::VectorXd r = b - impl_->m * x;
    if (r.norm() <= 1e-14 * scale)
      break;
    x += impl_->lu.solve(r);
  }
  std::vector<double> out(x.data(), x.data() + n);
  const double res = (b - impl_->m * x).norm() / scale;
  if (!(res <= residual_tolerance))
    throw SolverError("relative residual " + std::to_string(res) + " exceeds tolerance");
  return out;
}

std::vector<double> lu_solve(const SparseMatrix &matrix, const std::vector<double> &rhs) {
  SparseLU lu;
  lu.factorize(matrix);
  return lu.solve(rhs);
}

} // namespace mrdwr::linalg
