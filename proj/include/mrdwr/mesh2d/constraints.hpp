#pragma once

#include <cstddef>
#include <map>
#include <vector>

namespace mrdwr::mesh2d {

/// Linear constraints x_c = sum_m w_m x_m + b_c.
///
/// Hanging nodes carry interpolatory weights (summing to one) and b_c = 0.
/// Dirichlet values are lines without masters whose inhomogeneity is the
/// boundary value.
class ConstraintSet {
public:
  struct Entry {
    int master;
    double weight;
  };
  struct Line {
    std::vector<Entry> entries;
    double inhomogeneity = 0.0;
    bool dirichlet = false;
  };

  void add_line(int dof);
  void add_entry(int dof, int master, double weight);
  void set_inhomogeneity(int dof, double value);
  /// Dirichlet line; ignored when `dof` already carries a hanging constraint.
  void add_dirichlet(int dof, double value);

  /// Substitutes constrained masters until every master is free.
  void close();

  bool is_constrained(int dof) const { return lines_.count(dof) != 0; }
  const Line *line(int dof) const;
  const std::map<int, Line> &lines() const { return lines_; }
  std::size_t size() const { return lines_.size(); }
  bool empty() const { return lines_.empty(); }

  /// Overwrites constrained entries from their masters.
  void distribute(std::vector<double> &x) const;
  void distribute_homogeneous(std::vector<double> &x) const;
  /// Moves constrained entries of a residual/rhs vector onto the masters
  /// (the transpose of distribute) and zeroes them.
  void condense(std::vector<double> &r) const;

  ConstraintSet homogeneous() const;
  /// Appends `other` with all indices shifted by `offset`.
  void merge(const ConstraintSet &other, int offset);

  /// True if every non-Dirichlet line has weights summing to one.
  bool is_interpolatory(double tol = 1e-12) const;
  /// True if no master is itself constrained.
  bool is_closed() const;

private:
  std::map<int, Line> lines_;
};

} // namespace mrdwr::mesh2d
