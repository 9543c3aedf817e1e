#include "mrdwr/mesh2d/constraints.hpp"

#include <cmath>
#include <stdexcept>

namespace mrdwr::mesh2d {

void ConstraintSet::add_line(int dof) { lines_[dof]; }

void ConstraintSet::add_entry(int dof, int master, double weight) {
  auto &l = lines_[dof];
  for (auto &e : l.entries)
    if (e.master == master) {
      e.weight += weight;
      return;
    }
  l.entries.push_back({master, weight});
}

void ConstraintSet::set_inhomogeneity(int dof, double value) { lines_[dof].inhomogeneity = value; }

void ConstraintSet::add_dirichlet(int dof, double value) {
  if (const auto it = lines_.find(dof); it != lines_.end() && !it->second.entries.empty())
    return;
  auto &l = lines_[dof];
  l.entries.clear();
  l.inhomogeneity = value;
  l.dirichlet = true;
}

const ConstraintSet::Line *ConstraintSet::line(int dof) const {
  const auto it = lines_.find(dof);
  return it == lines_.end() ? nullptr : &it->second;
}

void ConstraintSet::close() {
  // chains are short (one-irregular meshes), so plain substitution sweeps suffice
  for (int sweep = 0; sweep < 64; ++sweep) {
    bool changed = false;
    for (auto &[dof, l] : lines_) {
      std::vector<Entry> out;
      double inh = l.inhomogeneity;
      bool here = false;
      for (const auto &e : l.entries) {
        const auto it = lines_.find(e.master);
        if (it == lines_.end()) {
          out.push_back(e);
          continue;
        }
        if (it->first == dof)
          throw std::runtime_error("cyclic constraint");
        here = true;
        inh += e.weight * it->second.inhomogeneity;
        for (const auto &m : it->second.entries)
          out.push_back({m.master, e.weight * m.weight});
      }
      if (!here)
        continue;
      changed = true;
      l.entries.clear();
      for (const auto &e : out) {
        bool merged = false;
        for (auto &x : l.entries)
          if (x.master == e.master) {
            x.weight += e.weight;
            merged = true;
            break;
          }
        if (!merged)
          l.entries.push_back(e);
      }
      l.inhomogeneity = inh;
    }
    if (!changed)
      return;
  }
  throw std::runtime_error("constraint closure did not converge");
}

void ConstraintSet::distribute(std::vector<double> &x) const {
  for (const auto &[dof, l] : lines_) {
    double v = l.inhomogeneity;
    for (const auto &e : l.entries)
      v += e.weight * x[e.master];
    x[dof] = v;
  }
}

void ConstraintSet::distribute_homogeneous(std::vector<double> &x) const {
  for (const auto &[dof, l] : lines_) {
    double v = 0.0;
    for (const auto &e : l.entries)
      v += e.weight * x[e.master];
    x[dof] = v;
  }
}

void ConstraintSet::condense(std::vector<double> &r) const {
  for (const auto &[dof, l] : lines_) {
    const double v = r[dof];
    for (const auto &e : l.entries)
      r[e.master] += e.weight * v;
    r[dof] = 0.0;
  }
}

ConstraintSet ConstraintSet::homogeneous() const {
  ConstraintSet c = *this;
  for (auto &[dof, l] : c.lines_)
    l.inhomogeneity = 0.0;
  return c;
}

void ConstraintSet::merge(const ConstraintSet &other, int offset) {
  for (const auto &[dof, l] : other.lines_) {
    Line s = l;
    for (auto &e : s.entries)
      e.master += offset;
    lines_[dof + offset] = s;
  }
}

bool ConstraintSet::is_interpolatory(double tol) const {
  for (const auto &[dof, l] : lines_) {
    if (l.dirichlet)
      continue;
    double s = 0.0;
    for (const auto &e : l.entries)
      s += e.weight;
    if (std::abs(s - 1.0) > tol)
      return false;
  }
  return true;
}

bool ConstraintSet::is_closed() const {
  for (const auto &[dof, l] : lines_)
    for (const auto &e : l.entries)
      if (lines_.count(e.master))
        return false;
  return true;
}

} // namespace mrdwr::mesh2d
