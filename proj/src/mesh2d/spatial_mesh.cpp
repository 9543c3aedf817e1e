#include "mrdwr/mesh2d/spatial_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace mrdwr::mesh2d {

namespace {

std::uint64_t lattice_key(std::int64_t i, std::int64_t j) {
  return (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j);
}

std::uint64_t spread_bits(std::uint64_t v) {
  std::uint64_t r = 0;
  for (int b = 0; b < 21; ++b)
    r |= ((v >> b) & 1u) << (2 * b);
  return r;
}

CellId shifted(const CellId &c, int f) {
  switch (f) {
  case Face::left: return {c.level, c.i - 1, c.j};
  case Face::right: return {c.level, c.i + 1, c.j};
  case Face::bottom: return {c.level, c.i, c.j - 1};
  default: return {c.level, c.i, c.j + 1};
  }
}

} // namespace

SpatialMesh::SpatialMesh(Point origin, double root_edge, std::vector<std::array<int, 2>> roots)
    : origin_(origin), root_edge_(root_edge), roots_(std::move(roots)) {
  if (!(root_edge_ > 0.0))
    throw std::invalid_argument("root edge must be positive");
  std::vector<CellId> cells;
  for (std::size_t r = 0; r < roots_.size(); ++r) {
    const auto [ri, rj] = roots_[r];
    if (ri < 0 || rj < 0)
      throw std::invalid_argument("root lattice coordinates must be nonnegative");
    if (!root_lookup_.emplace(lattice_key(ri, rj), static_cast<int>(r)).second)
      throw std::invalid_argument("duplicate root cell");
    cells.push_back({0, ri, rj});
  }
  set_active(std::move(cells));
}

SpatialMesh SpatialMesh::rectangle(Point origin, double root_edge, int nx, int ny) {
  std::vector<std::array<int, 2>> roots;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      roots.push_back({i, j});
  return SpatialMesh(origin, root_edge, std::move(roots));
}

int SpatialMesh::root_index(const CellId &c) const {
  if (c.i < 0 || c.j < 0 || c.level < 0)
    return -1;
  const auto it = root_lookup_.find(lattice_key(c.i >> c.level, c.j >> c.level));
  return it == root_lookup_.end() ? -1 : it->second;
}

std::optional<std::size_t> SpatialMesh::active_index(const CellId &c) const {
  const auto it = index_.find(c.key());
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

std::string SpatialMesh::path(const CellId &c) const {
  std::string s = "r" + std::to_string(root_index(c)) + ":";
  for (int l = 1; l <= c.level; ++l)
    s += static_cast<char>('0' + c.ancestor(l).child_index());
  return s;
}

Box SpatialMesh::box(const CellId &c) const {
  const double h = std::ldexp(root_edge_, -c.level);
  return {origin_.x + h * static_cast<double>(c.i), origin_.y + h * static_cast<double>(c.j), h};
}

double SpatialMesh::diameter(const CellId &c) const { return std::sqrt(2.0) * box(c).h; }

int SpatialMesh::max_level() const {
  int m = 0;
  for (const auto &c : active_)
    m = std::max(m, c.level);
  return m;
}

std::uint64_t SpatialMesh::order_key(const CellId &c) const {
  const std::uint64_t mask = (std::uint64_t{1} << c.level) - 1;
  const int s = max_refinement_level - c.level;
  const std::uint64_t li = (static_cast<std::uint64_t>(c.i) & mask) << s;
  const std::uint64_t lj = (static_cast<std::uint64_t>(c.j) & mask) << s;
  const auto root = static_cast<std::uint64_t>(root_index(c));
  return (root << 42) | spread_bits(li) | (spread_bits(lj) << 1);
}

void SpatialMesh::set_active(std::vector<CellId> cells) {
  std::vector<std::pair<std::uint64_t, CellId>> keyed;
  keyed.reserve(cells.size());
  for (const auto &c : cells)
    keyed.emplace_back(order_key(c), c);
  std::sort(keyed.begin(), keyed.end(), [](const auto &a, const auto &b) {
    return a.first != b.first ? a.first < b.first : a.second.level < b.second.level;
  });
  active_.clear();
  index_.clear();
  active_.reserve(keyed.size());
  index_.reserve(keyed.size());
  for (const auto &[k, c] : keyed) {
    index_.emplace(c.key(), active_.size());
    active_.push_back(c);
  }
}

std::optional<CellId> SpatialMesh::covering_active(const CellId &c) const {
  if (!in_domain(c))
    return std::nullopt;
  for (int l = c.level; l >= 0; --l) {
    const CellId a = c.ancestor(l);
    if (is_active(a))
      return a;
  }
  return std::nullopt;
}

void SpatialMesh::collect_face_descendants(const CellId &c, int f, std::vector<CellId> &out) const {
  // children of c that touch the face of c opposite to f
  static constexpr int touching[4][2] = {{1, 3}, {0, 2}, {2, 3}, {0, 1}};
  for (int k : touching[f]) {
    const CellId ch = c.child(k);
    if (is_active(ch))
      out.push_back(ch);
    else if (ch.level < max_refinement_level)
      collect_face_descendants(ch, f, out);
  }
}

std::vector<CellId> SpatialMesh::face_neighbors(const CellId &c, int f) const {
  std::vector<CellId> out;
  const CellId nb = shifted(c, f);
  if (!in_domain(nb))
    return out;
  if (auto cov = covering_active(nb)) {
    out.push_back(*cov);
    return out;
  }
  collect_face_descendants(nb, f, out);
  return out;
}

std::optional<std::pair<std::size_t, Point>> SpatialMesh::locate(Point p) const {
  const double fx = (p.x - origin_.x) / root_edge_;
  const double fy = (p.y - origin_.y) / root_edge_;
  const int lmax = max_level();
  static constexpr double e = 1e-9;
  static constexpr double shifts[3] = {0.0, -e, e};
  for (double dx : shifts) {
    for (double dy : shifts) {
      const double X = fx + dx, Y = fy + dy;
      if (X < 0.0 || Y < 0.0)
        continue;
      for (int l = 0; l <= lmax; ++l) {
        const double s = std::ldexp(1.0, l);
        const CellId c{l, static_cast<std::int64_t>(std::floor(X * s)),
                       static_cast<std::int64_t>(std::floor(Y * s))};
        if (l == 0 && !in_domain(c))
          break;
        if (auto idx = active_index(c)) {
          Point ref = box(c).to_ref(p);
          ref.x = std::clamp(ref.x, 0.0, 1.0);
          ref.y = std::clamp(ref.y, 0.0, 1.0);
          return std::make_pair(*idx, ref);
        }
      }
    }
  }
  return std::nullopt;
}

std::vector<CellId> SpatialMesh::closure_violations() const {
  std::unordered_set<std::uint64_t> seen;
  std::vector<CellId> out;
  auto push = [&](const CellId &c) {
    if (seen.insert(c.key()).second)
      out.push_back(c);
  };
  for (const auto &c : active_) {
    for (int f = 0; f < 4; ++f) {
      const CellId nb = shifted(c, f);
      if (!in_domain(nb))
        continue;
      if (auto cov = covering_active(nb); cov && cov->level < c.level - 1)
        push(*cov);
    }
    if (patch_smoothing_ && c.level >= 1) {
      const CellId p = c.parent();
      for (int s = 0; s < 4; ++s)
        if (!is_active(p.child(s))) {
          push(c);
          break;
        }
    }
  }
  return out;
}

void SpatialMesh::refine(const std::vector<CellId> &marks) {
  for (const auto &m : marks)
    if (!is_active(m))
      throw std::invalid_argument("unknown cell id " + path(m));
  std::vector<CellId> todo = marks;
  while (!todo.empty()) {
    std::unordered_set<std::uint64_t> drop;
    std::vector<CellId> next;
    for (const auto &c : todo) {
      if (!drop.insert(c.key()).second)
        continue;
      if (c.level + 1 > max_refinement_level)
        throw std::runtime_error("refinement level limit exceeded");
      for (int k = 0; k < 4; ++k)
        next.push_back(c.child(k));
    }
    for (const auto &c : active_)
      if (!drop.count(c.key()))
        next.push_back(c);
    set_active(std::move(next));
    todo = closure_violations();
  }
}

bool SpatialMesh::coarsen_group_allowed(const CellId &parent) const {
  // after the merge no neighbour across a face of `parent` may be more than one level finer
  for (int f = 0; f < 4; ++f) {
    const CellId nb = shifted(parent, f);
    if (!in_domain(nb))
      continue;
    if (covering_active(nb))
      continue;
    std::vector<CellId> fine;
    collect_face_descendants(nb, f, fine);
    for (const auto &c : fine)
      if (c.level > parent.level + 1)
        return false;
  }
  return true;
}

void SpatialMesh::coarsen(const std::vector<CellId> &marks) {
  std::unordered_set<std::uint64_t> marked;
  for (const auto &m : marks)
    if (is_active(m) && m.level >= 1)
      marked.insert(m.key());

  auto group_complete = [&](const CellId &p) {
    for (int k = 0; k < 4; ++k) {
      const CellId ch = p.child(k);
      if (!is_active(ch) || !marked.count(ch.key()))
        return false;
    }
    return true;
  };

  std::vector<CellId> parents;
  {
    std::unordered_set<std::uint64_t> seen;
    for (const auto &c : active_)
      if (marked.count(c.key()) && seen.insert(c.parent().key()).second && group_complete(c.parent()))
        parents.push_back(c.parent());
  }

  // each unit is merged atomically; with patch smoothing a unit is the four
  // sibling groups below one grandparent
  std::vector<std::vector<CellId>> units;
  if (patch_smoothing_) {
    std::unordered_set<std::uint64_t> is_parent;
    for (const auto &p : parents)
      is_parent.insert(p.key());
    std::unordered_set<std::uint64_t> seen;
    for (const auto &p : parents) {
      if (p.level < 1)
        continue;
      const CellId g = p.parent();
      if (!seen.insert(g.key()).second)
        continue;
      std::vector<CellId> unit;
      for (int k = 0; k < 4; ++k)
        if (is_parent.count(g.child(k).key()))
          unit.push_back(g.child(k));
      if (unit.size() == 4)
        units.push_back(std::move(unit));
    }
  } else {
    for (const auto &p : parents)
      units.push_back({p});
  }

  for (const auto &unit : units) {
    bool ok = true;
    for (const auto &p : unit)
      ok = ok && coarsen_group_allowed(p);
    if (!ok)
      continue;
    std::unordered_set<std::uint64_t> drop;
    for (const auto &p : unit)
      for (int k = 0; k < 4; ++k)
        drop.insert(p.child(k).key());
    std::vector<CellId> next;
    for (const auto &c : active_)
      if (!drop.count(c.key()))
        next.push_back(c);
    for (const auto &p : unit)
      next.push_back(p);
    set_active(std::move(next));
  }
}

void SpatialMesh::adapt(const std::vector<CellId> &refine_marks, const std::vector<CellId> &coarsen_marks) {
  std::unordered_set<std::uint64_t> r;
  for (const auto &c : refine_marks)
    r.insert(c.key());
  std::vector<CellId> c;
  for (const auto &m : coarsen_marks)
    if (!r.count(m.key()))
      c.push_back(m);
  coarsen(c);
  std::vector<CellId> still;
  for (const auto &m : refine_marks)
    if (is_active(m))
      still.push_back(m);
  refine(still);
}

void SpatialMesh::refine_global(int times) {
  for (int t = 0; t < times; ++t)
    refine(active_);
}

bool SpatialMesh::is_one_irregular() const {
  for (const auto &c : active_)
    for (int f = 0; f < 4; ++f) {
      const CellId nb = shifted(c, f);
      if (!in_domain(nb))
        continue;
      if (auto cov = covering_active(nb); cov && cov->level < c.level - 1)
        return false;
    }
  return true;
}

bool SpatialMesh::is_patch_structured() const {
  for (const auto &c : active_) {
    if (c.level < 1)
      return false;
    const CellId p = c.parent();
    for (int k = 0; k < 4; ++k)
      if (!is_active(p.child(k)))
        return false;
  }
  return true;
}

SpatialMesh SpatialMesh::patch_parent() const {
  if (!is_patch_structured())
    throw std::runtime_error("mesh not patch-structured");
  SpatialMesh out = *this;
  std::unordered_set<std::uint64_t> seen;
  std::vector<CellId> parents;
  for (const auto &c : active_)
    if (seen.insert(c.parent().key()).second)
      parents.push_back(c.parent());
  out.set_active(std::move(parents));
  return out;
}

double SpatialMesh::area() const {
  double a = 0.0;
  for (const auto &c : active_) {
    const double h = box(c).h;
    a += h * h;
  }
  return a;
}

bool SpatialMesh::same_forest(const SpatialMesh &other) const {
  return origin_.x == other.origin_.x && origin_.y == other.origin_.y && root_edge_ == other.root_edge_ &&
         roots_ == other.roots_;
}

bool SpatialMesh::same_active(const SpatialMesh &other) const {
  return same_forest(other) && active_ == other.active_;
}

SpatialMesh refine_cells(SpatialMesh mesh, const std::vector<CellId> &marks) {
  mesh.refine(marks);
  return mesh;
}

SpatialMesh coarsen_cells(SpatialMesh mesh, const std::vector<CellId> &marks) {
  mesh.coarsen(marks);
  return mesh;
}

SpatialMesh patch_parent_mesh(const SpatialMesh &mesh) { return mesh.patch_parent(); }

} // namespace mrdwr::mesh2d
