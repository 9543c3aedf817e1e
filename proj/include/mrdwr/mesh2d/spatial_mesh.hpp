#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace mrdwr::mesh2d {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned square cell geometry: lower-left corner and edge length.
struct Box {
  double x0 = 0.0;
  double y0 = 0.0;
  double h = 1.0;

  Point center() const { return {x0 + 0.5 * h, y0 + 0.5 * h}; }
  Point to_real(Point ref) const { return {x0 + h * ref.x, y0 + h * ref.y}; }
  Point to_ref(Point p) const { return {(p.x - x0) / h, (p.y - y0) / h}; }
};

/// Cell identity inside the forest.
///
/// All roots sit on one lattice of spacing `root_edge`, so a cell is fully
/// described by its level and its lattice coordinates at that level. The
/// binary digits of (i, j) below the root bits are the child-digit path,
/// which keeps ids stable when a mesh is copied between slabs.
struct CellId {
  int level = 0;
  std::int64_t i = 0;
  std::int64_t j = 0;

  friend bool operator==(const CellId &, const CellId &) = default;
  friend auto operator<=>(const CellId &, const CellId &) = default;

  CellId parent() const { return {level - 1, i >> 1, j >> 1}; }
  CellId child(int c) const { return {level + 1, 2 * i + (c & 1), 2 * j + ((c >> 1) & 1)}; }
  // position among siblings, 0..3, x bit first
  int child_index() const { return static_cast<int>((i & 1) | ((j & 1) << 1)); }
  CellId ancestor(int lvl) const {
    const int s = level - lvl;
    return {lvl, i >> s, j >> s};
  }
  std::uint64_t key() const {
    return (static_cast<std::uint64_t>(level) << 58) | (static_cast<std::uint64_t>(i) << 29) |
           static_cast<std::uint64_t>(j);
  }
};

struct CellIdHash {
  std::size_t operator()(const CellId &c) const noexcept { return std::hash<std::uint64_t>{}(c.key()); }
};

/// Faces are numbered -x, +x, -y, +y.
enum Face : int { left = 0, right = 1, bottom = 2, top = 3 };

class SpatialMesh {
public:
  static constexpr int max_refinement_level = 20;

  SpatialMesh() = default;
  /// Roots are given as lattice coordinates (nonnegative) relative to `origin`.
  SpatialMesh(Point origin, double root_edge, std::vector<std::array<int, 2>> roots);

  static SpatialMesh rectangle(Point origin, double root_edge, int nx, int ny);
  static SpatialMesh unit_square() { return rectangle({0.0, 0.0}, 1.0, 1, 1); }

  Point origin() const { return origin_; }
  double root_edge() const { return root_edge_; }
  std::size_t n_roots() const { return roots_.size(); }
  const std::vector<std::array<int, 2>> &roots() const { return roots_; }

  std::size_t n_active() const { return active_.size(); }
  const std::vector<CellId> &active() const { return active_; }
  const CellId &cell(std::size_t index) const { return active_[index]; }
  std::optional<std::size_t> active_index(const CellId &c) const;
  bool is_active(const CellId &c) const { return index_.count(c.key()) != 0; }

  bool in_domain(const CellId &c) const { return root_index(c) >= 0; }
  int root_index(const CellId &c) const;
  std::string path(const CellId &c) const;

  Box box(const CellId &c) const;
  Box box(std::size_t index) const { return box(active_[index]); }
  double diameter(const CellId &c) const;
  int max_level() const;

  /// The active cell equal to or containing `c`; empty if `c` is outside the
  /// domain or has been refined.
  std::optional<CellId> covering_active(const CellId &c) const;
  /// Active cells across face `f` of `c`: none on the boundary, one equal or
  /// coarser neighbour, or the finer cells touching the face.
  std::vector<CellId> face_neighbors(const CellId &c, int f) const;

  /// Active cell containing `p` plus the reference coordinates of `p` in it.
  std::optional<std::pair<std::size_t, Point>> locate(Point p) const;

  void refine(const std::vector<CellId> &marks);
  void coarsen(const std::vector<CellId> &marks);
  /// Coarsening first, then refinement; a sibling group holding a refine mark
  /// is never merged.
  void adapt(const std::vector<CellId> &refine_marks, const std::vector<CellId> &coarsen_marks);
  void refine_global(int times = 1);

  /// Patch smoothing keeps sibling groups complete, which the 2h patch
  /// interpolation relies on.
  void set_patch_smoothing(bool on) { patch_smoothing_ = on; }
  bool patch_smoothing() const { return patch_smoothing_; }

  bool is_one_irregular() const;
  bool is_patch_structured() const;
  SpatialMesh patch_parent() const;
  double area() const;

  bool same_forest(const SpatialMesh &other) const;
  bool same_active(const SpatialMesh &other) const;

private:
  void set_active(std::vector<CellId> cells);
  std::uint64_t order_key(const CellId &c) const;
  bool coarsen_group_allowed(const CellId &parent) const;
  std::vector<CellId> closure_violations() const;
  void collect_face_descendants(const CellId &c, int f, std::vector<CellId> &out) const;

  Point origin_{};
  double root_edge_ = 1.0;
  std::vector<std::array<int, 2>> roots_;
  std::unordered_map<std::uint64_t, int> root_lookup_;
  std::vector<CellId> active_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  bool patch_smoothing_ = false;
};

SpatialMesh refine_cells(SpatialMesh mesh, const std::vector<CellId> &marks);
SpatialMesh coarsen_cells(SpatialMesh mesh, const std::vector<CellId> &marks);
SpatialMesh patch_parent_mesh(const SpatialMesh &mesh);

} // namespace mrdwr::mesh2d
