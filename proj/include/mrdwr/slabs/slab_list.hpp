#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "mrdwr/fem/dof_map.hpp"
#include "mrdwr/mesh2d/spatial_mesh.hpp"

namespace mrdwr::slabs {

enum class Subproblem { flow, transport };
const char *to_string(Subproblem s);

/// Left-open time cell (left, right].
struct TimeCell {
  double left = 0.0;
  double right = 0.0;
  double length() const { return right - left; }
  double midpoint() const { return 0.5 * (left + right); }
};

struct AlignmentError : std::logic_error {
  using std::logic_error::logic_error;
};

/// One space-time slab holding a single time cell. DoF maps for the degrees
/// in use are cached and dropped whenever the mesh changes.
class Slab {
public:
  Slab(Subproblem kind, TimeCell time, mesh2d::SpatialMesh mesh, int degree);
  Slab(const Slab &other);
  Slab &operator=(const Slab &other);

  Subproblem kind() const { return kind_; }
  const TimeCell &time() const { return time_; }
  void set_time(TimeCell t) { time_ = t; }
  /// Spatial degree of the primal field (velocity degree for flow).
  int degree() const { return degree_; }

  const mesh2d::SpatialMesh &mesh() const { return mesh_; }
  void set_mesh(mesh2d::SpatialMesh mesh);
  const fem::DofMap &dofs(int degree) const;

  /// Space-time unknowns of the primal discretization.
  std::size_t n_dofs() const;

  // solution storage, owned by the solvers
  std::vector<double> primal;
  std::vector<double> dual;

private:
  Subproblem kind_;
  TimeCell time_;
  mesh2d::SpatialMesh mesh_;
  int degree_;
  mutable std::mutex cache_mutex_;
  mutable std::map<int, std::shared_ptr<const fem::DofMap>> cache_;
};

/// Ordered slabs partitioning (0, T].
class SlabList {
public:
  SlabList(Subproblem kind, double end_time, std::vector<Slab> slabs);

  Subproblem kind() const { return kind_; }
  double end_time() const { return end_time_; }
  std::size_t size() const { return slabs_.size(); }
  Slab &operator[](std::size_t n) { return slabs_[n]; }
  const Slab &operator[](std::size_t n) const { return slabs_[n]; }
  auto begin() { return slabs_.begin(); }
  auto end() { return slabs_.end(); }
  auto begin() const { return slabs_.begin(); }
  auto end() const { return slabs_.end(); }

  /// 0, t_1, ..., T.
  std::vector<double> endpoints() const;
  bool has_endpoint(double t) const;
  /// Index of the slab with t in (left, right]; throws std::out_of_range.
  std::size_t find(double t) const;
  /// Replaces slab n by its two halves; meshes and degree are copied,
  /// solution storage is cleared.
  void split(std::size_t n);
  /// Sets slab n's right endpoint (and n+1's left) to t.
  void move_endpoint(std::size_t n, double t);

  double min_length() const;
  double max_length() const;
  std::size_t total_dofs() const;
  std::size_t max_cells() const;

  /// Throws AlignmentError if the slabs do not partition (0, T].
  void validate() const;

  double tolerance() const { return 1e-10 * end_time_; }

private:
  Subproblem kind_;
  double end_time_;
  std::vector<Slab> slabs_;
};

struct SlabLists {
  SlabList flow;
  SlabList transport;
};

/// Equidistant initial lists, one time cell per slab.
SlabLists init_slab_lists(double end_time, int n_flow, int n_transport, const mesh2d::SpatialMesh &flow_mesh,
                          const mesh2d::SpatialMesh &transport_mesh, int flow_degree = 2, int transport_degree = 1);

const Slab &find_flow_slab(const SlabList &flow, double t);
void split_slab_in_time(SlabList &list, std::size_t n);

/// Bisects flow slab n. If the new midpoint is not yet a transport endpoint,
/// the transport slab containing it is bisected until it is. Returns the
/// number of such forced transport splits.
int split_flow_slab(SlabList &flow, SlabList &transport, std::size_t n);

/// Flow endpoints must be transport endpoints, and no transport cell may be
/// longer than the flow cell containing it. Both lists must also be valid
/// and carry one-irregular meshes.
void audit_alignment(const SlabList &flow, const SlabList &transport);

struct CharacteristicTimes {
  double flow;
  double transport;
};
CharacteristicTimes compute_characteristic_times(double diffusion, double reaction, double length, double velocity);

/// Columns: subproblem,n,t_left,t_right,cells,dofs.
void write_slabs_csv(std::ostream &out, const SlabList &flow, const SlabList &transport);

} // namespace mrdwr::slabs
