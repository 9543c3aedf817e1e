#include "mrdwr/slabs/slab_list.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace mrdwr::slabs {

const char *to_string(Subproblem s) { return s == Subproblem::flow ? "flow" : "transport"; }

Slab::Slab(Subproblem kind, TimeCell time, mesh2d::SpatialMesh mesh, int degree)
    : kind_(kind), time_(time), mesh_(std::move(mesh)), degree_(degree) {
  if (!(time.right > time.left))
    throw std::invalid_argument("slab time cell must have positive length");
  if (degree < 1 || (kind == Subproblem::flow && degree < 2))
    throw std::invalid_argument("unsupported slab degree");
}

Slab::Slab(const Slab &o)
    : primal(o.primal), dual(o.dual), kind_(o.kind_), time_(o.time_), mesh_(o.mesh_), degree_(o.degree_) {
  std::lock_guard lock(o.cache_mutex_);
  cache_ = o.cache_;
}

Slab &Slab::operator=(const Slab &o) {
  if (this == &o)
    return *this;
  primal = o.primal;
  dual = o.dual;
  kind_ = o.kind_;
  time_ = o.time_;
  mesh_ = o.mesh_;
  degree_ = o.degree_;
  std::scoped_lock lock(cache_mutex_, o.cache_mutex_);
  cache_ = o.cache_;
  return *this;
}

void Slab::set_mesh(mesh2d::SpatialMesh mesh) {
  mesh_ = std::move(mesh);
  std::lock_guard lock(cache_mutex_);
  cache_.clear();
  primal.clear();
  dual.clear();
}

const fem::DofMap &Slab::dofs(int degree) const {
  std::lock_guard lock(cache_mutex_);
  auto &slot = cache_[degree];
  if (!slot)
    slot = std::make_shared<const fem::DofMap>(mesh_, degree);
  return *slot;
}

std::size_t Slab::n_dofs() const {
  if (kind_ == Subproblem::flow)
    return 2 * dofs(degree_).n_dofs() + dofs(degree_ - 1).n_dofs();
  return dofs(degree_).n_dofs();
}

SlabList::SlabList(Subproblem kind, double end_time, std::vector<Slab> slabs)
    : kind_(kind), end_time_(end_time), slabs_(std::move(slabs)) {
  validate();
}

std::vector<double> SlabList::endpoints() const {
  std::vector<double> e{0.0};
  for (const auto &s : slabs_)
    e.push_back(s.time().right);
  return e;
}

bool SlabList::has_endpoint(double t) const {
  const double tol = tolerance();
  if (std::abs(t) <= tol)
    return true;
  const auto it = std::lower_bound(slabs_.begin(), slabs_.end(), t - tol,
                                   [](const Slab &s, double v) { return s.time().right < v; });
  return it != slabs_.end() && std::abs(it->time().right - t) <= tol;
}

std::size_t SlabList::find(double t) const {
  const double tol = tolerance();
  if (!(t > tol) || t > end_time_ + tol) {
    std::ostringstream msg;
    msg << "time " << t << " outside (0, " << end_time_ << "]";
    throw std::out_of_range(msg.str());
  }
  const auto it = std::lower_bound(slabs_.begin(), slabs_.end(), t - tol,
                                   [](const Slab &s, double v) { return s.time().right < v; });
  return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - slabs_.begin(), slabs_.size() - 1));
}

void SlabList::split(std::size_t n) {
  if (n >= slabs_.size())
    throw std::out_of_range("slab index out of range");
  const TimeCell t = slabs_[n].time();
  Slab right = slabs_[n];
  right.primal.clear();
  right.dual.clear();
  right.set_time({t.midpoint(), t.right});
  slabs_[n].set_time({t.left, t.midpoint()});
  slabs_[n].primal.clear();
  slabs_[n].dual.clear();
  slabs_.insert(slabs_.begin() + static_cast<std::ptrdiff_t>(n) + 1, std::move(right));
}

void SlabList::move_endpoint(std::size_t n, double t) {
  if (n + 1 >= slabs_.size())
    throw std::out_of_range("cannot move the final endpoint");
  auto a = slabs_[n].time();
  auto b = slabs_[n + 1].time();
  if (!(t > a.left && t < b.right))
    throw std::invalid_argument("endpoint move would invert a slab");
  slabs_[n].set_time({a.left, t});
  slabs_[n + 1].set_time({t, b.right});
}

double SlabList::min_length() const {
  double m = end_time_;
  for (const auto &s : slabs_)
    m = std::min(m, s.time().length());
  return m;
}

double SlabList::max_length() const {
  double m = 0.0;
  for (const auto &s : slabs_)
    m = std::max(m, s.time().length());
  return m;
}

std::size_t SlabList::total_dofs() const {
  std::size_t n = 0;
  for (const auto &s : slabs_)
    n += s.n_dofs();
  return n;
}

std::size_t SlabList::max_cells() const {
  std::size_t n = 0;
  for (const auto &s : slabs_)
    n = std::max(n, s.mesh().n_active());
  return n;
}

void SlabList::validate() const {
  if (slabs_.empty())
    throw AlignmentError(std::string(to_string(kind_)) + " slab list is empty");
  double left = 0.0;
  for (std::size_t n = 0; n < slabs_.size(); ++n) {
    const auto &s = slabs_[n];
    if (s.kind() != kind_)
      throw AlignmentError("slab of the wrong subproblem in list");
    if (s.time().left != left) {
      std::ostringstream msg;
      msg << to_string(kind_) << " slab " << n << " starts at " << s.time().left << ", expected " << left;
      throw AlignmentError(msg.str());
    }
    if (!(s.time().length() > 0.0))
      throw AlignmentError("slab with nonpositive length");
    left = s.time().right;
  }
  if (std::abs(left - end_time_) > tolerance())
    throw AlignmentError("slab list does not end at T");
}

SlabLists init_slab_lists(double end_time, int n_flow, int n_transport, const mesh2d::SpatialMesh &flow_mesh,
                          const mesh2d::SpatialMesh &transport_mesh, int flow_degree, int transport_degree) {
  if (!(end_time > 0.0) || n_flow < 1 || n_transport < 1)
    throw std::invalid_argument("slab counts and T must be positive");
  if (n_flow > n_transport || n_transport % n_flow != 0)
    throw AlignmentError("misaligned endpoint sets");
  auto make = [&](Subproblem kind, int n, const mesh2d::SpatialMesh &mesh, int degree, int stride) {
    std::vector<Slab> v;
    v.reserve(n);
    for (int k = 0; k < n; ++k) {
      // both lists share the same doubles at common endpoints
      const double a = end_time * (k * stride) / n_transport;
      const double b = k + 1 == n ? end_time : end_time * ((k + 1) * stride) / n_transport;
      v.emplace_back(kind, TimeCell{a, b}, mesh, degree);
    }
    return SlabList(kind, end_time, std::move(v));
  };
  return {make(Subproblem::flow, n_flow, flow_mesh, flow_degree, n_transport / n_flow),
          make(Subproblem::transport, n_transport, transport_mesh, transport_degree, 1)};
}

const Slab &find_flow_slab(const SlabList &flow, double t) { return flow[flow.find(t)]; }

void split_slab_in_time(SlabList &list, std::size_t n) { list.split(n); }

int split_flow_slab(SlabList &flow, SlabList &transport, std::size_t n) {
  const double mid = flow[n].time().midpoint();
  int forced = 0;
  while (!transport.has_endpoint(mid)) {
    transport.split(transport.find(mid));
    ++forced;
    if (forced > 64)
      throw AlignmentError("flow midpoint cannot be matched by transport splits");
  }
  flow.split(n);
  // snap to the transport double so later comparisons are exact
  const std::size_t k = transport.find(mid);
  flow.move_endpoint(n, transport[k].time().right);
  return forced;
}

void audit_alignment(const SlabList &flow, const SlabList &transport) {
  flow.validate();
  transport.validate();
  if (std::abs(flow.end_time() - transport.end_time()) > flow.tolerance())
    throw AlignmentError("flow and transport end times differ");
  for (const double t : flow.endpoints())
    if (!transport.has_endpoint(t)) {
      std::ostringstream msg;
      msg << "flow endpoint " << t << " is not a transport endpoint";
      throw AlignmentError(msg.str());
    }
  for (std::size_t k = 0; k < transport.size(); ++k) {
    const auto &tc = transport[k].time();
    const auto &fc = flow[flow.find(tc.right)].time();
    if (tc.length() > fc.length() + flow.tolerance()) {
      std::ostringstream msg;
      msg << "transport slab " << k << " is longer than its flow slab";
      throw AlignmentError(msg.str());
    }
  }
  for (const auto *list : {&flow, &transport})
    for (std::size_t k = 0; k < list->size(); ++k)
      if (!(*list)[k].mesh().is_one_irregular()) {
        std::ostringstream msg;
        msg << to_string(list->kind()) << " slab " << k << " mesh is not one-irregular";
        throw AlignmentError(msg.str());
      }
}

CharacteristicTimes compute_characteristic_times(double diffusion, double reaction, double length, double velocity) {
  if (!(diffusion > 0.0) || !(reaction > 0.0) || !(length > 0.0) || !(velocity > 0.0))
    throw std::invalid_argument("characteristic times need positive coefficients");
  const double convective = length / velocity;
  return {convective, std::min({length * length / diffusion, convective, 1.0 / reaction})};
}

void write_slabs_csv(std::ostream &out, const SlabList &flow, const SlabList &transport) {
  out << "subproblem,n,t_left,t_right,cells,dofs\n";
  const auto prec = out.precision(12);
  for (const auto *list : {&flow, &transport})
    for (std::size_t n = 0; n < list->size(); ++n) {
      const auto &s = (*list)[n];
      out << to_string(list->kind()) << ',' << n + 1 << ',' << s.time().left << ',' << s.time().right << ','
          << s.mesh().n_active() << ',' << s.n_dofs() << '\n';
    }
  out.precision(prec);
}

} // namespace mrdwr::slabs
