#include "mrdwr/fem/fe_tools.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "mrdwr/fem/lagrange.hpp"

namespace mrdwr::fem {

ReferenceTable::ReferenceTable(int p, const QuadratureRule2D &rule)
    : p_(p), ns_(shape_count(p)), points_(rule.points), weights_(rule.weights) {
  fill();
}

ReferenceTable::ReferenceTable(int p, const std::vector<Point> &points)
    : p_(p), ns_(shape_count(p)), points_(points), weights_(points.size(), 0.0) {
  fill();
}

void ReferenceTable::fill() {
  val_.resize(points_.size() * ns_);
  grad_.resize(points_.size() * ns_);
  lap_.resize(points_.size() * ns_);
  for (std::size_t q = 0; q < points_.size(); ++q) {
    const ShapeValues s = shape_eval(p_, points_[q]);
    for (int i = 0; i < ns_; ++i) {
      val_[q * ns_ + i] = s.values[i];
      grad_[q * ns_ + i] = s.gradients[i];
      lap_[q * ns_ + i] = s.second[i][0] + s.second[i][1];
    }
  }
}

const ReferenceTable &gauss_table(int p, int n) {
  static std::mutex m;
  static std::map<std::pair<int, int>, std::unique_ptr<ReferenceTable>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto &slot = cache[{p, n}];
  if (!slot)
    slot = std::make_unique<ReferenceTable>(p, tensor_rule(gauss_points(n)));
  return *slot;
}

double CellValues::value_of(const double *local, std::size_t q) const {
  double s = 0.0;
  for (int i = 0; i < n_shapes(); ++i)
    s += local[i] * t_.value(q, i);
  return s;
}

Vec2 CellValues::grad_of(const double *local, std::size_t q) const {
  Vec2 g{0.0, 0.0};
  for (int i = 0; i < n_shapes(); ++i) {
    const Vec2 &r = t_.grad(q, i);
    g[0] += local[i] * r[0];
    g[1] += local[i] * r[1];
  }
  return {g[0] * inv_h_, g[1] * inv_h_};
}

double CellValues::laplacian_of(const double *local, std::size_t q) const {
  double s = 0.0;
  for (int i = 0; i < n_shapes(); ++i)
    s += local[i] * t_.laplacian(q, i);
  return s * inv_h_ * inv_h_;
}

void gather(const DofMap &dofs, std::size_t cell, const std::vector<double> &u, double *out) {
  const auto d = dofs.cell_dofs(cell);
  for (std::size_t i = 0; i < d.size(); ++i)
    out[i] = u[d[i]];
}

std::vector<double> interpolate(const DofMap &dofs, const std::function<double(Point)> &f) {
  std::vector<double> u(dofs.n_dofs());
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] = f(dofs.support_point(static_cast<int>(i)));
  dofs.hanging_constraints().distribute(u);
  return u;
}

double evaluate(const DofMap &dofs, std::size_t cell, const std::vector<double> &u, Point ref) {
  const ShapeValues s = shape_eval(dofs.degree(), ref);
  const auto d = dofs.cell_dofs(cell);
  double v = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    v += u[d[i]] * s.values[i];
  return v;
}

Vec2 evaluate_gradient(const DofMap &dofs, std::size_t cell, const std::vector<double> &u, Point ref) {
  const ShapeValues s = shape_eval(dofs.degree(), ref);
  const auto d = dofs.cell_dofs(cell);
  const double h = dofs.cell_box(cell).h;
  Vec2 g{0.0, 0.0};
  for (std::size_t i = 0; i < d.size(); ++i) {
    g[0] += u[d[i]] * s.gradients[i][0] / h;
    g[1] += u[d[i]] * s.gradients[i][1] / h;
  }
  return g;
}

double integrate(const DofMap &dofs, const std::vector<double> &u) {
  CellValues fe(gauss_table(dofs.degree(), dofs.degree() + 1));
  std::vector<double> loc(dofs.dofs_per_cell());
  double s = 0.0;
  for (std::size_t c = 0; c < dofs.n_cells(); ++c) {
    fe.reinit(dofs.cell_box(c));
    gather(dofs, c, u, loc.data());
    for (std::size_t q = 0; q < fe.n_points(); ++q)
      s += fe.value_of(loc.data(), q) * fe.JxW(q);
  }
  return s;
}

double l2_error(const DofMap &dofs, const std::vector<double> &u, const std::function<double(Point)> &f) {
  CellValues fe(gauss_table(dofs.degree(), std::min(dofs.degree() + 3, 5)));
  std::vector<double> loc(dofs.dofs_per_cell());
  double s = 0.0;
  for (std::size_t c = 0; c < dofs.n_cells(); ++c) {
    fe.reinit(dofs.cell_box(c));
    gather(dofs, c, u, loc.data());
    for (std::size_t q = 0; q < fe.n_points(); ++q) {
      const double e = fe.value_of(loc.data(), q) - f(fe.point(q));
      s += e * e * fe.JxW(q);
    }
  }
  return std::sqrt(s);
}

namespace {
constexpr Point corners[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
}

mesh2d::CornerField corner_field(const DofMap &dofs, const std::string &name, const std::vector<double> &u) {
  mesh2d::CornerField f{name, 1, {}};
  for (std::size_t c = 0; c < dofs.n_cells(); ++c)
    for (const Point &r : corners)
      f.values.push_back(evaluate(dofs, c, u, r));
  return f;
}

mesh2d::CornerField corner_field(const DofMap &dofs, const std::string &name, const std::vector<double> &ux,
                                 const std::vector<double> &uy) {
  mesh2d::CornerField f{name, 3, {}};
  for (std::size_t c = 0; c < dofs.n_cells(); ++c)
    for (const Point &r : corners) {
      f.values.push_back(evaluate(dofs, c, ux, r));
      f.values.push_back(evaluate(dofs, c, uy, r));
      f.values.push_back(0.0);
    }
  return f;
}

} // namespace mrdwr::fem
