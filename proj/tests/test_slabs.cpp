#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mrdwr/fem/fe_tools.hpp"
#include "mrdwr/slabs/slab_list.hpp"
#include "mrdwr/slabs/transfer.hpp"

using namespace mrdwr;
using doctest::Approx;
using mesh2d::CellId;
using mesh2d::Point;
using mesh2d::SpatialMesh;
using slabs::SlabList;

namespace {

SpatialMesh square(int level) {
  auto m = SpatialMesh::unit_square();
  m.refine_global(level);
  return m;
}

} // namespace

TEST_CASE("characteristic times") {
  auto a = slabs::compute_characteristic_times(1.0, 1.0, 1.0, 1.0);
  CHECK(a.flow == 1.0);
  CHECK(a.transport == 1.0);
  auto b = slabs::compute_characteristic_times(1e-4, 0.1, 1.0, 1.0);
  CHECK(b.flow == 1.0);
  CHECK(b.transport == Approx(1.0));
  CHECK(slabs::compute_characteristic_times(1.0, 1.0, 2.0, 4.0).flow == 0.5);
  CHECK_THROWS(slabs::compute_characteristic_times(0.0, 1.0, 1.0, 1.0));
  CHECK_THROWS(slabs::compute_characteristic_times(1.0, 1.0, -1.0, 1.0));
}

TEST_CASE("initial slab lists with multirate alignment") {
  auto lists = slabs::init_slab_lists(1.0, 4, 8, square(1), square(2));
  CHECK(lists.flow.size() == 4);
  CHECK(lists.transport.size() == 8);
  for (double t : lists.flow.endpoints())
    CHECK(lists.transport.has_endpoint(t));
  CHECK(lists.transport[0].time().right == Approx(0.125));
  CHECK_NOTHROW(slabs::audit_alignment(lists.flow, lists.transport));

  auto same = slabs::init_slab_lists(2.5, 25, 25, square(1), square(1));
  for (std::size_t n = 0; n < 25; ++n) {
    CHECK(same.flow[n].time().length() == Approx(0.1));
    CHECK(same.flow[n].time().right == same.transport[n].time().right);
  }
  CHECK_THROWS_AS(slabs::init_slab_lists(1.0, 3, 4, square(1), square(1)), slabs::AlignmentError);
}

TEST_CASE("find_flow_slab uses left-open intervals") {
  auto lists = slabs::init_slab_lists(1.0, 4, 8, square(1), square(1));
  const auto &s = slabs::find_flow_slab(lists.flow, 0.6);
  CHECK(s.time().left == Approx(0.5));
  CHECK(s.time().right == Approx(0.75));
  CHECK(slabs::find_flow_slab(lists.flow, 0.25).time().right == Approx(0.25));
  CHECK(lists.flow.find(1.0) == 3);
  CHECK_THROWS_AS(lists.flow.find(1.2), std::out_of_range);
  CHECK_THROWS_AS(lists.flow.find(0.0), std::out_of_range);
}

TEST_CASE("splitting a slab bisects it and copies the mesh") {
  std::vector<slabs::Slab> v;
  v.emplace_back(slabs::Subproblem::transport, slabs::TimeCell{0.0, 0.1}, square(2), 1);
  SlabList list(slabs::Subproblem::transport, 0.1, std::move(v));
  list[0].primal.assign(25, 1.0);
  slabs::split_slab_in_time(list, 0);
  REQUIRE(list.size() == 2);
  CHECK(list[0].time().right == Approx(0.05));
  CHECK(list[1].time().left == list[0].time().right);
  CHECK(list[1].mesh().same_active(list[0].mesh()));
  CHECK(list[1].primal.empty());
  CHECK_NOTHROW(list.validate());
}

TEST_CASE("random split sequences keep the alignment audit green") {
  std::mt19937 rng(21);
  for (int run = 0; run < 50; ++run) {
    auto lists = slabs::init_slab_lists(1.0, 2, 6 + 2 * (run % 3), square(1), square(2));
    const double f0 = lists.flow.size();
    for (int step = 0; step < 20; ++step) {
      if (rng() % 3 == 0) {
        const auto flow_before = lists.flow.endpoints();
        lists.transport.split(rng() % lists.transport.size());
        CHECK(lists.flow.endpoints() == flow_before);
      } else {
        slabs::split_flow_slab(lists.flow, lists.transport, rng() % lists.flow.size());
      }
      REQUIRE_NOTHROW(slabs::audit_alignment(lists.flow, lists.transport));
    }
    CHECK(lists.flow.size() > f0);
  }
}

TEST_CASE("flow split forces transport splits when the midpoint is missing") {
  auto lists = slabs::init_slab_lists(1.0, 1, 3, square(1), square(1));
  // midpoint 0.5 lies inside the transport cell (1/3, 2/3]
  const int forced = slabs::split_flow_slab(lists.flow, lists.transport, 0);
  CHECK(forced > 0);
  CHECK(lists.transport.has_endpoint(lists.flow[0].time().right));
  CHECK_NOTHROW(slabs::audit_alignment(lists.flow, lists.transport));
}

TEST_CASE("audit rejects a transport cell longer than its flow cell") {
  auto lists = slabs::init_slab_lists(1.0, 2, 2, square(1), square(1));
  lists.flow.split(0);
  lists.flow.split(0);
  // flow (0,0.25] is not a transport endpoint
  CHECK_THROWS_AS(slabs::audit_alignment(lists.flow, lists.transport), slabs::AlignmentError);
}

TEST_CASE("slab csv lists both subproblems") {
  auto lists = slabs::init_slab_lists(1.0, 2, 4, square(1), square(2));
  std::ostringstream os;
  slabs::write_slabs_csv(os, lists.flow, lists.transport);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "subproblem,n,t_left,t_right,cells,dofs");
  std::getline(is, line);
  CHECK(line == "flow,1,0,0.5,4,59");
  int rows = 1;
  while (std::getline(is, line))
    ++rows;
  CHECK(rows == 6);
}

TEST_CASE("transfer of a constant is the same constant") {
  auto a = square(2);
  a.refine({CellId{2, 1, 1}});
  auto b = square(1);
  b.refine({CellId{1, 1, 0}});
  for (int pa = 1; pa <= 2; ++pa)
    for (int pb = 1; pb <= 2; ++pb) {
      fem::DofMap da(a, pa), db(b, pb);
      const auto out = slabs::transfer_between_meshes(a, da, std::vector<double>(da.n_dofs(), 3.5), b, db);
      for (double v : out)
        CHECK(v == Approx(3.5));
    }
}

TEST_CASE("Q1 transfer to a refined mesh is injection") {
  auto a = square(1);
  auto b = square(3);
  fem::DofMap da(a, 1), db(b, 1);
  std::mt19937 rng(4);
  std::vector<double> u(da.n_dofs());
  for (auto &v : u)
    v = rng() % 100 / 10.0;
  const auto w = slabs::transfer_between_meshes(a, da, u, b, db);
  std::uniform_real_distribution<double> U(0, 1);
  for (int k = 0; k < 100; ++k) {
    const Point x{U(rng), U(rng)};
    const auto ha = a.locate(x), hb = b.locate(x);
    CHECK(fem::evaluate(db, hb->first, w, hb->second) == Approx(fem::evaluate(da, ha->first, u, ha->second)));
  }
}

TEST_CASE("Q2 field onto a partly coarser mesh equals pointwise evaluation") {
  auto a = square(2);
  a.refine({CellId{2, 0, 0}, CellId{2, 1, 0}});
  auto b = square(2);
  b.refine({CellId{2, 3, 3}});
  b.coarsen({CellId{2, 0, 0}, CellId{2, 1, 0}, CellId{2, 0, 1}, CellId{2, 1, 1}});
  fem::DofMap da(a, 2), db(b, 2);
  std::mt19937 rng(8);
  std::vector<double> u(da.n_dofs());
  for (auto &v : u)
    v = (rng() % 200) / 100.0 - 1.0;
  da.hanging_constraints().distribute(u);
  const auto w = slabs::transfer_between_meshes(a, da, u, b, db);
  // every free target node takes the source value at its position
  for (std::size_t k = 0; k < db.n_dofs(); ++k) {
    if (db.hanging_constraints().is_constrained(static_cast<int>(k)))
      continue;
    const auto hit = a.locate(db.support_point(static_cast<int>(k)));
    CHECK(w[k] == Approx(fem::evaluate(da, hit->first, u, hit->second)).epsilon(1e-12));
  }
}

TEST_CASE("transfer reproduces polynomials of the target degree") {
  std::mt19937 rng(13);
  for (int run = 0; run < 20; ++run) {
    auto a = square(2), b = square(2);
    for (int k = 0; k < 3; ++k) {
      a.refine({a.cell(rng() % a.n_active())});
      b.refine({b.cell(rng() % b.n_active())});
    }
    for (int p = 1; p <= 2; ++p) {
      auto f = [p](Point x) { return p == 1 ? 0.5 - x.x + 2 * x.x * x.y : x.x * x.x * x.y - x.y * x.y + 1; };
      fem::DofMap da(a, 2), db(b, p);
      const auto u = fem::interpolate(da, f);
      const auto w = slabs::transfer_between_meshes(a, da, u, b, db);
      CHECK(fem::l2_error(db, w, f) < 1e-12);
    }
  }
}

TEST_CASE("transfer transpose is the adjoint") {
  auto a = square(2);
  a.refine({CellId{2, 2, 2}});
  auto b = square(1);
  fem::DofMap da(a, 1), db(b, 2);
  const auto t = slabs::build_transfer(a, da, b, db);
  std::mt19937 rng(1);
  std::vector<double> x(da.n_dofs()), y(db.n_dofs());
  for (auto &v : x)
    v = rng() % 17 - 8.0;
  for (auto &v : y)
    v = rng() % 13 - 6.0;
  const auto tx = t.apply(x), ty = t.apply_transpose(y);
  double l = 0, r = 0;
  for (std::size_t k = 0; k < y.size(); ++k)
    l += tx[k] * y[k];
  for (std::size_t k = 0; k < x.size(); ++k)
    r += ty[k] * x[k];
  CHECK(l == Approx(r));
}

TEST_CASE("transfer between different forests is rejected") {
  auto a = square(1);
  auto b = SpatialMesh::rectangle({0, 0}, 0.5, 2, 2);
  fem::DofMap da(a, 1), db(b, 1);
  CHECK_THROWS_WITH(slabs::build_transfer(a, da, b, db), "incompatible roots");
}
