#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gog/core_complex.hpp"
#include "split_fixtures.hpp"
#include "window_oracle.hpp"

using namespace gog;
using namespace gog::testutil;

TEST_CASE("diagonal core mirrors the quotient graph") {
  auto b = free_base(2);
  for (auto make : {split_a_star_b, split_ab_star_b, split_a2}) {
    auto t1 = make(*b);
    auto t2 = make(*b);
    auto z = build_core(t1, t2);
    CHECK(z.diagonal);
    CHECK(z.is_core);
    CHECK(z.count(CellKind::Vertex) == t1.num_vertices());
    CHECK(z.count(CellKind::EdgeDiag) == t1.num_pairs());
    CHECK(z.count(CellKind::Square) == 0);
    CHECK(check_core(z).ok);
    auto l1 = leaf_space(z, 1);
    CHECK(static_cast<int>(l1.nodes.size()) == t1.num_vertices());
    CHECK(static_cast<int>(l1.arcs.size()) == t1.num_pairs());
  }
}

TEST_CASE("core of the F2 pair: finite, squares, checked by the window oracle") {
  auto b = free_base(2);
  auto t1 = split_a_star_b(*b);
  auto t2 = split_ab_star_b(*b);
  auto z = build_core(t1, t2, Budgets{}, /*allow_degenerate=*/true);
  CHECK(z.is_core);
  CHECK(z.count(CellKind::Square) >= 1);
  auto rep = check_core(z);
  CHECK(rep.ok);

  WindowSegment s1{{"a"}, {"b"}, {}};
  WindowSegment s2{{"ab"}, {"b"}, {}};
  auto wrep = window_check_core(z, s1, s2, 2, 6);
  INFO(wrep.detail);
  CHECK(wrep.ok);
  CHECK(wrep.minimal_cells == z.num_cells());
}

TEST_CASE("core of the a^2 amalgam against the free splitting") {
  auto b = free_base(2);
  auto t1 = split_a2(*b);
  auto t2 = split_a_star_b(*b);
  auto z = build_core(t1, t2);
  CHECK(z.is_core);
  CHECK(check_core(z).ok);
  WindowSegment s1{{"a"}, {"aa", "b"}, {"aa"}};
  WindowSegment s2{{"a"}, {"b"}, {}};
  auto wrep = window_check_core(z, s1, s2, 2, 6);
  INFO(wrep.detail);
  CHECK(wrep.ok);
}

TEST_CASE("core of the F3 amalgam pair") {
  auto b = free_base(3);
  auto t1 = split_f3_amalgam(*b);
  auto t2 = split_f3_free(*b);
  auto z = build_core(t1, t2);
  CHECK(z.is_core);
  CHECK(check_core(z).ok);
  CHECK(z.num_cells() == 5);
  WindowSegment s1{{"a", "b"}, {"aabb", "c"}, {"aabb"}};
  WindowSegment s2{{"a", "b"}, {"c"}, {}};
  auto wrep = window_check_core(z, s1, s2, 3, 5);
  INFO(wrep.detail);
  CHECK(wrep.ok);
  CHECK(wrep.minimal_cells == 5);
}

TEST_CASE("build_core rejects out-of-regime inputs without the override") {
  auto b = free_base(2);
  auto t1 = split_a_star_b(*b);
  auto t2 = split_ab_star_b(*b);
  CHECK_THROWS_AS(build_core(t1, t2), hypothesis_violation);
}

TEST_CASE("fibers: diagonal has point fibers, F3 fiber sizes match ellipticity") {
  auto b = free_base(3);
  auto t1 = split_f3_amalgam(*b);
  auto t2 = split_f3_free(*b);
  auto z = build_core(t1, t2);
  // Edge fiber of the t_inf edge (group <a^2b^2>, elliptic in T_f): finite.
  auto fe = z.fiber_quotient(1, true, 0);
  auto size = z.fiber_size(fe);
  REQUIRE(size.has_value());
  CHECK(*size >= 1);
  // Vertex fiber of <a^2b^2, c> (not elliptic in T_f): infinite.
  auto fv = z.fiber_quotient(1, false, 1);
  CHECK_FALSE(z.fiber_size(fv).has_value());
  // Quotients of fibers embed: node cells are distinct complex cells.
  std::set<int> seen(fv.node_cells.begin(), fv.node_cells.end());
  CHECK(seen.size() == fv.node_cells.size());
}

TEST_CASE("hypercarrier of a square-bearing edge has product structure") {
  auto b = free_base(2);
  auto t1 = split_a_star_b(*b);
  auto t2 = split_ab_star_b(*b);
  auto z = build_core(t1, t2, Budgets{}, true);
  // For each factor-1 edge orbit, the hypercarrier squares match the arcs of
  // the edge fiber.
  auto h = hypercarrier(z, 1, 0);
  int squares = 0;
  for (int c : h.cells) {
    if (z.cell(c).kind == CellKind::Square) ++squares;
  }
  auto fe = z.fiber_quotient(1, true, 0);
  CHECK(squares == static_cast<int>(fe.arc_cells.size()));
  // Diagonal core: no squares, empty hypercarriers.
  auto t3 = split_a_star_b(*b);
  auto zd = build_core(t1, t3);
  CHECK(hypercarrier(zd, 1, 0).cells.empty());
}

TEST_CASE("transverse free faces: none on the diagonal") {
  auto b = free_base(2);
  auto t1 = split_a_star_b(*b);
  auto t2 = split_a_star_b(*b);
  auto z = build_core(t1, t2);
  CHECK(transverse_free_faces(z, 1).empty());
  CHECK(transverse_free_faces(z, 2).empty());
}

TEST_CASE("check_core fails on a manufactured violation") {
  auto b = free_base(2);
  auto t1 = split_a_star_b(*b);
  auto t2 = split_ab_star_b(*b);
  auto z = build_core(t1, t2, Budgets{}, true);
  // Remove one square orbit: edge fibers disconnect or faces dangle.
  auto squares = z.cells_of(CellKind::Square);
  REQUIRE_FALSE(squares.empty());
  auto broken = z;
  broken.remove_cells({squares[0]});
  auto rep = check_core(broken);
  CHECK_FALSE(rep.ok);
}

TEST_CASE("exports are deterministic") {
  auto b = free_base(2);
  auto t1 = split_a_star_b(*b);
  auto t2 = split_ab_star_b(*b);
  auto z1 = build_core(t1, t2, Budgets{}, true);
  auto z2 = build_core(t1, t2, Budgets{}, true);
  CHECK(export_complex_json(z1) == export_complex_json(z2));
  CHECK(export_complex_dot(z1) == export_complex_dot(z2));
  CHECK(z1.signature() == z2.signature());
}

TEST_CASE("family members elliptic in both factors are certified") {
  auto b = free_base(3);
  auto t1 = split_f3_amalgam(*b);
  auto t2 = split_f3_free(*b);
  auto z = build_core(t1, t2);
  std::vector<SubgroupSpec> family{sub_of(*b, {"a.a.b.b"})};
  auto rep = check_core(z, family);
  CHECK(rep.ok);
}
