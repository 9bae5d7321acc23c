#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gog/splitting.hpp"
#include "split_fixtures.hpp"

using namespace gog;
using namespace gog::testutil;

TEST_CASE("splittings validate") {
  auto b2 = free_base(2);
  auto b3 = free_base(3);
  CHECK(split_a_star_b(*b2).validate().ok);
  CHECK(split_ab_star_b(*b2).validate().ok);
  CHECK(split_wedge(*b2).validate().ok);
  CHECK(split_a2(*b2).validate().ok);
  CHECK(split_f3_amalgam(*b3).validate().ok);
  CHECK(split_f3_free(*b3).validate().ok);
}

TEST_CASE("same_splitting detects equality and difference") {
  auto b = free_base(2);
  auto s1 = split_a_star_b(*b);
  auto s2 = split_a_star_b(*b);
  auto s3 = split_ab_star_b(*b);
  CHECK(s1.same_splitting(s2));
  CHECK_FALSE(s1.same_splitting(s3));
}

TEST_CASE("spath reduction computes tree distances") {
  auto b = free_base(2);
  auto s = split_a_star_b(*b);
  SPath p = s.reduce_spath(s.to_spath(b->parse("a.b")));
  CHECK(p.edges.size() == 2);
  SPath pa = s.reduce_spath(s.to_spath(b->parse("a")));
  CHECK(pa.edges.empty());
}

TEST_CASE("action and stabilizers") {
  auto b = free_base(2);
  auto s = split_a_star_b(*b);
  TreeVertexCell vb = s.vertex_cell(1, b->identity());
  CHECK(s.cells_equal(s.act(b->identity(), vb), vb));
  CHECK(s.cells_equal(s.act(b->parse("b"), vb), vb));
  CHECK_FALSE(s.cells_equal(s.act(b->parse("a"), vb), vb));
  TreeVertexCell moved = s.act(b->parse("a"), vb);
  SubgroupSpec st = s.stabilizer(moved);
  CHECK(st.membership(b->parse("a.b.a^-1")).cert == Cert::Yes);
  CHECK(st.membership(b->parse("b")).cert == Cert::No);
  std::mt19937_64 rng(31);
  for (int t = 0; t < 40; ++t) {
    GWord g = random_element(*b, rng, t % 6);
    GWord h = random_element(*b, rng, (t + 3) % 6);
    auto lhs = s.act(g, s.act(h, vb));
    auto rhs = s.act(b->normal_form(b->mul(g, h)), vb);
    CHECK(s.cells_equal(lhs, rhs));
  }
}

TEST_CASE("expand_ball: wedge has degree 4 at radius 1") {
  auto b = free_base(2);
  auto s = split_wedge(*b);
  auto ball = s.expand_ball(s.vertex_cell(0, b->identity()), 1);
  CHECK(ball.vertices.size() == 5);
  CHECK(ball.edges.size() == 4);
}

TEST_CASE("expand_ball radius 0 is a single vertex") {
  auto b = free_base(2);
  auto s = split_a_star_b(*b);
  auto ball = s.expand_ball(s.vertex_cell(0, b->identity()), 0);
  CHECK(ball.vertices.size() == 1);
  CHECK(ball.edges.empty());
}

TEST_CASE("expand_ball: degrees match index sums") {
  auto b = free_base(2);
  auto s = split_a2(*b);
  // Vertex A = <a> has side group <a^2> of index 2; its W-neighbours have
  // infinite valence, so only radius 1 is expandable from A.
  auto ball = s.expand_ball(s.vertex_cell(0, b->identity()), 1);
  std::map<int, int> deg;
  for (auto [e, v] : ball.incidence) deg[v]++;
  CHECK(deg[0] == 2);
  CHECK(ball.vertices.size() == 3);
  CHECK_THROWS_AS(s.expand_ball(s.vertex_cell(0, b->identity()), 2), invalid_input);

  // Radius stability on the locally finite wedge tree instead.
  auto s2 = split_wedge(*b);
  auto big = s2.expand_ball(s2.vertex_cell(0, b->identity()), 2);
  auto small = s2.expand_ball(s2.vertex_cell(0, b->identity()), 1);
  for (const auto& v : small.vertices) {
    bool found = false;
    for (const auto& w : big.vertices) {
      if (v == w) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("expand_ball errors on infinite local index") {
  auto b = free_base(3);
  auto s = split_f3_amalgam(*b);
  CHECK_THROWS_AS(s.expand_ball(s.vertex_cell(0, b->identity()), 1), invalid_input);
}

TEST_CASE("ellipticity: vertex group is elliptic at its vertex") {
  auto b = free_base(2);
  auto s = split_a_star_b(*b);
  auto h = sub_of(*b, {"a"});
  auto r = s.is_elliptic(h);
  CHECK(r.cert == Cert::Yes);
  CHECK(r.fixed.orbit == 0);
}

TEST_CASE("ellipticity: <ab> is hyperbolic with translation length 2") {
  auto b = free_base(2);
  auto s = split_a_star_b(*b);
  auto r = s.is_elliptic(sub_of(*b, {"a.b"}));
  CHECK(r.cert == Cert::No);
  CHECK(r.translation == 2);
}

TEST_CASE("ellipticity: <a^2> fixes the <a> vertex") {
  auto b = free_base(2);
  auto s = split_a_star_b(*b);
  auto r = s.is_elliptic(sub_of(*b, {"a.a"}));
  CHECK(r.cert == Cert::Yes);
  CHECK(r.fixed.orbit == 0);
}

TEST_CASE("ellipticity is conjugation covariant") {
  auto b = free_base(2);
  auto s = split_a_star_b(*b);
  std::mt19937_64 rng(37);
  for (int t = 0; t < 20; ++t) {
    GWord g = random_element(*b, rng, 1 + t % 5);
    auto h = sub_of(*b, {"a.a"}).conjugate(g);
    auto r = s.is_elliptic(h);
    REQUIRE(r.cert == Cert::Yes);
    auto back = s.act(b->normal_form(b->inv(g)), r.fixed);
    auto r0 = s.is_elliptic(sub_of(*b, {"a.a"}));
    CHECK(s.cells_equal(back, r0.fixed));
  }
}

TEST_CASE("minimal subtree: elliptic subgroup gives a vertex") {
  auto b = free_base(2);
  auto s = split_a_star_b(*b);
  auto r = minimal_subtree(s, sub_of(*b, {"a"}));
  CHECK(r.elliptic);
  CHECK(r.fixed.orbit == 0);
}

TEST_CASE("minimal subtree: axis of ab") {
  auto b = free_base(2);
  auto s = split_a_star_b(*b);
  auto r = minimal_subtree(s, sub_of(*b, {"a.b"}));
  REQUIRE_FALSE(r.elliptic);
  CHECK(r.tree.nodes.size() == 2);
  CHECK(r.tree.arcs.size() == 2);
  CHECK(r.tree.spur_free(*b));
}

TEST_CASE("minimal subtree of the whole group is the quotient graph") {
  auto b = free_base(2);
  auto s = split_a_star_b(*b);
  auto r = minimal_subtree(s, SubgroupSpec::whole_group(*b));
  REQUIRE_FALSE(r.elliptic);
  CHECK(r.tree.nodes.size() == 2);
  CHECK(r.tree.arcs.size() == 1);
  CHECK(r.tree.spur_free(*b));
}

TEST_CASE("full quotient tree and spur freeness") {
  auto b = free_base(2);
  auto s = split_a_star_b(*b);
  auto t = full_quotient_tree(s);
  CHECK(t.nodes.size() == 2);
  CHECK(t.arcs.size() == 1);
  CHECK(t.spur_free(*b));
}

TEST_CASE("essential pairs of splittings") {
  auto b = free_base(2);
  CHECK(split_a_star_b(*b).is_essential_pair(0));
  CHECK(split_a2(*b).is_essential_pair(0));
  CHECK(split_wedge(*b).is_essential_pair(0));
}

TEST_CASE("geodesics: distance under the action") {
  auto b = free_base(2);
  auto s = split_a_star_b(*b);
  TreeVertexCell va = s.vertex_cell(0, b->identity());
  CHECK(s.distance(va, va) == 0);
  CHECK(s.distance(va, s.vertex_cell(1, b->identity())) == 1);
  CHECK(s.distance(va, s.act(b->parse("a.b"), va)) == 2);
  auto geo = s.geodesic(va, s.act(b->parse("a.b"), va));
  CHECK(geo.vertices.size() == 3);
  CHECK(geo.edges.size() == 2);
  for (size_t i = 0; i < geo.edges.size(); ++i) {
    auto ends = s.endpoints(geo.edges[i]);
    bool fwd = s.cells_equal(ends.first, geo.vertices[i]) &&
               s.cells_equal(ends.second, geo.vertices[i + 1]);
    bool bwd = s.cells_equal(ends.second, geo.vertices[i]) &&
               s.cells_equal(ends.first, geo.vertices[i + 1]);
    CHECK((fwd || bwd));
  }
}

TEST_CASE("non-free base: the C2*C2 tautological splitting") {
  FiniteGroup c2 = make_cyclic(2);
  auto d = segment_base(c2, c2, make_cyclic(1), {0}, {0});
  auto s = MarkedSplitting::build(*d, SubgroupSpec::whole_group(*d));
  auto gu = d->parse("u:c1");
  GWord gw = d->group_generators()[1];
  int va = s.add_vertex(SubgroupSpec(d.get(), {gu}), "U");
  int vw = s.add_vertex(SubgroupSpec(d.get(), {gw}), "W");
  int e = s.add_edge_pair(va, vw, SubgroupSpec::trivial(*d), d->identity(), "s");
  SPath mu{0, {gu}, {}};
  SPath mw{0, {d->identity(), gw, d->identity()}, {e, e + 1}};
  s.finalize(va, {mu, mw});
  CHECK(s.validate().ok);
  auto ball = s.expand_ball(s.vertex_cell(0, d->identity()), 2);
  CHECK(ball.vertices.size() == 5);
  CHECK(ball.edges.size() == 4);
}
