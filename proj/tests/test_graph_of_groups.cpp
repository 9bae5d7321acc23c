#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gog/graph_of_groups.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace gog;
using namespace gog::testutil;

namespace {

GraphOfGroups single_vertex(const FiniteGroup& g) {
  GraphOfGroups out;
  out.add_vertex(g, "v");
  return out;
}

GraphOfGroups segment(const FiniteGroup& l, const FiniteGroup& r, const FiniteGroup& e,
                      std::vector<int> into_l, std::vector<int> into_r) {
  GraphOfGroups g;
  int u = g.add_vertex(l, "u");
  int w = g.add_vertex(r, "w");
  g.add_edge_pair(u, w, e, Morphism(e, l, std::move(into_l)),
                  Morphism(e, r, std::move(into_r)), "t");
  return g;
}

GraphOfGroups loop(const FiniteGroup& v, const FiniteGroup& e, std::vector<int> a1,
                   std::vector<int> a2, const std::string& name = "s") {
  GraphOfGroups g;
  int u = g.add_vertex(v, "v");
  g.add_edge_pair(u, u, e, Morphism(e, v, std::move(a1)), Morphism(e, v, std::move(a2)),
                  name);
  return g;
}

} // namespace

TEST_CASE("validate: single vertex passes") {
  CHECK(validate(single_vertex(FiniteGroup())).ok);
}

TEST_CASE("validate: disconnected fails") {
  GraphOfGroups g;
  g.add_vertex(FiniteGroup(), "u");
  g.add_vertex(FiniteGroup(), "w");
  auto r = validate(g);
  CHECK_FALSE(r.ok);
  CHECK(r.rule == "connected");
}

TEST_CASE("validate: non-injective attach fails with merged pair") {
  FiniteGroup c2 = make_cyclic(2);
  FiniteGroup c1;
  // C2 edge group into trivial vertex group cannot be a morphism at all;
  // use C2 -> C2 collapsing map instead.
  GraphOfGroups g;
  int u = g.add_vertex(c2, "u");
  int w = g.add_vertex(c2, "w");
  g.add_edge_pair(u, w, c2, Morphism(c2, c2, {0, 0}), Morphism(c2, c2, {0, 1}), "t");
  auto r = validate(g);
  CHECK_FALSE(r.ok);
  CHECK(r.rule == "attach injective");
  (void)c1;
}

TEST_CASE("fundamental presentation: loop over trivial = Z") {
  FiniteGroup t;
  auto g = loop(t, t, {0}, {0});
  auto p = fundamental_presentation(g, g.spanning_tree());
  CHECK(p.generators.size() == 1);
  CHECK(p.relators.empty());
}

TEST_CASE("fundamental presentation: C2 * C2") {
  FiniteGroup c2 = make_cyclic(2);
  auto g = segment(c2, c2, FiniteGroup(), {0}, {0});
  auto p = fundamental_presentation(g, g.spanning_tree());
  CHECK(p.generators.size() == 2);
  CHECK(p.relators.size() == 2); // one square relation per vertex
}

TEST_CASE("fundamental presentation: wedge of two loops = F2") {
  FiniteGroup t;
  GraphOfGroups g;
  int v = g.add_vertex(t, "v");
  g.add_edge_pair(v, v, t, Morphism::identity(t), Morphism::identity(t), "a");
  g.add_edge_pair(v, v, t, Morphism::identity(t), Morphism::identity(t), "b");
  auto p = fundamental_presentation(g, g.spanning_tree());
  CHECK(p.generators.size() == 2);
  CHECK(p.relators.empty());
}

TEST_CASE("ends: basic classification") {
  FiniteGroup t;
  FiniteGroup c2 = make_cyclic(2);
  CHECK(ends(single_vertex(c2)) == Ends::Zero);
  CHECK(ends(loop(t, t, {0}, {0})) == Ends::Two);          // Z
  FiniteGroup c3 = make_cyclic(3);
  CHECK(ends(segment(c2, c3, FiniteGroup(), {0}, {0})) == Ends::Infinite); // C2*C3
}

TEST_CASE("ends: infinite dihedral is two-ended") {
  FiniteGroup c2 = make_cyclic(2);
  auto g = segment(c2, c2, FiniteGroup(), {0}, {0});
  // C2 * C2 over the trivial edge group: both attach indices are 2.
  CHECK(ends(g) == Ends::Two);
}

TEST_CASE("ends agrees with the BFS oracle on small instances") {
  FiniteGroup t;
  FiniteGroup c2 = make_cyclic(2);
  FiniteGroup c3 = make_cyclic(3);

  struct Case {
    GraphOfGroups g;
    const char* label;
  };
  std::vector<Case> cases;
  cases.push_back({single_vertex(t), "trivial"});
  cases.push_back({single_vertex(c2), "C2"});
  cases.push_back({single_vertex(c3), "C3"});
  cases.push_back({loop(t, t, {0}, {0}), "Z"});
  cases.push_back({segment(c2, c2, FiniteGroup(), {0}, {0}), "infinite dihedral"});
  cases.push_back({segment(c2, c3, FiniteGroup(), {0}, {0}), "C2*C3"});
  // F2 wedge
  {
    GraphOfGroups g;
    int v = g.add_vertex(t, "v");
    g.add_edge_pair(v, v, t, Morphism::identity(t), Morphism::identity(t), "a");
    g.add_edge_pair(v, v, t, Morphism::identity(t), Morphism::identity(t), "b");
    cases.push_back({std::move(g), "F2"});
  }
  // C2 x Z via bijective loop
  cases.push_back({loop(c2, c2, {0, 1}, {0, 1}), "C2xZ"});
  // Z * C2
  {
    GraphOfGroups g;
    int v = g.add_vertex(c2, "v");
    g.add_edge_pair(v, v, FiniteGroup(), Morphism(FiniteGroup(), c2, {0}),
                    Morphism(FiniteGroup(), c2, {0}), "s");
    cases.push_back({std::move(g), "Z*C2"});
  }
  for (auto& c : cases) {
    BasePresentation b(c.g, 0);
    INFO(c.label);
    CHECK(ends(c.g) == bfs_ends_oracle(b));
  }
}

TEST_CASE("essential edges") {
  FiniteGroup t;
  FiniteGroup c2 = make_cyclic(2);
  // Loop over trivial vertex: both half trees infinite.
  auto z = loop(t, t, {0}, {0});
  CHECK(is_essential_edge(z, 0));
  // Segment C2 -- C2 with edge group C2 equal to both: finite sides.
  auto seg = segment(c2, c2, c2, {0, 1}, {0, 1});
  CHECK_FALSE(is_essential_edge(seg, 0));
  // Essentiality is orientation-symmetric.
  for (int e = 0; e < z.num_oriented_edges(); ++e) {
    CHECK(is_essential_edge(z, e) == is_essential_edge(z, z.rev(e)));
  }
}

TEST_CASE("reduce collapses a bijective side") {
  FiniteGroup c2 = make_cyclic(2);
  auto g = segment(c2, c2, c2, {0, 1}, {0, 1});
  auto r = reduce(g);
  CHECK(r.num_vertices() == 1);
  CHECK(r.num_edge_pairs() == 0);
  CHECK(r.vertex(0).group.order() == 2);
}

TEST_CASE("reduce is idempotent on random graphs") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    // Random small graph: chain of 2-3 vertices with C1/C2 groups.
    GraphOfGroups g;
    int n = 2 + static_cast<int>(rng() % 2);
    std::vector<int> vs;
    std::vector<FiniteGroup> groups;
    for (int i = 0; i < n; ++i) {
      FiniteGroup gv = (rng() % 2) ? make_cyclic(2) : make_cyclic(4);
      groups.push_back(gv);
      vs.push_back(g.add_vertex(gv, "v" + std::to_string(i)));
    }
    for (int i = 0; i + 1 < n; ++i) {
      // Edge group trivial or C2 into both (when both sides have even order).
      if (rng() % 2) {
        FiniteGroup t;
        g.add_edge_pair(vs[i], vs[i + 1], t, Morphism(t, groups[i], {0}),
                        Morphism(t, groups[i + 1], {0}), "t" + std::to_string(i));
      } else {
        FiniteGroup c2 = make_cyclic(2);
        // order-2 element: index order/2 works for cyclic groups
        int li = groups[i].order() / 2, ri = groups[i + 1].order() / 2;
        g.add_edge_pair(vs[i], vs[i + 1], c2, Morphism(c2, groups[i], {0, li}),
                        Morphism(c2, groups[i + 1], {0, ri}), "t" + std::to_string(i));
      }
    }
    auto r1 = reduce(g);
    auto r2 = reduce(r1);
    CHECK(r1.num_vertices() == r2.num_vertices());
    CHECK(r1.num_edge_pairs() == r2.num_edge_pairs());
    // ends o reduce = ends
    CHECK(ends(g) == ends(r1));
  }
}

TEST_CASE("collapse_edges: all edges of C2-1-C2 yields marked C2*C2") {
  FiniteGroup c2 = make_cyclic(2);
  auto g = segment(c2, c2, FiniteGroup(), {0}, {0});
  auto out = collapse_edges(g, {0});
  CHECK(out.num_vertices() == 1);
  CHECK(out.num_edge_pairs() == 0);
  CHECK(out.vertex(0).marked);
  CHECK(out.vertex(0).marked_gens.size() == 2);
}

TEST_CASE("collapse_edges: nothing collapses to identity") {
  FiniteGroup c2 = make_cyclic(2);
  auto g = segment(c2, c2, FiniteGroup(), {0}, {0});
  auto out = collapse_edges(g, {});
  CHECK(out.num_vertices() == g.num_vertices());
  CHECK(out.num_edge_pairs() == g.num_edge_pairs());
}

TEST_CASE("collapse_edges: collapsing a bijective edge stays finite") {
  FiniteGroup c2 = make_cyclic(2);
  auto g = segment(c2, c2, c2, {0, 1}, {0, 1});
  auto out = collapse_edges(g, {0});
  CHECK(out.num_vertices() == 1);
  CHECK_FALSE(out.vertex(0).marked);
  CHECK(out.vertex(0).group.order() == 2);
}

TEST_CASE("dot export is deterministic") {
  FiniteGroup c2 = make_cyclic(2);
  auto g = segment(c2, c2, FiniteGroup(), {0}, {0});
  CHECK(export_dot(g) == export_dot(g));
  CHECK(export_dot(g).find("u|2") != std::string::npos);
}
