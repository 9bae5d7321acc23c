#ifndef GOG_TESTS_HELPERS_HPP
#define GOG_TESTS_HELPERS_HPP

#include <memory>
#include <random>
#include <vector>

#include "gog/subgroup.hpp"
#include "gog/word.hpp"

namespace gog::testutil {

// Free base of rank n: one vertex, loops a, b, c, ...
inline std::shared_ptr<BasePresentation> free_base(int rank) {
  GraphOfGroups g;
  int v = g.add_vertex(FiniteGroup(), "p");
  const char* names[] = {"a", "b", "c", "d"};
  for (int i = 0; i < rank; ++i) {
    FiniteGroup t;
    g.add_edge_pair(v, v, t, Morphism::identity(t), Morphism::identity(t), names[i]);
  }
  return std::make_shared<BasePresentation>(std::move(g), 0);
}

// Segment of two finite groups over an edge group embedded both sides.
inline std::shared_ptr<BasePresentation> segment_base(const FiniteGroup& left,
                                                      const FiniteGroup& right,
                                                      const FiniteGroup& edge,
                                                      std::vector<int> into_left,
                                                      std::vector<int> into_right) {
  GraphOfGroups g;
  int u = g.add_vertex(left, "u");
  int w = g.add_vertex(right, "w");
  g.add_edge_pair(u, w, edge, Morphism(edge, left, std::move(into_left)),
                  Morphism(edge, right, std::move(into_right)), "t");
  return std::make_shared<BasePresentation>(std::move(g), 0);
}

inline GWord random_word(const BasePresentation& b, std::mt19937_64& rng, int len) {
  GWord w = b.identity();
  const GraphOfGroups& g = b.graph();
  for (int i = 0; i < len; ++i) {
    int at = b.end_vertex(w);
    // Random move: either multiply by a vertex element or traverse an edge.
    std::vector<int> outs = g.out_edges(at);
    int order = g.vertex(at).group.order();
    std::uniform_int_distribution<int> pick(0, static_cast<int>(outs.size()) + (order > 1 ? 0 : -1));
    int k = pick(rng);
    if (order > 1 && k == static_cast<int>(outs.size())) {
      std::uniform_int_distribution<int> el(1, order - 1);
      int e = el(rng);
      if (w.steps.empty()) {
        w.head = g.vertex(at).group.mul(w.head, e);
      } else {
        w.steps.back().elem = g.vertex(at).group.mul(w.steps.back().elem, e);
      }
    } else {
      w.steps.push_back(GWord::Step{outs[k % outs.size()], 0});
    }
  }
  return w;
}

// Random closed word at the base vertex (walks home through the tree).
inline GWord random_element(const BasePresentation& b, std::mt19937_64& rng, int len) {
  GWord w = random_word(b, rng, len);
  GWord home = b.tree_path(b.end_vertex(w));
  return b.mul(w, b.inv(home));
}

} // namespace gog::testutil

#endif
