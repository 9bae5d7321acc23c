#ifndef GOG_STALLINGS_HPP
#define GOG_STALLINGS_HPP

#include <map>
#include <optional>
#include <vector>

#include "gog/word.hpp"

namespace gog {

// Letter words: sequences of oriented base-graph edge ids, the element
// representation for subgroups of a free base presentation. Reduction
// cancels adjacent mutually-reverse letters.
using Letters = std::vector<int>;

Letters reduce_letters(const GraphOfGroups& g, Letters w);
Letters invert_letters(const GraphOfGroups& g, const Letters& w);
Letters concat_reduced(const GraphOfGroups& g, const Letters& a, const Letters& b);
bool shortlex_letters_less(const Letters& a, const Letters& b);

// A formal product over an external generator list: +(k+1) means generator k,
// -(k+1) its inverse. Used to hand back membership witnesses that re-evaluate
// to the traced word.
using Formal = std::vector<int>;
Formal reduce_formal(Formal f);

/// Folded subgroup graph over the base graph (Stallings automaton typed by
/// base vertices). Carries fold history so membership comes with a witness
/// expression in the original generators.
class FoldedGraph {
 public:
  FoldedGraph(const BasePresentation* base, int basepoint_type);

  // Adds a loop at the root spelling `w` (must be a closed reduced path at
  // the basepoint type), remembered as generator `gen_index`.
  void add_generator_loop(const Letters& w, int gen_index);
  void fold();

  int num_vertices() const { return static_cast<int>(alive_.size()); }
  int root() const { return find(root_); }
  int vertex_type(int v) const { return type_[find(v)]; }

  // Deterministic transition; -1 when absent. Only valid after fold().
  int step(int v, int letter) const;

  bool accepts(const Letters& reduced_loop) const;
  std::optional<Formal> witness(const Letters& reduced_loop) const;

  /// Free basis of the subgroup: one reduced word per non-tree edge of the
  /// core. The graph is pruned to its core (no dangling trees) by fold().
  std::vector<Letters> basis() const;
  /// Rewrites a member over the basis ordering returned by basis():
  /// +-(k+1) refers to basis element k. nullopt when not a member.
  std::optional<Formal> spell_in_basis(const Letters& reduced_loop) const;
  int rank() const;
  bool is_trivial() const { return rank() == 0; }

  /// Covering-completeness against the base graph: every letter departing a
  /// vertex's type is realized. Complete graphs are finite-index.
  bool complete() const;
  /// Number of cosets in the ambient group; nullopt when infinite.
  std::optional<long> index_in_ambient() const;
  /// Reduced coset representatives (one per vertex of basepoint type),
  /// identity first. Only for complete graphs.
  std::vector<Letters> coset_transversal() const;

  /// Trace a reduced path from an arbitrary vertex; returns end vertex or -1.
  int trace(int from, const Letters& w) const;
  /// Reduced word labeling the tree path root -> v.
  Letters access_word(int v) const;

  const BasePresentation& base() const { return *base_; }

  // Internal sequential ids for live vertices, stable across queries.
  std::vector<int> live_vertices() const;

 private:
  struct Edge {
    int from, to, letter;
    Formal phi;
    bool dead = false;
  };
  struct BasisData {
    std::vector<int> tree_edges;            // sorted edge ids
    std::map<int, int> edge_to_basis;       // non-tree edge id -> basis index
    std::vector<Letters> words;
  };
  const BasisData& basis_data() const;

  const BasePresentation* base_;
  int root_;
  std::vector<int> type_;
  std::vector<int> parent_; // union-find
  std::vector<char> dead_vertex_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_; // vertex -> edge ids
  std::vector<int> alive_;                 // filled by fold()
  bool folded_ = false;

  int find(int v) const;
  int new_vertex(int type);
  void add_edge(int from, int to, int letter, Formal phi);
  void prune();
  void rebuild_index();
  mutable std::map<std::pair<int, int>, int> step_cache_; // (vertex,letter)->edge id
  mutable std::optional<BasisData> basis_cache_;
};

/// Folds the subgroup generated by closed reduced letter-words.
FoldedGraph fold_subgroup(const BasePresentation& base, int basepoint_type,
                          const std::vector<Letters>& gens);

/// Shortlex-minimal reduced word of the left coset g*W (elements g*w).
Letters min_coset_rep(const FoldedGraph& w_graph, const Letters& g);

/// Shortlex-minimal reduced word of the double coset S*g*W.
Letters min_double_rep(const FoldedGraph& s_graph, const Letters& g,
                       const FoldedGraph& w_graph);

/// Some element of S intersected with the coset C*h; nullopt if empty.
std::optional<Letters> find_in_subgroup_coset(const FoldedGraph& s_graph,
                                              const FoldedGraph& c_graph,
                                              const Letters& h);

/// Pullback core: generators of the intersection of two subgroups.
std::vector<Letters> intersect_subgroups(const FoldedGraph& a, const FoldedGraph& b);

} // namespace gog

#endif
