#ifndef GOG_WORD_HPP
#define GOG_WORD_HPP

#include <memory>
#include <string>
#include <vector>

#include "gog/graph_of_groups.hpp"

namespace gog {

class BasePresentation;

/// A path in the fundamental groupoid of the base graph of groups:
/// head element at the start vertex, then (edge, element-at-target) steps.
/// Closed paths at the base vertex are the elements of the ambient group.
struct GWord {
  struct Step {
    int edge = 0;
    int elem = 0;
    bool operator==(const Step&) const = default;
  };
  int base = 0;
  int head = 0;
  std::vector<Step> steps;

  bool operator==(const GWord&) const = default;
  int length() const { return static_cast<int>(steps.size()); }
  bool trivial_syllables() const { return steps.empty() && head == 0; }
};

/// The session-wide base presentation: a finite connected graph of finite
/// groups with a chosen spanning tree and base vertex. All splittings,
/// subgroups and trees are marked over one of these, so there is a single
/// word problem per session.
class BasePresentation {
 public:
  explicit BasePresentation(GraphOfGroups g, int base_vertex = 0);

  const GraphOfGroups& graph() const { return graph_; }
  int base_vertex() const { return base_; }
  const std::vector<int>& spanning_tree() const { return tree_; }
  bool is_free() const { return free_; } // all vertex groups trivial

  int end_vertex(const GWord& w) const;
  ValidationReport well_formed(const GWord& w) const;

  GWord identity(int at_vertex = -1) const; // empty word at the base vertex
  GWord mul(const GWord& a, const GWord& b) const;
  GWord inv(const GWord& a) const;
  GWord conj(const GWord& g, const GWord& x) const; // g * x * g^-1

  /// Britton reduction: removes pinches until none remain. Group elements
  /// are equal iff their difference reduces to the trivial closed word.
  GWord normal_form(GWord w) const;
  /// Unique coset-transversal normal form (a fixpoint of normal_form).
  GWord canonical_form(GWord w) const;
  bool is_identity(const GWord& w) const;
  bool eq(const GWord& a, const GWord& b) const;

  /// Deterministic total order on canonical forms: syllable weight first,
  /// then component-wise ids. Used for canonical coset representatives.
  static bool shortlex_less(const GWord& a, const GWord& b);

  // String form: dot-separated syllables, `name` / `name^-1` for edge
  // letters, `vertex:elem` for group elements, "1" for the empty word.
  std::string to_string(const GWord& w) const;
  GWord parse(const std::string& s, int at_vertex = -1) const;

  GWord from_raw(const RawWord& r, int at_vertex = -1) const;

  // Free-base view: words as strings of oriented-edge letters.
  std::vector<int> letters(const GWord& w) const;
  GWord from_letters(const std::vector<int>& ls, int at_vertex = -1) const;

  /// Generating set of the fundamental group: conjugated vertex-group
  /// elements and one stable-letter loop per non-tree pair.
  const std::vector<GWord>& group_generators() const { return gens_; }
  const std::vector<std::string>& generator_labels() const { return gen_labels_; }

  /// Telescoped factorization of a closed word over group_generators():
  /// +-(k+1) refers to generator k.
  std::vector<int> factor_over_generators(const GWord& closed) const;

  /// Tree path from the base vertex to v as a trivial-element word.
  GWord tree_path(int v) const;

 private:
  GraphOfGroups graph_;
  int base_ = 0;
  std::vector<int> tree_;
  bool free_ = false;
  std::vector<std::vector<int>> tree_path_edges_; // per vertex
  // For each oriented edge e and element g of its source group: the chosen
  // transversal decomposition g = rep * attach_e(c).
  struct Decomp {
    int rep;
    int c;
  };
  std::vector<std::vector<Decomp>> transversal_;
  std::vector<GWord> gens_;
  std::vector<std::string> gen_labels_;
  std::vector<std::vector<int>> vertex_gen_index_; // (vertex, elem) -> generator
  std::vector<int> pair_gen_index_;                // pair -> generator or -1

  void build_transversals();
  void build_generators();
};

} // namespace gog

#endif
