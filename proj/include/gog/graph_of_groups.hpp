#ifndef GOG_GRAPH_OF_GROUPS_HPP
#define GOG_GRAPH_OF_GROUPS_HPP

#include <optional>
#include <string>
#include <vector>

#include "gog/finite_group.hpp"

namespace gog {

// A syllable of a word over a graph-of-groups presentation, in raw (id-based)
// form so that lower layers can carry words without depending on the word
// kernel. kind 0 = vertex-group element, kind 1 = oriented-edge letter.
struct RawSyllable {
  int kind = 0;
  int id = 0;   // vertex id (kind 0) or oriented edge id (kind 1)
  int elem = 0; // element index for kind 0
  bool operator==(const RawSyllable&) const = default;
};

struct RawWord {
  std::vector<RawSyllable> syllables;
  bool operator==(const RawWord&) const = default;
};

/// Vertex of the quotient graph. Either a finite group or (after a collapse
/// that produced an infinite fundamental group) a vertex marked by generator
/// words over the ambient presentation.
struct VertexDatum {
  FiniteGroup group;
  bool marked = false;               // true: group field is ignored
  std::vector<RawWord> marked_gens;  // generators over the ambient presentation
  std::string name;
};

/// Oriented edge in the Serre convention: edges come in reverse pairs, each
/// oriented edge carries an injection of the pair's group into its source
/// vertex group. Acting without inversions is structural this way.
struct EdgeDatum {
  int id = 0;
  int rev = 0;
  int src = 0;
  int pair = 0;          // index of the unoriented pair; both orientations share it
  Morphism attach;       // pair group -> source vertex group
  std::string name;      // pair name, letter for the canonical orientation
  bool canonical = false; // exactly one orientation per pair is canonical
};

class GraphOfGroups {
 public:
  GraphOfGroups() = default;

  int add_vertex(FiniteGroup g, std::string name = "");
  int add_marked_vertex(std::vector<RawWord> gens, std::string name = "");
  // Adds a reverse pair; returns the id of the canonical orientation.
  // `attach_src` embeds the pair group into vertices[src], `attach_dst`
  // into vertices[dst]. For a loop both endpoints coincide.
  int add_edge_pair(int src, int dst, FiniteGroup edge_group,
                    Morphism attach_src, Morphism attach_dst,
                    std::string name = "");

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_oriented_edges() const { return static_cast<int>(edges_.size()); }
  int num_edge_pairs() const { return num_oriented_edges() / 2; }

  const VertexDatum& vertex(int v) const { return vertices_[v]; }
  const EdgeDatum& edge(int e) const { return edges_[e]; }
  const FiniteGroup& edge_group(int e) const { return edges_[e].attach.source(); }
  int src(int e) const { return edges_[e].src; }
  int dst(int e) const { return edges_[edges_[e].rev].src; }
  int rev(int e) const { return edges_[e].rev; }
  const std::vector<int>& out_edges(int v) const { return out_[v]; }
  int canonical_edge_of_pair(int pair) const { return pair_canonical_[pair]; }

  bool connected() const;
  // Oriented edge ids of a spanning tree (one orientation per tree pair).
  std::vector<int> spanning_tree() const;
  bool has_marked_vertex() const;

 private:
  std::vector<VertexDatum> vertices_;
  std::vector<EdgeDatum> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<int> pair_canonical_;
};

ValidationReport validate(const GraphOfGroups& g);

/// Classical Bass-Serre presentation read off a spanning tree: vertex-group
/// elements plus one stable letter per non-tree pair.
struct Presentation {
  std::vector<std::string> generators;
  std::vector<std::string> relators; // words as dot-separated generator strings
};
Presentation fundamental_presentation(const GraphOfGroups& g,
                                      const std::vector<int>& tree);

enum class Ends { Zero, Two, Infinite };

/// Collapses non-loop edges with a bijective attach on one side until none
/// remain. Fundamental group is preserved; the result is unique.
GraphOfGroups reduce(const GraphOfGroups& g);

/// Stallings trichotomy for a finite graph of finite groups, computed
/// symbolically from the reduced shape. Requires all vertex groups finite.
Ends ends(const GraphOfGroups& g);

/// True iff removing the edge's orbit from the Bass-Serre tree leaves an
/// infinite component on each side.
bool is_essential_edge(const GraphOfGroups& g, int oriented_edge);

/// Half-tree infiniteness: is the component beyond `oriented_edge` (on the
/// target side) infinite? Symbolic fixpoint over the quotient data.
bool half_tree_infinite(const GraphOfGroups& g, int oriented_edge);

/// Equivariantly crushes the listed edge pairs to points. Collapsed
/// subgraphs with finite fundamental group become plain finite vertices;
/// infinite ones become marked vertices with generator words over g.
GraphOfGroups collapse_edges(const GraphOfGroups& g, const std::vector<int>& pair_ids);

std::string export_dot(const GraphOfGroups& g);

} // namespace gog

#endif
