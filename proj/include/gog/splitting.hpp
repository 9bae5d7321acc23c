#ifndef GOG_SPLITTING_HPP
#define GOG_SPLITTING_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gog/orbit_graph.hpp"
#include "gog/subgroup.hpp"

namespace gog {

/// Path over a marked splitting's shape: elems[0] d(edges[0]) elems[1] ...
/// with elems[i] an ambient word lying in the vertex group of the i-th shape
/// vertex along the path. The computational form of tree geodesics.
struct SPath {
  int start = 0;
  std::vector<GWord> elems;  // size == edges.size() + 1
  std::vector<int> edges;    // oriented shape edge ids
};

/// A cell of the Bass-Serre tree of a marked splitting, as a canonical coset:
/// vertices are rep * V_orbit, unoriented edges rep * E_side (side group of
/// the pair's canonical orientation).
struct TreeVertexCell {
  int orbit = -1;
  GWord rep;
  bool operator==(const TreeVertexCell&) const = default;
};

struct TreeEdgeCell {
  int pair = -1;
  GWord rep;
  bool operator==(const TreeEdgeCell&) const = default;
};

struct EllipticityResult {
  Cert cert = Cert::Unknown;
  TreeVertexCell fixed;   // when Yes
  GWord hyperbolic;       // when No: an element with positive translation length
  int translation = 0;
};

/// A splitting of (a subgroup of) the ambient group, marked over the base
/// presentation: shape graph, vertex/edge subgroups, stable-letter words and
/// the generator-by-generator marking certificate. All algorithms work on
/// this quotient data; the tree itself is only ever expanded in balls.
class MarkedSplitting {
 public:
  MarkedSplitting() = default;

  // -- construction ---------------------------------------------------------
  static MarkedSplitting build(const BasePresentation& base, SubgroupSpec ambient);
  int add_vertex(SubgroupSpec group, std::string name = "");
  /// Adds a reverse pair; `delta` carries src-side cosets to dst-side ones
  /// (identity for spanning-tree edges). Returns the canonical edge id.
  int add_edge_pair(int src, int dst, SubgroupSpec edge_group, GWord delta,
                    std::string name = "");
  /// Declares the shape base vertex and the marking: one SPath per ambient
  /// generator expressing it over the splitting. Must be called last.
  void finalize(int shape_base, std::vector<SPath> marking);

  // -- shape ----------------------------------------------------------------
  const BasePresentation& base() const { return *base_; }
  const SubgroupSpec& ambient() const { return ambient_; }
  int num_vertices() const { return static_cast<int>(vgroups_.size()); }
  int num_oriented_edges() const { return static_cast<int>(edges_.size()); }
  int num_pairs() const { return num_oriented_edges() / 2; }
  int src(int e) const { return edges_[e].src; }
  int dst(int e) const { return edges_[edges_[e].rev].src; }
  int rev(int e) const { return edges_[e].rev; }
  int pair_of(int e) const { return edges_[e].pair; }
  bool is_canonical(int e) const { return edges_[e].canonical; }
  int canonical_edge(int pair) const { return pair_canonical_[pair]; }
  const std::vector<int>& out_edges(int v) const { return out_[v]; }
  int shape_base() const { return shape_base_; }
  const std::string& vertex_name(int v) const { return vnames_[v]; }
  const std::string& edge_name(int e) const { return edges_[e].name; }

  const SubgroupSpec& vertex_group(int v) const { return vgroups_[v]; }
  const SubgroupSpec& edge_group(int pair) const { return egroups_[pair]; }
  const GWord& delta(int e) const { return delta_[e]; }
  /// Edge group embedded at the source of e: E for the canonical
  /// orientation, delta^-1 E delta for the reverse.
  const SubgroupSpec& side_group(int e) const;

  ValidationReport validate() const;
  const std::vector<SPath>& marking() const { return marking_; }

  bool all_edge_groups_finite() const;
  bool all_edge_groups_infinite() const;

  /// Structural equality of the quotient data (same shape, equal subgroups,
  /// equal stable letters); detects the diagonal case of core building.
  bool same_splitting(const MarkedSplitting& o) const;

  // -- cells and the action -------------------------------------------------
  TreeVertexCell vertex_cell(int orbit, const GWord& g) const;
  TreeEdgeCell edge_cell(int pair, const GWord& g) const;
  TreeVertexCell act(const GWord& g, const TreeVertexCell& c) const;
  TreeEdgeCell act(const GWord& g, const TreeEdgeCell& c) const;
  SubgroupSpec stabilizer(const TreeVertexCell& c) const;
  SubgroupSpec stabilizer(const TreeEdgeCell& c) const;
  /// Endpoints of the edge g * E_pair: src-side then dst-side of the
  /// canonical orientation.
  std::pair<TreeVertexCell, TreeVertexCell> endpoints(const TreeEdgeCell& c) const;
  bool cells_equal(const TreeVertexCell& a, const TreeVertexCell& b) const;

  // -- words over the splitting --------------------------------------------
  SPath to_spath(const GWord& closed) const;  // marking substitution
  SPath reduce_spath(SPath p) const;          // pinch removal over the splitting
  GWord spath_value(const SPath& p) const;
  SPath invert_spath(const SPath& p) const;
  SPath concat_spath(const SPath& a, const SPath& b) const;
  int spath_end(const SPath& p) const;
  /// Tree path (trivial elements) through the shape's spanning tree.
  SPath shape_tree_path(int v) const;

  // -- geometry -------------------------------------------------------------
  int distance(const TreeVertexCell& a, const TreeVertexCell& b) const;
  /// Geodesic as the list of crossed edge cells plus the visited vertices.
  struct Geodesic {
    std::vector<TreeVertexCell> vertices;
    std::vector<TreeEdgeCell> edges;
    std::vector<int> orientations; // oriented shape edge per step
  };
  Geodesic geodesic(const TreeVertexCell& a, const TreeVertexCell& b) const;

  EllipticityResult elliptic_element(const GWord& g, long budget = 100000) const;
  EllipticityResult is_elliptic(const SubgroupSpec& h, long budget = 100000) const;

  /// Half-tree beyond the oriented edge instance (toward dst) is infinite?
  bool half_tree_infinite(int oriented_edge) const;
  bool is_essential_pair(int pair) const;

  // -- ball expansion ---------------------------------------------------------
  struct Ball {
    std::vector<TreeVertexCell> vertices;
    std::vector<TreeEdgeCell> edges;
    std::vector<std::pair<int, int>> incidence; // (edge index, vertex index) pairs
    std::vector<int> depth;                     // per vertex
  };
  Ball expand_ball(const TreeVertexCell& center, int radius) const;

 private:
  struct SEdge {
    int id, rev, src, pair;
    bool canonical;
    std::string name;
  };
  const BasePresentation* base_ = nullptr;
  SubgroupSpec ambient_;
  std::vector<std::string> vnames_;
  std::vector<SubgroupSpec> vgroups_;
  std::vector<SEdge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<int> pair_canonical_;
  std::vector<SubgroupSpec> egroups_;
  std::vector<GWord> delta_;
  std::vector<int> tree_;
  int shape_base_ = 0;
  std::vector<SPath> marking_;
  mutable std::vector<std::optional<SubgroupSpec>> side_cache_;
  mutable std::map<std::string, SPath> spath_cache_;

  void check_finalized() const;
  bool finalized_ = false;
};

// ---------------------------------------------------------------------------
// Quotient subtrees: finite quotient of an H-invariant subtree of the
// Bass-Serre tree, with spur data. Used for minimal subtrees and surgeries.
struct QuotientTree {
  const MarkedSplitting* split = nullptr;
  SubgroupSpec group; // the acting subgroup H
  struct Node {
    TreeVertexCell cell;
    SubgroupSpec stab;
  };
  struct Arc {
    TreeEdgeCell cell;
    SubgroupSpec stab;
    int end[2];    // node indices: src-side, dst-side of canonical orientation
    GWord glue[2]; // face = glue * node rep (as cosets)
  };
  std::vector<Node> nodes;
  std::vector<Arc> arcs;

  OrbitGraphData orbit_data() const;
  std::optional<int> find_spur(const BasePresentation& b) const; // node index
  bool spur_free(const BasePresentation& b) const;
  std::string signature(const BasePresentation& b) const; // deterministic
};

struct ShaveMove {
  int node_removed;     // index in the tree before the move
  int arc_removed;
  std::string node_key; // display keys for the trace
  std::string arc_key;
};

/// Equivariant spur shaving: removes one hair orbit at a time until minimal.
QuotientTree shave_quotient_tree(QuotientTree t, std::vector<ShaveMove>* trace);

/// Minimal H-invariant subtree, or a fixed vertex when H is elliptic.
struct MinimalSubtreeResult {
  bool elliptic = false;
  TreeVertexCell fixed;
  QuotientTree tree;
};
MinimalSubtreeResult minimal_subtree(const MarkedSplitting& s, const SubgroupSpec& h,
                                     const Budgets& budgets = {});

/// Quotient tree of the full splitting (H = ambient): node per shape vertex,
/// arc per shape pair.
QuotientTree full_quotient_tree(const MarkedSplitting& s);

std::string export_ball_dot(const MarkedSplitting& s, const MarkedSplitting::Ball& ball);
std::string export_ball_json(const MarkedSplitting& s, const MarkedSplitting::Ball& ball);

} // namespace gog

#endif
