#ifndef GOG_CORE_COMPLEX_HPP
#define GOG_CORE_COMPLEX_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gog/splitting.hpp"

namespace gog {

// Cell kinds of an equivariant subcomplex of T1 x T2. EdgeH cells project
// onto factor-1 edges (they are 1-transverse), EdgeV onto factor-2 edges.
// EdgeDiag only appears in the degenerate diagonal complex built when both
// factor splittings are the same: the core of (T, T) is the diagonal, whose
// edges project onto edges in both factors at once.
enum class CellKind { Vertex, EdgeH, EdgeV, Square, EdgeDiag };

const char* to_string(CellKind k);

struct CellData {
  CellKind kind;
  int a = -1;  // factor-1 orbit: vertex id or edge-pair id
  int b = -1;  // factor-2 orbit
  GWord delta; // canonical connector: cell = (1 * Left, delta * Right)
  SubgroupSpec stab;
  std::vector<int> face;        // face cell ids; slot layout per kind
  std::vector<GWord> face_glue; // face_of_rep = glue * face_rep
};

// Finite quotient of an equivariant square complex in T1 x T2: orbit
// representatives with stabilizers and attaching data.
class EquivSquareComplex {
 public:
  EquivSquareComplex() = default;
  EquivSquareComplex(const MarkedSplitting* t1, const MarkedSplitting* t2);

  const MarkedSplitting& factor(int i) const { return i == 1 ? *t1_ : *t2_; }
  const BasePresentation& base() const { return t1_->base(); }

  int num_cells() const { return static_cast<int>(cells_.size()); }
  const CellData& cell(int id) const { return cells_[id]; }
  std::vector<int> cells_of(CellKind k) const;
  int count(CellKind k) const;

  /// Canonicalizes and inserts the cell (and, recursively, its faces).
  int ensure_cell(CellKind kind, int a, int b, const GWord& connector);
  int find_cell(CellKind kind, int a, int b, const GWord& connector) const;

  /// Removes whole orbit cells by id. The caller is responsible for face
  /// closure of what remains; remaining faces are reindexed.
  void remove_cells(const std::vector<int>& ids);

  std::string cell_key(int id) const;
  std::string signature() const; // deterministic serialization of the data

  bool is_core = false;
  bool is_shaved = false;
  bool is_inf_minimal = false;
  bool diagonal = false;

  // Fibers. factor/over_edge/orbit select tau_v or tau_e of either factor;
  // nodes and arcs index complex cells.
  struct FiberGraph {
    int factor = 1;
    bool over_edge = false;
    int orbit = -1;
    SubgroupSpec group;
    OrbitGraphData data;
    std::vector<int> node_cells;
    std::vector<int> arc_cells;
  };
  FiberGraph fiber_quotient(int factor, bool over_edge, int orbit) const;
  /// Total number of cells in the covering fiber; nullopt = infinite.
  std::optional<long> fiber_size(const FiberGraph& f) const;

  /// Number of squares of the cover containing the representative of the
  /// 1-cell orbit (EdgeH or EdgeV); nullopt = infinite.
  std::optional<long> square_count_at(int cell_id) const;

  const std::pair<const SubgroupSpec*, const SubgroupSpec*> specs_of(
      CellKind kind, int a, int b) const;

 private:
  const MarkedSplitting* t1_ = nullptr;
  const MarkedSplitting* t2_ = nullptr;
  std::vector<CellData> cells_;
  std::map<std::string, int> index_;

  std::string make_key(CellKind kind, int a, int b, const GWord& delta) const;
  void compute_faces(int id);
};

// ---------------------------------------------------------------------------

struct CheckItem {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CertificateReport {
  bool ok = true;
  std::vector<CheckItem> items;
  void add(const std::string& name, bool pass, const std::string& detail = "");
};

/// Core construction: fold-saturation at the quotient level. Inputs must be
/// in the finite/infinite edge-group regime unless `allow_degenerate`; the
/// diagonal complex is produced when both splittings are equal.
EquivSquareComplex build_core(const MarkedSplitting& t1, const MarkedSplitting& t2,
                              const Budgets& budgets = {}, bool allow_degenerate = false,
                              std::vector<std::string>* trace = nullptr);

/// Verifies finiteness, face closure, fiber connectivity, stabilizer
/// monotonicity and the forest property of both leaf spaces.
CertificateReport check_core(const EquivSquareComplex& z,
                             const std::vector<SubgroupSpec>& family = {});

/// The 1-skeleton covers a connected graph under the full ambient action.
Cert complex_connected(const EquivSquareComplex& z);

/// All vertex and edge orbits of both factors are represented.
bool complex_surjective(const EquivSquareComplex& z);

/// Is z a valid connected-fiber invariant subcomplex (the membership test
/// used by the minimization pass)?
bool complex_valid(const EquivSquareComplex& z);

// Quotient leaf space: nodes are orbit classes of vertex-fiber components,
// arcs orbit classes of edge-fiber components, unit lengths.
struct LeafSpaceQ {
  int factor = 1;
  struct Node {
    int orbit;
    int comp;
    SubgroupSpec stab;
    std::vector<int> cells; // complex cells of the component (quotient)
  };
  struct Arc {
    int orbit;
    int comp;
    SubgroupSpec stab;
    int end[2];
    std::vector<int> cells;
  };
  std::vector<Node> nodes;
  std::vector<Arc> arcs;
};

LeafSpaceQ leaf_space(const EquivSquareComplex& z, int factor);

/// Bounded search for liftable cycles in a leaf space; forests find nothing.
bool leaf_space_has_cycle(const EquivSquareComplex& z, const LeafSpaceQ& l,
                          int max_len = 8);

/// Explicit structure-preserving map new -> old used to verify collapse
/// results: node/arc assignments that are cellwise inclusions.
struct LeafSpaceMap {
  std::vector<int> node_to;
  std::vector<int> arc_to;
  bool valid = false;
  bool bijective = false;
  std::string detail;
};

/// Matches leaves through shared surviving cells. For an unchanged factor
/// the map must be a bijection; for the cleaved factor it must be a fold
/// (surjective, preimage sizes 1 or 2 sharing an endpoint).
LeafSpaceMap match_leaf_spaces(const EquivSquareComplex& before,
                               const EquivSquareComplex& after, int factor);
bool verify_fold(const EquivSquareComplex& before, const EquivSquareComplex& after,
                 const LeafSpaceMap& m, int factor, std::string* why = nullptr);

struct SubcomplexHandle {
  std::vector<int> cells;
};

/// tau_e fiber handle plus the hypercarrier: union of squares meeting it.
SubcomplexHandle hypercarrier(const EquivSquareComplex& z, int factor, int edge_orbit);

/// All i-transverse free faces: 1-cell orbits contained in exactly one
/// square, with that square.
std::vector<std::pair<int, int>> transverse_free_faces(const EquivSquareComplex& z,
                                                       int factor);

std::string export_complex_json(const EquivSquareComplex& z);
std::string export_complex_dot(const EquivSquareComplex& z);

} // namespace gog

#endif
