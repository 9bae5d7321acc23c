#ifndef GOG_SURGERY_HPP
#define GOG_SURGERY_HPP

#include <optional>
#include <string>
#include <vector>

#include "gog/core_complex.hpp"

namespace gog {

struct SurgeryMove {
  std::string kind; // hair-collapse | free-face-collapse | detach | collapse-to-edge
  std::string cell;
  std::string aux;
};

struct SurgeryTrace {
  std::vector<SurgeryMove> moves;
  std::string result_signature;
};

/// Equivariant spur shaving of a quotient tree (hair orbits contracted one
/// at a time); the trace replays bit-exactly.
std::pair<QuotientTree, SurgeryTrace> shave_tree(const QuotientTree& t);

/// Collapses the square orbit onto the side opposite the given transverse
/// free face. Verifies that the transverse-side leaf space is unchanged and
/// that the opposite leaf space folds back onto the old one.
EquivSquareComplex collapse_free_face(const EquivSquareComplex& z,
                                      std::pair<int, int> square_and_face,
                                      SurgeryTrace* trace = nullptr);

/// Repeatedly collapses factor-1-transverse free faces until every factor-1
/// edge fiber is a minimal tree.
EquivSquareComplex shaved_core(EquivSquareComplex z, SurgeryTrace* trace = nullptr);

/// Collapses factor-1 vertex-fiber spurs lying outside every hypercarrier;
/// the attached hypercarriers are untouched.
EquivSquareComplex inf_minimal_core(EquivSquareComplex z, SurgeryTrace* trace = nullptr);

/// Replays a trace against the input complex; the result must match the
/// recorded signature bit-exactly.
EquivSquareComplex replay_trace(const EquivSquareComplex& input, const SurgeryTrace& t,
                                bool* signature_matches);

// ---------------------------------------------------------------------------

/// Non-e-collapse C(T, e): the tree whose edges are the orbit of the chosen
/// arc and whose vertices are the closures of complement components. Output
/// is a one-edge-orbit marked splitting of the acting subgroup, marked by
/// crossing walks along geodesics of the ambient tree.
MarkedSplitting non_e_collapse(const QuotientTree& t, int arc_index);

/// tau_v or tau_e fibers of a complex as quotient trees over the opposite
/// factor's splitting (the induced-splitting view of a fiber).
QuotientTree fiber_as_tree(const EquivSquareComplex& z, int factor, bool over_edge,
                           int orbit, const GWord& chart);

// ---------------------------------------------------------------------------

struct EllipticityWitness {
  std::string subgroup_display;
  std::vector<GWord> generators;
  int fixed_vertex = -1; // vertex orbit of the blowup splitting
  GWord fixed_transporter;
};

struct ConjugacyWitness {
  int blowup_edge_pair = -1; // edge pair of the blowup
  int delta_vertex = -1;     // vertex of the G_e splitting it is conjugate to
  GWord conjugator;
};

struct BlowupReport {
  // Chosen data.
  int vertex_orbit = -1;        // orbit of v in factor 1
  std::string free_face_key;    // the chosen f-transverse free face
  int case_tag = 0;             // 1 = finite-edge-groups, 2 = cleave-case
  MarkedSplitting blowup;       // the G_v-tree as a splitting of stab(v)
  SubgroupSpec vertex_group;    // G_v
  // Case 2 payload.
  int edge_pair = -1;                    // t_inf pair of the chosen edge e
  GWord edge_chart;                      // carries the canonical edge rep to e
  SubgroupSpec edge_group;               // G_e
  std::optional<MarkedSplitting> edge_splitting; // Delta: one-edge splitting of G_e (a)
  int ve_vertex = -1;                    // vertex of blowup with stab G_e (b)
  std::vector<ConjugacyWitness> edge_witnesses;  // (c)
  std::optional<MarkedSplitting> complement_splitting; // C(tau_v, eps) for (d)
  // Ellipticity witnesses.
  std::vector<EllipticityWitness> incident_witnesses; // (i)
  std::vector<EllipticityWitness> family_witnesses;   // (ii)
  // Component bookkeeping: quotient classes of {C_i} and {K_i}.
  std::vector<std::string> c_classes;
  std::vector<std::string> k_classes;
  std::string opposite_face_key; // the bar-epsilon instance
  SurgeryTrace trace;
};

/// The main construction: build the core of (t_inf, t_f), shave it, make it
/// factor-1 minimal, locate an f-transverse free face with finite stabilizer
/// and emit the blowup of its vertex with all witnesses.
BlowupReport blowup_vertex(const MarkedSplitting& t_inf, const MarkedSplitting& t_f,
                           const std::vector<SubgroupSpec>& family,
                           const Budgets& budgets = {});

/// Re-verifies a report's claims from raw witnesses using only word-level
/// computations.
CertificateReport check_report(const BlowupReport& r);

} // namespace gog

#endif
