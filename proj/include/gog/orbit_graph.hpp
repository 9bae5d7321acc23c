#ifndef GOG_ORBIT_GRAPH_HPP
#define GOG_ORBIT_GRAPH_HPP

#include <optional>
#include <vector>

#include "gog/subgroup.hpp"

namespace gog {

// Finite quotient data of a group acting on a graph: one record per orbit of
// nodes and arcs, with stabilizers of chosen representatives and glue words
// mapping each arc representative's faces to translates of node
// representatives: face_i(arc_rep) = glue_i * node_rep(end_i).
struct OGNode {
  SubgroupSpec stab;
};

struct OGArc {
  SubgroupSpec stab;
  int end[2] = {-1, -1};
  GWord glue[2];
};

struct OrbitGraphData {
  std::vector<OGNode> nodes;
  std::vector<OGArc> arcs;
};

// Components of the covered (possibly infinite) graph, described at the
// quotient level: quotient components plus, per component, the setwise
// stabilizer of the component containing the canonical base instance.
struct ComponentAnalysis {
  int num_components = 0;
  std::vector<int> node_comp;
  std::vector<int> arc_comp;
  std::vector<SubgroupSpec> group;   // component subgroup per quotient component
  std::vector<GWord> node_connect;   // c_n: c_n * node_rep lies in the base instance's component
  std::vector<int> comp_root;        // a node index per component
};

ComponentAnalysis analyze_components(const BasePresentation& base,
                                     const OrbitGraphData& data);

/// Is the total space connected as an `ambient`-graph? Requires the quotient
/// to be connected and the component subgroup to be all of `ambient`.
Cert covers_connected(const BasePresentation& base, const OrbitGraphData& data,
                      const SubgroupSpec& ambient);

/// Number of arc-instances at the node representative; nullopt = infinite.
std::optional<long> cover_degree(const BasePresentation& base,
                                 const OrbitGraphData& data, int node);

/// h in H with h * (c_n * node_rep coset) = x * node_rep coset, i.e. the
/// element carrying the component-analysis base instance of `node` to the
/// instance with transporter x. nullopt when x's instance lies in another
/// component of the cover.
std::optional<GWord> component_transporter(const BasePresentation& base,
                                           const ComponentAnalysis& an,
                                           const OrbitGraphData& data, int node,
                                           const GWord& x);

/// h in H carrying x0*V to x*V (left cosets); nullopt if different H-orbits.
std::optional<GWord> transporter_in(const SubgroupSpec& h, const SubgroupSpec& v,
                                    const GWord& x, const GWord& x0);

} // namespace gog

#endif
