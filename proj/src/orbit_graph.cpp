#include "gog/orbit_graph.hpp"

#include <queue>
#include <set>

namespace gog {

std::optional<GWord> transporter_in(const SubgroupSpec& h, const SubgroupSpec& v,
                                    const GWord& x, const GWord& x0) {
  const BasePresentation& b = h.base();
  // Want an element of H cap x * V * x0^-1. Taking inverses, search
  // u in H cap (x0 x^-1) * (x V x^-1) and return u^-1.
  GWord z = b.normal_form(b.mul(x0, b.inv(x)));
  auto u = h.element_in_coset(v.conjugate(x), z);
  if (!u) return std::nullopt;
  return b.normal_form(b.inv(*u));
}

ComponentAnalysis analyze_components(const BasePresentation& base,
                                     const OrbitGraphData& data) {
  ComponentAnalysis an;
  int n = static_cast<int>(data.nodes.size());
  int m = static_cast<int>(data.arcs.size());
  an.node_comp.assign(n, -1);
  an.arc_comp.assign(m, -1);
  an.node_connect.assign(n, base.identity());

  std::vector<std::vector<int>> arcs_at(n);
  for (int a = 0; a < m; ++a) {
    arcs_at[data.arcs[a].end[0]].push_back(a);
    arcs_at[data.arcs[a].end[1]].push_back(a);
  }
  for (int start = 0; start < n; ++start) {
    if (an.node_comp[start] >= 0) continue;
    int comp = an.num_components++;
    an.comp_root.push_back(start);
    std::vector<GWord> gen_words;
    an.node_comp[start] = comp;
    an.node_connect[start] = base.identity();
    std::queue<int> q;
    q.push(start);
    std::vector<int> comp_nodes{start};
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int aid : arcs_at[v]) {
        const OGArc& arc = data.arcs[aid];
        if (an.arc_comp[aid] < 0) an.arc_comp[aid] = comp;
        for (int slot = 0; slot < 2; ++slot) {
          if (arc.end[slot] != v) continue;
          int other_slot = 1 - slot;
          int w = arc.end[other_slot];
          // From instance c_v * node_v: the arc instance with transporter
          // c_v * glue[slot]^-1 has far face c_v * glue[slot]^-1 * glue[other].
          GWord step = base.normal_form(
              base.mul(base.mul(an.node_connect[v], base.inv(arc.glue[slot])),
                       arc.glue[other_slot]));
          if (an.node_comp[w] < 0) {
            an.node_comp[w] = comp;
            an.node_connect[w] = step;
            comp_nodes.push_back(w);
            q.push(w);
          } else {
            // Holonomy carries the canonical instance of w to the reached one.
            GWord hol = base.normal_form(base.mul(step, base.inv(an.node_connect[w])));
            if (!base.is_identity(hol)) gen_words.push_back(hol);
          }
        }
      }
    }
    std::vector<GWord> gens = gen_words;
    for (int v : comp_nodes) {
      for (const GWord& g : data.nodes[v].stab.generators()) {
        gens.push_back(base.normal_form(base.conj(an.node_connect[v], g)));
      }
    }
    an.group.push_back(SubgroupSpec(&base, std::move(gens)));
  }
  return an;
}

Cert covers_connected(const BasePresentation& base, const OrbitGraphData& data,
                      const SubgroupSpec& ambient) {
  if (data.nodes.empty()) return Cert::No;
  ComponentAnalysis an = analyze_components(base, data);
  if (an.num_components != 1) return Cert::No;
  return an.group[0].contains_subgroup(ambient);
}

std::optional<long> cover_degree(const BasePresentation& base,
                                 const OrbitGraphData& data, int node) {
  long total = 0;
  for (const OGArc& arc : data.arcs) {
    for (int slot = 0; slot < 2; ++slot) {
      if (arc.end[slot] != node) continue;
      SubgroupSpec transported = arc.stab.conjugate(base.inv(arc.glue[slot]));
      auto idx = transported.index_in(data.nodes[node].stab);
      if (!idx) return std::nullopt;
      total += *idx;
    }
  }
  return total;
}

std::optional<GWord> component_transporter(const BasePresentation& base,
                                           const ComponentAnalysis& an,
                                           const OrbitGraphData& data, int node,
                                           const GWord& x) {
  (void)base;
  int comp = an.node_comp[node];
  const SubgroupSpec& h = an.group[comp];
  const GWord& x0 = an.node_connect[node];
  return transporter_in(h, data.nodes[node].stab, x, x0);
}

} // namespace gog
