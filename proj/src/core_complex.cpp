#include "gog/core_complex.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

namespace gog {

const char* to_string(CellKind k) {
  switch (k) {
    case CellKind::Vertex: return "vertex";
    case CellKind::EdgeH: return "edge1";
    case CellKind::EdgeV: return "edge2";
    case CellKind::Square: return "square";
    case CellKind::EdgeDiag: return "edge-diag";
  }
  return "?";
}

EquivSquareComplex::EquivSquareComplex(const MarkedSplitting* t1, const MarkedSplitting* t2)
    : t1_(t1), t2_(t2) {}

std::vector<int> EquivSquareComplex::cells_of(CellKind k) const {
  std::vector<int> out;
  for (int i = 0; i < num_cells(); ++i) {
    if (cells_[i].kind == k) out.push_back(i);
  }
  return out;
}

int EquivSquareComplex::count(CellKind k) const {
  return static_cast<int>(cells_of(k).size());
}

const std::pair<const SubgroupSpec*, const SubgroupSpec*> EquivSquareComplex::specs_of(
    CellKind kind, int a, int b) const {
  switch (kind) {
    case CellKind::Vertex:
      return {&t1_->vertex_group(a), &t2_->vertex_group(b)};
    case CellKind::EdgeH:
      return {&t1_->side_group(t1_->canonical_edge(a)), &t2_->vertex_group(b)};
    case CellKind::EdgeV:
      return {&t1_->vertex_group(a), &t2_->side_group(t2_->canonical_edge(b))};
    case CellKind::Square:
      return {&t1_->side_group(t1_->canonical_edge(a)),
              &t2_->side_group(t2_->canonical_edge(b))};
    case CellKind::EdgeDiag:
      return {&t1_->side_group(t1_->canonical_edge(a)),
              &t2_->side_group(t2_->canonical_edge(b))};
  }
  throw invalid_input("specs_of: bad kind");
}

std::string EquivSquareComplex::make_key(CellKind kind, int a, int b,
                                         const GWord& delta) const {
  std::ostringstream os;
  os << to_string(kind) << "/" << a << "/" << b << "/" << base().to_string(delta);
  return os.str();
}

std::string EquivSquareComplex::cell_key(int id) const {
  const CellData& c = cells_[id];
  return make_key(c.kind, c.a, c.b, c.delta);
}

int EquivSquareComplex::find_cell(CellKind kind, int a, int b,
                                  const GWord& connector) const {
  auto [left, right] = specs_of(kind, a, b);
  GWord delta = left->double_coset_rep(connector, *right);
  auto it = index_.find(make_key(kind, a, b, delta));
  return it == index_.end() ? -1 : it->second;
}

int EquivSquareComplex::ensure_cell(CellKind kind, int a, int b, const GWord& connector) {
  auto [left, right] = specs_of(kind, a, b);
  GWord delta = left->double_coset_rep(connector, *right);
  std::string key = make_key(kind, a, b, delta);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  CellData c;
  c.kind = kind;
  c.a = a;
  c.b = b;
  c.delta = delta;
  c.stab = left->intersect(right->conjugate(delta));
  int id = num_cells();
  cells_.push_back(std::move(c));
  index_[key] = id;
  compute_faces(id);
  return id;
}

void EquivSquareComplex::compute_faces(int id) {
  const BasePresentation& b = base();
  CellKind kind = cells_[id].kind;
  int a = cells_[id].a;
  int bb = cells_[id].b;
  GWord delta = cells_[id].delta;

  // The actual face pair is (gamma * Lface, conn * Rface); normalize the
  // connector by gamma and glue by gamma times a transporter.
  auto attach = [&](CellKind fk, int fa, int fb, const GWord& conn, const GWord& gamma) {
    auto [lf, rf] = specs_of(fk, fa, fb);
    GWord norm_conn = b.normal_form(b.mul(b.inv(gamma), conn));
    int fid = ensure_cell(fk, fa, fb, norm_conn);
    const GWord& canon = cells_[fid].delta;
    auto v = transporter_in(*lf, *rf, norm_conn, canon);
    if (!v) throw invalid_input("compute_faces: transporter missing");
    GWord glue = b.normal_form(b.mul(gamma, *v));
    cells_[id].face.push_back(fid);
    cells_[id].face_glue.push_back(glue);
  };

  GWord one = b.identity();
  switch (kind) {
    case CellKind::Vertex:
      break;
    case CellKind::EdgeH: {
      int e1 = t1_->canonical_edge(a);
      attach(CellKind::Vertex, t1_->src(e1), bb, delta, one);
      attach(CellKind::Vertex, t1_->dst(e1), bb, delta, t1_->delta(e1));
      break;
    }
    case CellKind::EdgeV: {
      int e2 = t2_->canonical_edge(bb);
      attach(CellKind::Vertex, a, t2_->src(e2), delta, one);
      attach(CellKind::Vertex, a, t2_->dst(e2),
             b.normal_form(b.mul(delta, t2_->delta(e2))), one);
      break;
    }
    case CellKind::Square: {
      int e1 = t1_->canonical_edge(a);
      int e2 = t2_->canonical_edge(bb);
      attach(CellKind::EdgeH, a, t2_->src(e2), delta, one);
      attach(CellKind::EdgeH, a, t2_->dst(e2),
             b.normal_form(b.mul(delta, t2_->delta(e2))), one);
      attach(CellKind::EdgeV, t1_->src(e1), bb, delta, one);
      attach(CellKind::EdgeV, t1_->dst(e1), bb, delta, t1_->delta(e1));
      break;
    }
    case CellKind::EdgeDiag: {
      int e1 = t1_->canonical_edge(a);
      int e2 = t2_->canonical_edge(bb);
      attach(CellKind::Vertex, t1_->src(e1), t2_->src(e2), delta, one);
      attach(CellKind::Vertex, t1_->dst(e1), t2_->dst(e2),
             b.normal_form(b.mul(b.inv(t1_->delta(e1)), b.mul(delta, t2_->delta(e2)))),
             t1_->delta(e1));
      break;
    }
  }
}

void EquivSquareComplex::remove_cells(const std::vector<int>& ids) {
  std::set<int> dead(ids.begin(), ids.end());
  std::vector<CellData> next;
  std::vector<int> remap(cells_.size(), -1);
  for (int i = 0; i < num_cells(); ++i) {
    if (dead.count(i)) continue;
    remap[i] = static_cast<int>(next.size());
    next.push_back(cells_[i]);
  }
  for (CellData& c : next) {
    for (int& f : c.face) {
      if (remap[f] < 0) {
        throw invalid_input("remove_cells: face closure violated by removal");
      }
      f = remap[f];
    }
  }
  cells_ = std::move(next);
  index_.clear();
  for (int i = 0; i < num_cells(); ++i) index_[cell_key(i)] = i;
}

std::string EquivSquareComplex::signature() const {
  std::vector<std::string> lines;
  for (int i = 0; i < num_cells(); ++i) {
    const CellData& c = cells_[i];
    std::ostringstream os;
    os << cell_key(i) << " stab=" << c.stab.display() << " faces=";
    std::vector<std::string> fs;
    for (size_t k = 0; k < c.face.size(); ++k) {
      fs.push_back(cell_key(c.face[k]) + "@" + base().to_string(c.face_glue[k]));
    }
    std::sort(fs.begin(), fs.end());
    for (const auto& f : fs) os << f << "|";
    lines.push_back(os.str());
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fibers

EquivSquareComplex::FiberGraph EquivSquareComplex::fiber_quotient(int factor,
                                                                  bool over_edge,
                                                                  int orbit) const {
  if (diagonal) throw invalid_input("fiber_quotient: diagonal complex has point fibers");
  const BasePresentation& b = base();
  FiberGraph f;
  f.factor = factor;
  f.over_edge = over_edge;
  f.orbit = orbit;
  if (factor == 1) {
    f.group = over_edge ? t1_->side_group(t1_->canonical_edge(orbit))
                        : t1_->vertex_group(orbit);
  } else {
    f.group = over_edge ? t2_->side_group(t2_->canonical_edge(orbit))
                        : t2_->vertex_group(orbit);
  }
  CellKind node_kind, arc_kind;
  if (factor == 1) {
    node_kind = over_edge ? CellKind::EdgeH : CellKind::Vertex;
    arc_kind = over_edge ? CellKind::Square : CellKind::EdgeV;
  } else {
    node_kind = over_edge ? CellKind::EdgeV : CellKind::Vertex;
    arc_kind = over_edge ? CellKind::Square : CellKind::EdgeH;
  }
  std::map<int, int> node_of_cell;
  for (int i = 0; i < num_cells(); ++i) {
    const CellData& c = cells_[i];
    if (c.kind != node_kind) continue;
    if ((factor == 1 ? c.a : c.b) != orbit) continue;
    OGNode n;
    n.stab = factor == 1 ? c.stab : c.stab.conjugate(b.inv(c.delta));
    node_of_cell[i] = static_cast<int>(f.data.nodes.size());
    f.data.nodes.push_back(std::move(n));
    f.node_cells.push_back(i);
  }
  for (int i = 0; i < num_cells(); ++i) {
    const CellData& c = cells_[i];
    if (c.kind != arc_kind) continue;
    if ((factor == 1 ? c.a : c.b) != orbit) continue;
    OGArc arc;
    arc.stab = factor == 1 ? c.stab : c.stab.conjugate(b.inv(c.delta));
    int s0 = 0, s1 = 1;
    if (c.kind == CellKind::Square && factor == 2) {
      s0 = 2;
      s1 = 3;
    }
    auto fiber_glue = [&](int slot) {
      if (factor == 1) return c.face_glue[slot];
      const CellData& fc = cells_[c.face[slot]];
      return b.normal_form(b.mul(b.mul(b.inv(c.delta), c.face_glue[slot]), fc.delta));
    };
    arc.end[0] = node_of_cell.at(c.face[s0]);
    arc.end[1] = node_of_cell.at(c.face[s1]);
    arc.glue[0] = fiber_glue(s0);
    arc.glue[1] = fiber_glue(s1);
    f.data.arcs.push_back(std::move(arc));
    f.arc_cells.push_back(i);
  }
  return f;
}

std::optional<long> EquivSquareComplex::fiber_size(const FiberGraph& f) const {
  long total = 0;
  for (const OGNode& n : f.data.nodes) {
    auto idx = n.stab.index_in(f.group);
    if (!idx) return std::nullopt;
    total += *idx;
  }
  for (const OGArc& a : f.data.arcs) {
    auto idx = a.stab.index_in(f.group);
    if (!idx) return std::nullopt;
    total += *idx;
  }
  return total;
}

std::optional<long> EquivSquareComplex::square_count_at(int cell_id) const {
  const CellData& c = cells_[cell_id];
  int factor;
  int orbit;
  if (c.kind == CellKind::EdgeH) {
    factor = 1;
    orbit = c.a;
  } else if (c.kind == CellKind::EdgeV) {
    factor = 2;
    orbit = c.b;
  } else {
    throw invalid_input("square_count_at: not a 1-cell");
  }
  FiberGraph f = fiber_quotient(factor, true, orbit);
  for (size_t i = 0; i < f.node_cells.size(); ++i) {
    if (f.node_cells[i] == cell_id) {
      return cover_degree(base(), f.data, static_cast<int>(i));
    }
  }
  throw invalid_input("square_count_at: cell not in its fiber");
}

// ---------------------------------------------------------------------------
// Leaf spaces

LeafSpaceQ leaf_space(const EquivSquareComplex& z, int factor) {
  LeafSpaceQ l;
  l.factor = factor;
  const MarkedSplitting& t = z.factor(factor);

  if (z.diagonal) {
    std::map<int, int> node_at_orbit;
    for (int c : z.cells_of(CellKind::Vertex)) {
      LeafSpaceQ::Node n;
      n.orbit = factor == 1 ? z.cell(c).a : z.cell(c).b;
      n.comp = 0;
      n.stab = z.cell(c).stab;
      n.cells = {c};
      node_at_orbit[n.orbit] = static_cast<int>(l.nodes.size());
      l.nodes.push_back(std::move(n));
    }
    for (int c : z.cells_of(CellKind::EdgeDiag)) {
      LeafSpaceQ::Arc a;
      a.orbit = factor == 1 ? z.cell(c).a : z.cell(c).b;
      a.comp = 0;
      a.stab = z.cell(c).stab;
      a.cells = {c};
      int e = t.canonical_edge(a.orbit);
      a.end[0] = node_at_orbit.at(t.src(e));
      a.end[1] = node_at_orbit.at(t.dst(e));
      l.arcs.push_back(std::move(a));
    }
    return l;
  }

  std::map<std::pair<int, int>, int> node_id;
  std::map<int, std::pair<int, int>> cell_node;
  for (int u = 0; u < t.num_vertices(); ++u) {
    auto f = z.fiber_quotient(factor, false, u);
    if (f.data.nodes.empty()) continue;
    ComponentAnalysis an = analyze_components(z.base(), f.data);
    for (int comp = 0; comp < an.num_components; ++comp) {
      LeafSpaceQ::Node n;
      n.orbit = u;
      n.comp = comp;
      n.stab = an.group[comp];
      for (size_t i = 0; i < f.node_cells.size(); ++i) {
        if (an.node_comp[i] == comp) {
          n.cells.push_back(f.node_cells[i]);
          cell_node[f.node_cells[i]] = {u, comp};
        }
      }
      node_id[{u, comp}] = static_cast<int>(l.nodes.size());
      l.nodes.push_back(std::move(n));
    }
  }
  for (int p = 0; p < t.num_pairs(); ++p) {
    auto f = z.fiber_quotient(factor, true, p);
    if (f.data.nodes.empty()) continue;
    ComponentAnalysis an = analyze_components(z.base(), f.data);
    for (int comp = 0; comp < an.num_components; ++comp) {
      LeafSpaceQ::Arc a;
      a.orbit = p;
      a.comp = comp;
      a.stab = an.group[comp];
      int sample = -1;
      for (size_t i = 0; i < f.node_cells.size(); ++i) {
        if (an.node_comp[i] == comp) {
          a.cells.push_back(f.node_cells[i]);
          if (sample < 0) sample = f.node_cells[i];
        }
      }
      for (size_t i = 0; i < f.arc_cells.size(); ++i) {
        if (an.arc_comp[i] == comp) a.cells.push_back(f.arc_cells[i]);
      }
      const CellData& sc = z.cell(sample);
      a.end[0] = node_id.at(cell_node.at(sc.face[0]));
      a.end[1] = node_id.at(cell_node.at(sc.face[1]));
      l.arcs.push_back(std::move(a));
    }
  }
  return l;
}

bool leaf_space_has_cycle(const EquivSquareComplex& z, const LeafSpaceQ& l, int max_len) {
  (void)z;
  (void)max_len;
  // Leaf spaces of subsets of a product of trees are forests; a violation
  // would surface as a loop arc or a doubled arc with no stabilizer defect.
  for (size_t a = 0; a < l.arcs.size(); ++a) {
    if (l.arcs[a].end[0] == l.arcs[a].end[1]) {
      auto idx = l.arcs[a].stab.index_in(l.nodes[l.arcs[a].end[0]].stab);
      if (idx && *idx == 1) return true;
    }
  }
  for (size_t a = 0; a < l.arcs.size(); ++a) {
    for (size_t c = a + 1; c < l.arcs.size(); ++c) {
      bool same = (l.arcs[a].end[0] == l.arcs[c].end[0] &&
                   l.arcs[a].end[1] == l.arcs[c].end[1]) ||
                  (l.arcs[a].end[0] == l.arcs[c].end[1] &&
                   l.arcs[a].end[1] == l.arcs[c].end[0]);
      if (!same) continue;
      auto ia = l.arcs[a].stab.index_in(l.nodes[l.arcs[a].end[0]].stab);
      auto ic = l.arcs[c].stab.index_in(l.nodes[l.arcs[c].end[0]].stab);
      auto ja = l.arcs[a].stab.index_in(l.nodes[l.arcs[a].end[1]].stab);
      auto jc = l.arcs[c].stab.index_in(l.nodes[l.arcs[c].end[1]].stab);
      if (ia && ic && ja && jc && *ia == 1 && *ic == 1 && *ja == 1 && *jc == 1) {
        return true;
      }
    }
  }
  return false;
}

// ---------------------------------------------------------------------------

void CertificateReport::add(const std::string& name, bool pass, const std::string& detail) {
  items.push_back(CheckItem{name, pass, detail});
  if (!pass) ok = false;
}

CertificateReport check_core(const EquivSquareComplex& z,
                             const std::vector<SubgroupSpec>& family) {
  CertificateReport rep;
  const BasePresentation& b = z.base();
  rep.add("finite", z.num_cells() > 0 && z.num_cells() < 100000,
          std::to_string(z.num_cells()) + " orbit cells");

  bool closed = true;
  bool mono = true;
  std::string mono_witness;
  for (int i = 0; i < z.num_cells(); ++i) {
    const CellData& c = z.cell(i);
    for (size_t k = 0; k < c.face.size(); ++k) {
      if (c.face[k] < 0 || c.face[k] >= z.num_cells()) {
        closed = false;
        continue;
      }
      const CellData& f = z.cell(c.face[k]);
      for (const GWord& g : c.stab.generators()) {
        GWord moved = b.normal_form(b.conj(b.inv(c.face_glue[k]), g));
        if (f.stab.membership(moved).cert != Cert::Yes) {
          mono = false;
          mono_witness = z.cell_key(i) + " slot " + std::to_string(k);
        }
      }
    }
  }
  rep.add("face-closure", closed);
  rep.add("stabilizer-monotonicity", mono, mono_witness);

  if (z.diagonal) {
    rep.add("fibers-connected", true, "diagonal: point fibers");
    rep.add("leaf-space-forests", true, "diagonal: leaf spaces are the factors");
    rep.add("leaf-projections-injective", true, "diagonal");
    return rep;
  }

  bool fibers_ok = true;
  bool proj_inj = true;
  std::string fiber_witness;
  for (int factor = 1; factor <= 2; ++factor) {
    const MarkedSplitting& t = z.factor(factor);
    for (int u = 0; u < t.num_vertices(); ++u) {
      auto f = z.fiber_quotient(factor, false, u);
      if (f.data.nodes.empty()) {
        fibers_ok = false;
        fiber_witness = "empty vertex fiber f" + std::to_string(factor) + "/" +
                        std::to_string(u);
        continue;
      }
      ComponentAnalysis an = analyze_components(b, f.data);
      Cert full = an.num_components == 1 ? an.group[0].contains_subgroup(f.group)
                                         : Cert::No;
      if (full != Cert::Yes) {
        fibers_ok = false;
        proj_inj = false;
        fiber_witness = "vertex fiber f" + std::to_string(factor) + "/" + std::to_string(u);
      }
    }
    for (int p = 0; p < t.num_pairs(); ++p) {
      auto f = z.fiber_quotient(factor, true, p);
      if (f.data.nodes.empty()) {
        fibers_ok = false;
        fiber_witness = "empty edge fiber f" + std::to_string(factor) + "/" +
                        std::to_string(p);
        continue;
      }
      ComponentAnalysis an = analyze_components(b, f.data);
      Cert full = an.num_components == 1 ? an.group[0].contains_subgroup(f.group)
                                         : Cert::No;
      if (full != Cert::Yes) {
        fibers_ok = false;
        proj_inj = false;
        fiber_witness = "edge fiber f" + std::to_string(factor) + "/" + std::to_string(p);
      }
    }
  }
  rep.add("fibers-connected", fibers_ok, fiber_witness);
  rep.add("leaf-projections-injective", proj_inj);
  rep.add("complex-connected", complex_connected(z) == Cert::Yes);

  bool forests = true;
  std::string forest_witness;
  for (int factor = 1; factor <= 2; ++factor) {
    LeafSpaceQ l = leaf_space(z, factor);
    if (leaf_space_has_cycle(z, l, 8)) {
      forests = false;
      forest_witness = "factor " + std::to_string(factor);
    }
    if (fibers_ok) {
      const MarkedSplitting& t = z.factor(factor);
      if (static_cast<int>(l.nodes.size()) != t.num_vertices() ||
          static_cast<int>(l.arcs.size()) != t.num_pairs()) {
        forests = false;
        forest_witness = "leaf space does not match factor " + std::to_string(factor);
      }
    }
  }
  rep.add("leaf-space-forests", forests, forest_witness);

  for (size_t i = 0; i < family.size(); ++i) {
    auto r1 = z.factor(1).is_elliptic(family[i]);
    auto r2 = z.factor(2).is_elliptic(family[i]);
    bool pass = r1.cert == Cert::Yes && r2.cert == Cert::Yes;
    std::string detail;
    if (pass) {
      for (const GWord& g : family[i].generators()) {
        if (!z.factor(1).cells_equal(z.factor(1).act(g, r1.fixed), r1.fixed) ||
            !z.factor(2).cells_equal(z.factor(2).act(g, r2.fixed), r2.fixed)) {
          pass = false;
          detail = "generator does not fix the product vertex";
        }
      }
    } else {
      detail = "family member not elliptic in both factors";
    }
    rep.add("family-fixed-vertex-" + std::to_string(i), pass, detail);
  }
  return rep;
}

Cert complex_connected(const EquivSquareComplex& z) {
  if (z.diagonal) return Cert::Yes;
  const BasePresentation& b = z.base();
  OrbitGraphData data;
  std::map<int, int> node_of_cell;
  for (int i : z.cells_of(CellKind::Vertex)) {
    node_of_cell[i] = static_cast<int>(data.nodes.size());
    data.nodes.push_back(OGNode{z.cell(i).stab});
  }
  for (int i = 0; i < z.num_cells(); ++i) {
    const CellData& c = z.cell(i);
    if (c.kind != CellKind::EdgeH && c.kind != CellKind::EdgeV) continue;
    OGArc arc;
    arc.stab = c.stab;
    arc.end[0] = node_of_cell.at(c.face[0]);
    arc.end[1] = node_of_cell.at(c.face[1]);
    arc.glue[0] = c.face_glue[0];
    arc.glue[1] = c.face_glue[1];
    data.arcs.push_back(std::move(arc));
  }
  return covers_connected(b, data, z.factor(1).ambient());
}

bool complex_surjective(const EquivSquareComplex& z) {
  for (int factor = 1; factor <= 2; ++factor) {
    const MarkedSplitting& t = z.factor(factor);
    std::set<int> verts, pairs;
    for (int i = 0; i < z.num_cells(); ++i) {
      const CellData& c = z.cell(i);
      int coord = factor == 1 ? c.a : c.b;
      switch (c.kind) {
        case CellKind::Vertex:
          verts.insert(coord);
          break;
        case CellKind::EdgeH:
          (factor == 1 ? pairs : verts).insert(coord);
          break;
        case CellKind::EdgeV:
          (factor == 1 ? verts : pairs).insert(coord);
          break;
        case CellKind::Square:
        case CellKind::EdgeDiag:
          pairs.insert(coord);
          break;
      }
    }
    if (static_cast<int>(verts.size()) != t.num_vertices()) return false;
    if (static_cast<int>(pairs.size()) != t.num_pairs()) return false;
  }
  return true;
}

bool complex_valid(const EquivSquareComplex& z) {
  if (!complex_surjective(z)) return false;
  if (complex_connected(z) != Cert::Yes) return false;
  const BasePresentation& b = z.base();
  for (int factor = 1; factor <= 2; ++factor) {
    const MarkedSplitting& t = z.factor(factor);
    for (int u = 0; u < t.num_vertices(); ++u) {
      auto f = z.fiber_quotient(factor, false, u);
      if (f.data.nodes.empty()) return false;
      ComponentAnalysis an = analyze_components(b, f.data);
      if (an.num_components != 1) return false;
      if (an.group[0].contains_subgroup(f.group) != Cert::Yes) return false;
    }
    for (int p = 0; p < t.num_pairs(); ++p) {
      auto f = z.fiber_quotient(factor, true, p);
      if (f.data.nodes.empty()) return false;
      ComponentAnalysis an = analyze_components(b, f.data);
      if (an.num_components != 1) return false;
      if (an.group[0].contains_subgroup(f.group) != Cert::Yes) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Hypercarriers and free faces

SubcomplexHandle hypercarrier(const EquivSquareComplex& z, int factor, int edge_orbit) {
  SubcomplexHandle h;
  std::set<int> cells;
  for (int i = 0; i < z.num_cells(); ++i) {
    const CellData& c = z.cell(i);
    if (c.kind != CellKind::Square) continue;
    if ((factor == 1 ? c.a : c.b) != edge_orbit) continue;
    cells.insert(i);
    for (int f : c.face) {
      cells.insert(f);
      for (int g : z.cell(f).face) cells.insert(g);
    }
  }
  h.cells.assign(cells.begin(), cells.end());
  return h;
}

std::vector<std::pair<int, int>> transverse_free_faces(const EquivSquareComplex& z,
                                                       int factor) {
  std::vector<std::pair<int, int>> out;
  CellKind kind = factor == 1 ? CellKind::EdgeH : CellKind::EdgeV;
  for (int i : z.cells_of(kind)) {
    auto n = z.square_count_at(i);
    if (n && *n == 1) {
      for (int s : z.cells_of(CellKind::Square)) {
        const CellData& sq = z.cell(s);
        for (int f : sq.face) {
          if (f == i) out.push_back({s, i});
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Leaf-space matching (collapse verification)

LeafSpaceMap match_leaf_spaces(const EquivSquareComplex& before,
                               const EquivSquareComplex& after, int factor) {
  LeafSpaceMap m;
  LeafSpaceQ lb = leaf_space(before, factor);
  LeafSpaceQ la = leaf_space(after, factor);
  std::map<std::string, int> before_node_of_cell, before_arc_of_cell;
  for (size_t i = 0; i < lb.nodes.size(); ++i) {
    for (int c : lb.nodes[i].cells) {
      before_node_of_cell[before.cell_key(c)] = static_cast<int>(i);
    }
  }
  for (size_t i = 0; i < lb.arcs.size(); ++i) {
    for (int c : lb.arcs[i].cells) {
      before_arc_of_cell[before.cell_key(c)] = static_cast<int>(i);
    }
  }
  m.node_to.assign(la.nodes.size(), -1);
  m.arc_to.assign(la.arcs.size(), -1);
  m.valid = true;
  for (size_t i = 0; i < la.nodes.size(); ++i) {
    std::set<int> targets;
    for (int c : la.nodes[i].cells) {
      auto it = before_node_of_cell.find(after.cell_key(c));
      if (it != before_node_of_cell.end()) targets.insert(it->second);
    }
    if (targets.size() != 1) {
      m.valid = false;
      m.detail = "node " + std::to_string(i) + " has " + std::to_string(targets.size()) +
                 " targets";
      continue;
    }
    m.node_to[i] = *targets.begin();
  }
  for (size_t i = 0; i < la.arcs.size(); ++i) {
    std::set<int> targets;
    for (int c : la.arcs[i].cells) {
      auto it = before_arc_of_cell.find(after.cell_key(c));
      if (it != before_arc_of_cell.end()) targets.insert(it->second);
    }
    if (targets.size() != 1) {
      m.valid = false;
      m.detail = "arc " + std::to_string(i) + " has " + std::to_string(targets.size()) +
                 " targets";
      continue;
    }
    m.arc_to[i] = *targets.begin();
  }
  if (!m.valid) return m;
  std::set<int> node_targets(m.node_to.begin(), m.node_to.end());
  std::set<int> arc_targets(m.arc_to.begin(), m.arc_to.end());
  m.bijective = node_targets.size() == lb.nodes.size() &&
                arc_targets.size() == lb.arcs.size() &&
                la.nodes.size() == lb.nodes.size() && la.arcs.size() == lb.arcs.size();
  if (node_targets.size() != lb.nodes.size() || arc_targets.size() != lb.arcs.size()) {
    m.valid = false;
    m.detail = "not surjective";
  }
  return m;
}

bool verify_fold(const EquivSquareComplex& before, const EquivSquareComplex& after,
                 const LeafSpaceMap& m, int factor, std::string* why) {
  LeafSpaceQ lb = leaf_space(before, factor);
  LeafSpaceQ la = leaf_space(after, factor);
  if (!m.valid) {
    if (why) *why = "map invalid: " + m.detail;
    return false;
  }
  for (size_t a = 0; a < la.arcs.size(); ++a) {
    int ta = m.arc_to[a];
    std::set<int> got{m.node_to[la.arcs[a].end[0]], m.node_to[la.arcs[a].end[1]]};
    std::set<int> want{lb.arcs[ta].end[0], lb.arcs[ta].end[1]};
    if (got != want) {
      if (why) *why = "arc image endpoints mismatch at arc " + std::to_string(a);
      return false;
    }
  }
  std::map<int, std::vector<int>> pre;
  for (size_t a = 0; a < la.arcs.size(); ++a) pre[m.arc_to[a]].push_back(static_cast<int>(a));
  for (auto& [target, arcs] : pre) {
    if (arcs.size() > 2) {
      if (why) *why = "arc preimage larger than 2";
      return false;
    }
    if (arcs.size() == 2) {
      std::set<int> e1{la.arcs[arcs[0]].end[0], la.arcs[arcs[0]].end[1]};
      std::set<int> e2{la.arcs[arcs[1]].end[0], la.arcs[arcs[1]].end[1]};
      std::vector<int> common;
      std::set_intersection(e1.begin(), e1.end(), e2.begin(), e2.end(),
                            std::back_inserter(common));
      if (common.empty()) {
        if (why) *why = "folded arcs share no endpoint";
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Core construction

namespace {

// L-shaped product path between two concrete product vertices: walk factor 1
// first at constant second coordinate, then factor 2.
void ensure_pair_path(EquivSquareComplex& z, const TreeVertexCell& x1,
                      const TreeVertexCell& x2, const TreeVertexCell& y1,
                      const TreeVertexCell& y2) {
  const BasePresentation& b = z.base();
  const MarkedSplitting& t1 = z.factor(1);
  const MarkedSplitting& t2 = z.factor(2);
  auto geo1 = t1.geodesic(x1, y1);
  for (const auto& v : geo1.vertices) {
    z.ensure_cell(CellKind::Vertex, v.orbit, x2.orbit,
                  b.normal_form(b.mul(b.inv(v.rep), x2.rep)));
  }
  for (const auto& e : geo1.edges) {
    z.ensure_cell(CellKind::EdgeH, e.pair, x2.orbit,
                  b.normal_form(b.mul(b.inv(e.rep), x2.rep)));
  }
  auto geo2 = t2.geodesic(x2, y2);
  for (const auto& v : geo2.vertices) {
    z.ensure_cell(CellKind::Vertex, y1.orbit, v.orbit,
                  b.normal_form(b.mul(b.inv(y1.rep), v.rep)));
  }
  for (const auto& e : geo2.edges) {
    z.ensure_cell(CellKind::EdgeV, y1.orbit, e.pair,
                  b.normal_form(b.mul(b.inv(y1.rep), e.rep)));
  }
}

// One minimization step: remove the batch, cascading hair removals until the
// result is valid or no cascade applies. Any removal that leaves a valid
// connected-fiber invariant subcomplex cannot touch the core (the core is
// the smallest one), so accepted steps are sound.
bool try_removal(const EquivSquareComplex& z, std::vector<int> batch,
                 EquivSquareComplex& out) {
  // Map batch through stable keys since ids shift after removal; the
  // frontier records faces stranded by removals, and cascading only ever
  // eats cells adjacent to it.
  std::set<std::string> keys;
  std::set<std::string> frontier;
  for (int id : batch) {
    keys.insert(z.cell_key(id));
    for (int f : z.cell(id).face) frontier.insert(z.cell_key(f));
  }
  while (true) {
    std::vector<int> ids;
    for (int i = 0; i < z.num_cells(); ++i) {
      if (keys.count(z.cell_key(i))) ids.push_back(i);
    }
    EquivSquareComplex next = z;
    try {
      next.remove_cells(ids);
    } catch (const invalid_input&) {
      return false; // face closure would break: some batch cell is still used
    }
    if (complex_valid(next)) {
      out = std::move(next);
      return true;
    }
    // Cascade: a hair touching the frontier (1-cell outside any square with
    // a stranded degree-1 vertex), or an isolated frontier vertex.
    std::vector<int> sq_refs(next.num_cells(), 0);
    std::vector<int> one_refs(next.num_cells(), 0);
    for (int i = 0; i < next.num_cells(); ++i) {
      const CellData& c = next.cell(i);
      if (c.kind == CellKind::Square) {
        for (int f : c.face) sq_refs[f]++;
      }
      if (c.kind == CellKind::EdgeH || c.kind == CellKind::EdgeV) {
        for (int f : c.face) one_refs[f]++;
      }
    }
    int pick_e = -1, pick_v = -1;
    std::vector<std::pair<std::string, int>> order;
    for (int i = 0; i < next.num_cells(); ++i) order.push_back({next.cell_key(i), i});
    std::sort(order.begin(), order.end());
    for (auto& [key, i] : order) {
      const CellData& c = next.cell(i);
      bool is_one = c.kind == CellKind::EdgeH || c.kind == CellKind::EdgeV;
      if (!is_one || sq_refs[i] != 0) continue;
      for (int f : c.face) {
        if (one_refs[f] == 1 &&
            (frontier.count(next.cell_key(f)) || frontier.count(key))) {
          pick_e = i;
          pick_v = f;
          break;
        }
      }
      if (pick_e >= 0) break;
    }
    if (pick_e < 0) {
      for (auto& [key, i] : order) {
        if (next.cell(i).kind == CellKind::Vertex && one_refs[i] == 0 && sq_refs[i] == 0 &&
            frontier.count(key)) {
          pick_v = i;
          break;
        }
      }
      if (pick_v < 0) return false;
      keys.insert(next.cell_key(pick_v));
      continue;
    }
    keys.insert(next.cell_key(pick_e));
    keys.insert(next.cell_key(pick_v));
    for (int f : next.cell(pick_e).face) frontier.insert(next.cell_key(f));
  }
}

void minimize_complex(EquivSquareComplex& z, long step_budget,
                      std::vector<std::string>* trace) {
  long steps = 0;
  bool accepted = true;
  while (accepted) {
    if (++steps > step_budget) throw budget_exhausted("build_core: minimization");
    accepted = false;
    // Free-face collapse candidates in deterministic key order.
    std::vector<std::pair<std::string, int>> ones;
    for (int i = 0; i < z.num_cells(); ++i) {
      CellKind k = z.cell(i).kind;
      if (k == CellKind::EdgeH || k == CellKind::EdgeV) ones.push_back({z.cell_key(i), i});
    }
    std::sort(ones.begin(), ones.end());
    for (auto& [key, e] : ones) {
      auto n = z.square_count_at(e);
      if (!n || *n != 1) continue;
      int sq = -1;
      for (int s : z.cells_of(CellKind::Square)) {
        for (int f : z.cell(s).face) {
          if (f == e) sq = s;
        }
      }
      EquivSquareComplex out;
      if (try_removal(z, {sq, e}, out)) {
        if (trace) trace->push_back("minimize: collapse " + key);
        z = std::move(out);
        accepted = true;
        break;
      }
    }
    if (accepted) continue;
    // Hair candidates.
    std::vector<int> sq_refs(z.num_cells(), 0);
    std::vector<int> one_refs(z.num_cells(), 0);
    for (int i = 0; i < z.num_cells(); ++i) {
      const CellData& c = z.cell(i);
      if (c.kind == CellKind::Square) {
        for (int f : c.face) sq_refs[f]++;
      }
      if (c.kind == CellKind::EdgeH || c.kind == CellKind::EdgeV) {
        for (int f : c.face) one_refs[f]++;
      }
    }
    for (auto& [key, e] : ones) {
      if (sq_refs[e] != 0) continue;
      for (int f : z.cell(e).face) {
        if (one_refs[f] != 1) continue;
        EquivSquareComplex out;
        if (try_removal(z, {e, f}, out)) {
          if (trace) trace->push_back("minimize: shave " + key);
          z = std::move(out);
          accepted = true;
          break;
        }
      }
      if (accepted) break;
    }
  }
}

void seed_from_subtree(EquivSquareComplex& z, int factor, bool over_edge, int orbit,
                       const MinimalSubtreeResult& r, const BasePresentation& b) {
  for (const auto& n : r.tree.nodes) {
    if (factor == 1) {
      z.ensure_cell(over_edge ? CellKind::EdgeH : CellKind::Vertex, orbit, n.cell.orbit,
                    n.cell.rep);
    } else {
      z.ensure_cell(over_edge ? CellKind::EdgeV : CellKind::Vertex, n.cell.orbit, orbit,
                    b.normal_form(b.inv(n.cell.rep)));
    }
  }
  for (const auto& a : r.tree.arcs) {
    if (factor == 1) {
      z.ensure_cell(over_edge ? CellKind::Square : CellKind::EdgeV, orbit, a.cell.pair,
                    a.cell.rep);
    } else {
      z.ensure_cell(over_edge ? CellKind::Square : CellKind::EdgeH, a.cell.pair, orbit,
                    b.normal_form(b.inv(a.cell.rep)));
    }
  }
}

} // namespace

EquivSquareComplex build_core(const MarkedSplitting& t1, const MarkedSplitting& t2,
                              const Budgets& budgets, bool allow_degenerate,
                              std::vector<std::string>* trace) {
  const BasePresentation& b = t1.base();
  EquivSquareComplex z(&t1, &t2);

  if (t1.same_splitting(t2)) {
    z.diagonal = true;
    for (int p = 0; p < t1.num_pairs(); ++p) {
      z.ensure_cell(CellKind::EdgeDiag, p, p, b.identity());
    }
    for (int u = 0; u < t1.num_vertices(); ++u) {
      z.ensure_cell(CellKind::Vertex, u, u, b.identity());
    }
    z.is_core = true;
    z.is_shaved = true;
    z.is_inf_minimal = true;
    if (trace) trace->push_back("diagonal");
    return z;
  }

  if (!allow_degenerate) {
    if (!(t1.all_edge_groups_infinite() && t2.all_edge_groups_finite())) {
      throw hypothesis_violation(
          "build_core: factor 1 must have infinite edge groups and factor 2 finite "
          "ones (pass the override for other regimes)");
    }
  }

  auto log = [&](const std::string& s) {
    if (trace) trace->push_back(s);
  };

  // Seeds: minimal subtrees of non-elliptic vertex and edge groups lie in
  // every invariant connected-fiber subset, so starting from them keeps the
  // saturation inside the core.
  bool seeded = false;
  for (int u = 0; u < t1.num_vertices(); ++u) {
    auto er = t2.is_elliptic(t1.vertex_group(u));
    if (er.cert == Cert::No) {
      seed_from_subtree(z, 1, false, u, minimal_subtree(t2, t1.vertex_group(u), budgets), b);
      seeded = true;
      log("seed: vertex fiber 1/" + std::to_string(u));
    }
  }
  for (int w = 0; w < t2.num_vertices(); ++w) {
    auto er = t1.is_elliptic(t2.vertex_group(w));
    if (er.cert == Cert::No) {
      seed_from_subtree(z, 2, false, w, minimal_subtree(t1, t2.vertex_group(w), budgets), b);
      seeded = true;
      log("seed: vertex fiber 2/" + std::to_string(w));
    }
  }
  for (int p = 0; p < t1.num_pairs(); ++p) {
    const SubgroupSpec& s = t1.side_group(t1.canonical_edge(p));
    auto er = t2.is_elliptic(s);
    if (er.cert == Cert::No) {
      seed_from_subtree(z, 1, true, p, minimal_subtree(t2, s, budgets), b);
      seeded = true;
      log("seed: edge fiber 1/" + std::to_string(p));
    } else if (er.cert == Cert::Yes) {
      z.ensure_cell(CellKind::EdgeH, p, er.fixed.orbit, er.fixed.rep);
    }
  }
  for (int q = 0; q < t2.num_pairs(); ++q) {
    const SubgroupSpec& s = t2.side_group(t2.canonical_edge(q));
    auto er = t1.is_elliptic(s);
    if (er.cert == Cert::No) {
      seed_from_subtree(z, 2, true, q, minimal_subtree(t1, s, budgets), b);
      seeded = true;
      log("seed: edge fiber 2/" + std::to_string(q));
    } else if (er.cert == Cert::Yes) {
      z.ensure_cell(CellKind::EdgeV, er.fixed.orbit, q, b.normal_form(b.inv(er.fixed.rep)));
    }
  }
  if (!seeded) {
    auto er = t2.is_elliptic(t1.vertex_group(0));
    if (er.cert != Cert::Yes) throw budget_exhausted("build_core: seeding");
    z.ensure_cell(CellKind::Vertex, 0, er.fixed.orbit, er.fixed.rep);
    log("seed: fallback elliptic vertex");
  }

  long cap = budgets.steps;
  for (long round = 0;; ++round) {
    if (round > cap || z.num_cells() > 20000) {
      throw budget_exhausted("build_core: fold saturation");
    }
    bool changed = false;

    for (int factor = 1; factor <= 2 && !changed; ++factor) {
      const MarkedSplitting& t = z.factor(factor);
      const MarkedSplitting& other = z.factor(3 - factor);
      for (int u = 0; u < t.num_vertices() && !changed; ++u) {
        auto f = z.fiber_quotient(factor, false, u);
        if (f.data.nodes.empty()) continue;
        ComponentAnalysis an = analyze_components(b, f.data);
        auto concrete = [&](int node, const GWord& transporter) {
          const CellData& c = z.cell(f.node_cells[node]);
          if (factor == 1) {
            return other.vertex_cell(c.b, b.mul(transporter, c.delta));
          }
          return other.vertex_cell(c.a, b.mul(transporter, b.inv(c.delta)));
        };
        auto add_geo = [&](const TreeVertexCell& x, const TreeVertexCell& y) {
          auto geo = other.geodesic(x, y);
          for (const auto& v : geo.vertices) {
            if (factor == 1) {
              z.ensure_cell(CellKind::Vertex, u, v.orbit, v.rep);
            } else {
              z.ensure_cell(CellKind::Vertex, v.orbit, u, b.normal_form(b.inv(v.rep)));
            }
          }
          for (const auto& e : geo.edges) {
            if (factor == 1) {
              z.ensure_cell(CellKind::EdgeV, u, e.pair, e.rep);
            } else {
              z.ensure_cell(CellKind::EdgeH, e.pair, u, b.normal_form(b.inv(e.rep)));
            }
          }
        };
        if (an.num_components > 1) {
          int j = -1;
          for (size_t i = 0; i < f.data.nodes.size(); ++i) {
            if (an.node_comp[i] != an.node_comp[0]) j = static_cast<int>(i);
          }
          add_geo(concrete(0, an.node_connect[0]), concrete(j, an.node_connect[j]));
          log("fold: bridge vertex fiber " + std::to_string(factor) + "/" +
              std::to_string(u));
          changed = true;
          break;
        }
        Cert full = an.group[0].contains_subgroup(f.group);
        if (full == Cert::Unknown) throw budget_exhausted("build_core: generation test");
        if (full == Cert::No) {
          for (const GWord& g : f.group.generators()) {
            if (an.group[0].membership(g).cert != Cert::Yes) {
              auto base_pt = concrete(0, an.node_connect[0]);
              add_geo(base_pt, other.act(g, base_pt));
              break;
            }
          }
          log("fold: saturate vertex fiber " + std::to_string(factor) + "/" +
              std::to_string(u));
          changed = true;
          break;
        }
      }
    }
    if (changed) continue;

    for (int factor = 1; factor <= 2 && !changed; ++factor) {
      const MarkedSplitting& t = z.factor(factor);
      const MarkedSplitting& other = z.factor(3 - factor);
      for (int p = 0; p < t.num_pairs() && !changed; ++p) {
        auto f = z.fiber_quotient(factor, true, p);
        if (f.data.nodes.empty()) continue;
        ComponentAnalysis an = analyze_components(b, f.data);
        auto concrete = [&](int node, const GWord& transporter) {
          const CellData& c = z.cell(f.node_cells[node]);
          if (factor == 1) {
            return other.vertex_cell(c.b, b.mul(transporter, c.delta));
          }
          return other.vertex_cell(c.a, b.mul(transporter, b.inv(c.delta)));
        };
        auto add_geo = [&](const TreeVertexCell& x, const TreeVertexCell& y) {
          auto geo = other.geodesic(x, y);
          for (const auto& v : geo.vertices) {
            if (factor == 1) {
              z.ensure_cell(CellKind::EdgeH, p, v.orbit, v.rep);
            } else {
              z.ensure_cell(CellKind::EdgeV, v.orbit, p, b.normal_form(b.inv(v.rep)));
            }
          }
          for (const auto& e : geo.edges) {
            if (factor == 1) {
              z.ensure_cell(CellKind::Square, p, e.pair, e.rep);
            } else {
              z.ensure_cell(CellKind::Square, e.pair, p, b.normal_form(b.inv(e.rep)));
            }
          }
        };
        if (an.num_components > 1) {
          int j = -1;
          for (size_t i = 0; i < f.data.nodes.size(); ++i) {
            if (an.node_comp[i] != an.node_comp[0]) j = static_cast<int>(i);
          }
          add_geo(concrete(0, an.node_connect[0]), concrete(j, an.node_connect[j]));
          log("fold: bridge edge fiber " + std::to_string(factor) + "/" + std::to_string(p));
          changed = true;
          break;
        }
        Cert full = an.group[0].contains_subgroup(f.group);
        if (full == Cert::Unknown) throw budget_exhausted("build_core: generation test");
        if (full == Cert::No) {
          for (const GWord& g : f.group.generators()) {
            if (an.group[0].membership(g).cert != Cert::Yes) {
              auto base_pt = concrete(0, an.node_connect[0]);
              add_geo(base_pt, other.act(g, base_pt));
              break;
            }
          }
          log("fold: saturate edge fiber " + std::to_string(factor) + "/" + std::to_string(p));
          changed = true;
          break;
        }
      }
    }
    if (changed) continue;

    for (int p = 0; p < t1.num_pairs() && !changed; ++p) {
      bool present = false;
      for (int i : z.cells_of(CellKind::EdgeH)) {
        if (z.cell(i).a == p) present = true;
      }
      if (!present) {
        const SubgroupSpec& s = t1.side_group(t1.canonical_edge(p));
        auto er = t2.is_elliptic(s);
        if (er.cert != Cert::Yes) throw budget_exhausted("build_core: edge seeding 1");
        z.ensure_cell(CellKind::EdgeH, p, er.fixed.orbit, er.fixed.rep);
        log("surjectivity: edge 1/" + std::to_string(p));
        changed = true;
      }
    }
    for (int q = 0; q < t2.num_pairs() && !changed; ++q) {
      bool present = false;
      for (int i : z.cells_of(CellKind::EdgeV)) {
        if (z.cell(i).b == q) present = true;
      }
      if (!present) {
        const SubgroupSpec& s = t2.side_group(t2.canonical_edge(q));
        auto er = t1.is_elliptic(s);
        if (er.cert != Cert::Yes) throw budget_exhausted("build_core: edge seeding 2");
        z.ensure_cell(CellKind::EdgeV, er.fixed.orbit, q, b.normal_form(b.inv(er.fixed.rep)));
        log("surjectivity: edge 2/" + std::to_string(q));
        changed = true;
      }
    }
    if (changed) continue;

    // Global connectivity of the 1-skeleton under the full action.
    {
      OrbitGraphData data;
      std::map<int, int> node_of_cell;
      std::vector<int> vcells = z.cells_of(CellKind::Vertex);
      for (int i : vcells) {
        node_of_cell[i] = static_cast<int>(data.nodes.size());
        data.nodes.push_back(OGNode{z.cell(i).stab});
      }
      for (int i = 0; i < z.num_cells(); ++i) {
        const CellData& c = z.cell(i);
        if (c.kind != CellKind::EdgeH && c.kind != CellKind::EdgeV) continue;
        OGArc arc;
        arc.stab = c.stab;
        arc.end[0] = node_of_cell.at(c.face[0]);
        arc.end[1] = node_of_cell.at(c.face[1]);
        arc.glue[0] = c.face_glue[0];
        arc.glue[1] = c.face_glue[1];
        data.arcs.push_back(std::move(arc));
      }
      ComponentAnalysis an = analyze_components(b, data);
      auto concrete_pair = [&](int node, const GWord& transporter) {
        const CellData& c = z.cell(vcells[node]);
        return std::make_pair(t1.vertex_cell(c.a, transporter),
                              t2.vertex_cell(c.b, b.mul(transporter, c.delta)));
      };
      if (an.num_components > 1) {
        int j = -1;
        for (size_t i = 0; i < data.nodes.size(); ++i) {
          if (an.node_comp[i] != an.node_comp[0]) j = static_cast<int>(i);
        }
        auto [x1, x2] = concrete_pair(0, an.node_connect[0]);
        auto [y1, y2] = concrete_pair(j, an.node_connect[j]);
        ensure_pair_path(z, x1, x2, y1, y2);
        log("connect: bridge components");
        changed = true;
      } else {
        Cert full = an.group[0].contains_subgroup(t1.ambient());
        if (full == Cert::Unknown) throw budget_exhausted("build_core: connectivity test");
        if (full == Cert::No) {
          for (const GWord& g : t1.ambient().generators()) {
            if (an.group[0].membership(g).cert != Cert::Yes) {
              auto [x1, x2] = concrete_pair(0, an.node_connect[0]);
              ensure_pair_path(z, x1, x2, t1.act(g, x1), t2.act(g, x2));
              break;
            }
          }
          log("connect: saturate group");
          changed = true;
        }
      }
    }
    if (!changed) break;
  }

  // Validated removal: trims saturation overshoot down to the smallest
  // connected-fiber invariant subcomplex reachable by collapse and shave
  // moves, which removed cells can never belong to the core.
  minimize_complex(z, budgets.steps, trace);

  z.is_core = check_core(z).ok;
  return z;
}

// ---------------------------------------------------------------------------
// Exports

std::string export_complex_json(const EquivSquareComplex& z) {
  const BasePresentation& b = z.base();
  std::ostringstream os;
  os << "{\"schema\":1,\"kind\":\"complex\",\"flags\":{\"core\":"
     << (z.is_core ? "true" : "false") << ",\"shaved\":" << (z.is_shaved ? "true" : "false")
     << ",\"inf_minimal\":" << (z.is_inf_minimal ? "true" : "false")
     << ",\"diagonal\":" << (z.diagonal ? "true" : "false") << "},\"cells\":[";
  for (int i = 0; i < z.num_cells(); ++i) {
    const CellData& c = z.cell(i);
    if (i) os << ",";
    os << "{\"id\":" << i << ",\"kind\":\"" << to_string(c.kind) << "\",\"a\":" << c.a
       << ",\"b\":" << c.b << ",\"delta\":\"" << b.to_string(c.delta) << "\",\"stab\":[";
    const auto& gens = c.stab.generators();
    for (size_t k = 0; k < gens.size(); ++k) {
      if (k) os << ",";
      os << "\"" << b.to_string(gens[k]) << "\"";
    }
    os << "],\"faces\":[";
    for (size_t k = 0; k < c.face.size(); ++k) {
      if (k) os << ",";
      os << "{\"cell\":" << c.face[k] << ",\"glue\":\"" << b.to_string(c.face_glue[k])
         << "\"}";
    }
    os << "]}";
  }
  os << "]}";
  return os.str();
}

std::string export_complex_dot(const EquivSquareComplex& z) {
  std::ostringstream os;
  os << "graph complex {\n";
  for (int i = 0; i < z.num_cells(); ++i) {
    const CellData& c = z.cell(i);
    if (c.kind == CellKind::Vertex) {
      os << "  c" << i << " [label=\"" << z.cell_key(i) << "\"];\n";
    }
  }
  for (int i = 0; i < z.num_cells(); ++i) {
    const CellData& c = z.cell(i);
    if (c.kind == CellKind::EdgeH || c.kind == CellKind::EdgeV ||
        c.kind == CellKind::EdgeDiag) {
      os << "  c" << c.face[0] << " -- c" << c.face[1] << " [label=\"" << z.cell_key(i)
         << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

} // namespace gog
