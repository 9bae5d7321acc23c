#include "gog/splitting.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

namespace gog {

// ---------------------------------------------------------------------------
// Construction

MarkedSplitting MarkedSplitting::build(const BasePresentation& base, SubgroupSpec ambient) {
  MarkedSplitting s;
  s.base_ = &base;
  s.ambient_ = std::move(ambient);
  return s;
}

int MarkedSplitting::add_vertex(SubgroupSpec group, std::string name) {
  if (name.empty()) name = "V" + std::to_string(vgroups_.size());
  vnames_.push_back(std::move(name));
  vgroups_.push_back(std::move(group));
  out_.emplace_back();
  return num_vertices() - 1;
}

int MarkedSplitting::add_edge_pair(int src, int dst, SubgroupSpec edge_group,
                                   GWord delta, std::string name) {
  int e = num_oriented_edges();
  int pair = static_cast<int>(pair_canonical_.size());
  if (name.empty()) name = "E" + std::to_string(pair);
  edges_.push_back(SEdge{e, e + 1, src, pair, true, name});
  edges_.push_back(SEdge{e + 1, e, dst, pair, false, name});
  out_[src].push_back(e);
  out_[dst].push_back(e + 1);
  pair_canonical_.push_back(e);
  egroups_.push_back(std::move(edge_group));
  delta_.push_back(base_->normal_form(delta));
  delta_.push_back(base_->normal_form(base_->inv(delta)));
  return e;
}

void MarkedSplitting::finalize(int shape_base, std::vector<SPath> marking) {
  shape_base_ = shape_base;
  marking_ = std::move(marking);
  // Spanning tree over trivial-delta pairs (stable letters live on the
  // complement by convention).
  std::vector<char> seen(num_vertices(), 0);
  seen[shape_base_] = 1;
  std::queue<int> q;
  q.push(shape_base_);
  tree_.clear();
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int e : out_[v]) {
      int w = dst(e);
      if (!seen[w] && base_->is_identity(delta_[e])) {
        seen[w] = 1;
        tree_.push_back(e);
        q.push(w);
      }
    }
  }
  for (int v = 0; v < num_vertices(); ++v) {
    if (!seen[v]) {
      throw invalid_input(
          "finalize: trivial stable letters do not span the shape; "
          "markings are rooted in a spanning tree");
    }
  }
  side_cache_.assign(num_oriented_edges(), std::nullopt);
  finalized_ = true;
}

void MarkedSplitting::check_finalized() const {
  if (!finalized_) throw invalid_input("splitting not finalized");
}

const SubgroupSpec& MarkedSplitting::side_group(int e) const {
  check_finalized();
  if (!side_cache_[e]) {
    int p = pair_of(e);
    if (is_canonical(e)) {
      side_cache_[e] = egroups_[p];
    } else {
      // delta of the canonical orientation carries src-side to dst-side.
      int ce = canonical_edge(p);
      side_cache_[e] = egroups_[p].conjugate(base_->inv(delta_[ce]));
    }
  }
  return *side_cache_[e];
}

ValidationReport MarkedSplitting::validate() const {
  check_finalized();
  // Shape connected.
  std::vector<char> seen(num_vertices(), 0);
  if (num_vertices() == 0) return ValidationReport::fail("nonempty", "no vertices");
  seen[0] = 1;
  std::queue<int> q;
  q.push(0);
  int count = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int e : out_[v]) {
      if (!seen[dst(e)]) {
        seen[dst(e)] = 1;
        ++count;
        q.push(dst(e));
      }
    }
  }
  if (count != num_vertices()) return ValidationReport::fail("connected", "shape");
  // Attach inclusions: side groups land in the vertex groups.
  for (int e = 0; e < num_oriented_edges(); ++e) {
    const SubgroupSpec& side = side_group(e);
    for (const GWord& g : side.generators()) {
      if (vgroups_[src(e)].membership(g).cert != Cert::Yes) {
        return ValidationReport::fail(
            "attach inclusion",
            "edge " + edges_[e].name + " generator " + base_->to_string(g));
      }
    }
  }
  // Stable letters and vertex groups lie in the ambient subgroup.
  for (int p = 0; p < num_pairs(); ++p) {
    if (ambient_.membership(delta_[canonical_edge(p)]).cert != Cert::Yes) {
      return ValidationReport::fail("ambient closure", "stable letter " + std::to_string(p));
    }
  }
  for (int v = 0; v < num_vertices(); ++v) {
    for (const GWord& g : vgroups_[v].generators()) {
      if (ambient_.membership(g).cert != Cert::Yes) {
        return ValidationReport::fail("ambient closure", "vertex group " + vnames_[v]);
      }
    }
  }
  // Marking certificate: the splitting generates the ambient group,
  // witnessed generator by generator.
  const auto& gens = ambient_.generators();
  if (marking_.size() != gens.size()) {
    return ValidationReport::fail("marking size", std::to_string(marking_.size()));
  }
  for (size_t i = 0; i < gens.size(); ++i) {
    const SPath& p = marking_[i];
    if (p.start != shape_base_ || spath_end(p) != shape_base_) {
      return ValidationReport::fail("marking closed", std::to_string(i));
    }
    int at = p.start;
    for (size_t k = 0; k < p.elems.size(); ++k) {
      if (vgroups_[at].membership(p.elems[k]).cert != Cert::Yes) {
        return ValidationReport::fail("marking element containment",
                                      std::to_string(i) + "/" + std::to_string(k));
      }
      if (k < p.edges.size()) at = dst(p.edges[k]);
    }
    if (!base_->eq(spath_value(p), gens[i])) {
      return ValidationReport::fail("marking value", std::to_string(i));
    }
  }
  return ValidationReport::pass();
}

bool MarkedSplitting::all_edge_groups_finite() const {
  for (const auto& e : egroups_) {
    auto f = e.is_finite();
    if (!f || !*f) return false;
  }
  return true;
}

bool MarkedSplitting::all_edge_groups_infinite() const {
  for (const auto& e : egroups_) {
    auto f = e.is_finite();
    if (!f || *f) return false;
  }
  return true;
}

bool MarkedSplitting::same_splitting(const MarkedSplitting& o) const {
  if (num_vertices() != o.num_vertices() || num_pairs() != o.num_pairs()) return false;
  for (int v = 0; v < num_vertices(); ++v) {
    if (vgroups_[v].equals(o.vgroups_[v]) != Cert::Yes) return false;
  }
  for (int p = 0; p < num_pairs(); ++p) {
    int e = canonical_edge(p), oe = o.canonical_edge(p);
    if (src(e) != o.src(oe) || dst(e) != o.dst(oe)) return false;
    if (egroups_[p].equals(o.egroups_[p]) != Cert::Yes) return false;
    if (!base_->eq(delta_[e], o.delta_[oe])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Cells

TreeVertexCell MarkedSplitting::vertex_cell(int orbit, const GWord& g) const {
  check_finalized();
  return TreeVertexCell{orbit, vgroups_[orbit].coset_rep(g)};
}

TreeEdgeCell MarkedSplitting::edge_cell(int pair, const GWord& g) const {
  check_finalized();
  return TreeEdgeCell{pair, side_group(canonical_edge(pair)).coset_rep(g)};
}

TreeVertexCell MarkedSplitting::act(const GWord& g, const TreeVertexCell& c) const {
  return vertex_cell(c.orbit, base_->mul(g, c.rep));
}

TreeEdgeCell MarkedSplitting::act(const GWord& g, const TreeEdgeCell& c) const {
  return edge_cell(c.pair, base_->mul(g, c.rep));
}

SubgroupSpec MarkedSplitting::stabilizer(const TreeVertexCell& c) const {
  return vgroups_[c.orbit].conjugate(c.rep);
}

SubgroupSpec MarkedSplitting::stabilizer(const TreeEdgeCell& c) const {
  return side_group(canonical_edge(c.pair)).conjugate(c.rep);
}

std::pair<TreeVertexCell, TreeVertexCell> MarkedSplitting::endpoints(
    const TreeEdgeCell& c) const {
  int e = canonical_edge(c.pair);
  TreeVertexCell a = vertex_cell(src(e), c.rep);
  TreeVertexCell b = vertex_cell(dst(e), base_->mul(c.rep, delta_[e]));
  return {a, b};
}

bool MarkedSplitting::cells_equal(const TreeVertexCell& a, const TreeVertexCell& b) const {
  if (a.orbit != b.orbit) return false;
  return vgroups_[a.orbit].coset_eq(a.rep, b.rep) == Cert::Yes;
}

// ---------------------------------------------------------------------------
// SPath algebra

int MarkedSplitting::spath_end(const SPath& p) const {
  return p.edges.empty() ? p.start : dst(p.edges.back());
}

GWord MarkedSplitting::spath_value(const SPath& p) const {
  GWord v = p.elems.empty() ? base_->identity() : p.elems[0];
  for (size_t i = 0; i < p.edges.size(); ++i) {
    v = base_->mul(base_->mul(v, delta_[p.edges[i]]), p.elems[i + 1]);
  }
  return base_->normal_form(v);
}

SPath MarkedSplitting::invert_spath(const SPath& p) const {
  SPath r;
  r.start = spath_end(p);
  for (auto it = p.elems.rbegin(); it != p.elems.rend(); ++it) {
    r.elems.push_back(base_->normal_form(base_->inv(*it)));
  }
  for (auto it = p.edges.rbegin(); it != p.edges.rend(); ++it) {
    r.edges.push_back(rev(*it));
  }
  return r;
}

SPath MarkedSplitting::concat_spath(const SPath& a, const SPath& b) const {
  if (spath_end(a) != b.start) throw invalid_input("concat_spath: not composable");
  SPath r = a;
  r.elems.back() = base_->normal_form(base_->mul(r.elems.back(), b.elems.front()));
  r.elems.insert(r.elems.end(), b.elems.begin() + 1, b.elems.end());
  r.edges.insert(r.edges.end(), b.edges.begin(), b.edges.end());
  return r;
}

SPath MarkedSplitting::reduce_spath(SPath p) const {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < p.edges.size(); ++i) {
      if (p.edges[i + 1] != rev(p.edges[i])) continue;
      const SubgroupSpec& far = side_group(p.edges[i + 1]);
      Cert c = far.membership(p.elems[i + 1]).cert;
      if (c == Cert::Unknown) throw budget_exhausted("spath pinch membership");
      if (c != Cert::Yes) continue;
      // Transport across: mu = delta * m * delta^-1 lands in side(edges[i]).
      GWord mu = base_->conj(delta_[p.edges[i]], p.elems[i + 1]);
      GWord merged = base_->normal_form(
          base_->mul(base_->mul(p.elems[i], mu), p.elems[i + 2]));
      p.elems[i] = merged;
      p.elems.erase(p.elems.begin() + i + 1, p.elems.begin() + i + 3);
      p.edges.erase(p.edges.begin() + i, p.edges.begin() + i + 2);
      changed = true;
      break;
    }
  }
  return p;
}

SPath MarkedSplitting::shape_tree_path(int v) const {
  check_finalized();
  // BFS through the chosen spanning tree.
  std::map<int, std::vector<int>> path;
  std::queue<int> q;
  path[shape_base_] = {};
  q.push(shape_base_);
  std::map<int, std::vector<int>> adj;
  for (int e : tree_) {
    adj[src(e)].push_back(e);
    adj[dst(e)].push_back(rev(e));
  }
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int e : adj[u]) {
      if (!path.count(dst(e))) {
        path[dst(e)] = path[u];
        path[dst(e)].push_back(e);
        q.push(dst(e));
      }
    }
  }
  if (!path.count(v)) throw invalid_input("shape_tree_path: unreachable vertex");
  SPath r;
  r.start = shape_base_;
  r.edges = path[v];
  r.elems.assign(r.edges.size() + 1, base_->identity());
  return r;
}

SPath MarkedSplitting::to_spath(const GWord& closed) const {
  check_finalized();
  GWord nf = base_->canonical_form(closed);
  std::string key = base_->to_string(nf);
  auto it = spath_cache_.find(key);
  if (it != spath_cache_.end()) return it->second;
  std::vector<int> factors = base_->factor_over_generators(nf);
  SPath acc;
  acc.start = shape_base_;
  acc.elems = {base_->identity()};
  for (int f : factors) {
    int k = std::abs(f) - 1;
    SPath piece = marking_[k];
    if (f < 0) piece = invert_spath(piece);
    acc = concat_spath(acc, piece);
  }
  acc = reduce_spath(std::move(acc));
  spath_cache_[key] = acc;
  return acc;
}

// ---------------------------------------------------------------------------
// Geometry

namespace {

// Path from the shape base to the cell: marking path of the representative
// followed by the shape tree path into the orbit vertex.
SPath cell_path(const MarkedSplitting& s, const TreeVertexCell& c) {
  SPath p = s.concat_spath(s.to_spath(c.rep), s.shape_tree_path(c.orbit));
  return s.reduce_spath(std::move(p));
}

} // namespace

int MarkedSplitting::distance(const TreeVertexCell& a, const TreeVertexCell& b) const {
  SPath p = reduce_spath(concat_spath(invert_spath(cell_path(*this, a)), cell_path(*this, b)));
  return static_cast<int>(p.edges.size());
}

MarkedSplitting::Geodesic MarkedSplitting::geodesic(const TreeVertexCell& a,
                                                    const TreeVertexCell& b) const {
  SPath p = reduce_spath(concat_spath(invert_spath(cell_path(*this, a)), cell_path(*this, b)));
  Geodesic g;
  g.vertices.push_back(a);
  GWord prefix = a.rep; // value of a's access path times the partial p-value
  // p starts at a.orbit with value rep_a^-1 * rep_b; walking it from the
  // concrete vertex a means left-translating by rep_a.
  GWord walk = base_->mul(a.rep, p.elems[0]);
  for (size_t i = 0; i < p.edges.size(); ++i) {
    int f = p.edges[i];
    GWord edge_rep = walk;
    if (!is_canonical(f)) {
      // Reverse crossing: the unoriented cell is based at the far side.
      edge_rep = base_->mul(walk, delta_[f]);
    }
    g.edges.push_back(edge_cell(pair_of(f), edge_rep));
    g.orientations.push_back(f);
    walk = base_->mul(base_->mul(walk, delta_[f]), p.elems[i + 1]);
    g.vertices.push_back(vertex_cell(dst(f), walk));
  }
  (void)prefix;
  return g;
}

EllipticityResult MarkedSplitting::elliptic_element(const GWord& g, long) const {
  EllipticityResult r;
  SPath p = reduce_spath(to_spath(g));
  SPath p2 = reduce_spath(to_spath(base_->normal_form(base_->mul(g, g))));
  int len1 = static_cast<int>(p.edges.size());
  int len2 = static_cast<int>(p2.edges.size());
  if (len2 <= len1) {
    r.cert = Cert::Yes;
    if (len1 == 0) {
      r.fixed = vertex_cell(shape_base_, base_->identity());
      // g lies in a conjugate of the base vertex group only if elems[0] does;
      // a length-0 path means g is in the base-vertex group itself.
      return r;
    }
    TreeVertexCell v0 = vertex_cell(shape_base_, base_->identity());
    Geodesic geo = geodesic(v0, act(g, v0));
    r.fixed = geo.vertices[geo.vertices.size() / 2];
    return r;
  }
  r.cert = Cert::No;
  r.hyperbolic = g;
  r.translation = len2 - len1;
  return r;
}

EllipticityResult MarkedSplitting::is_elliptic(const SubgroupSpec& h, long budget) const {
  EllipticityResult r;
  const auto& gens = h.generators();
  if (gens.empty()) {
    r.cert = Cert::Yes;
    r.fixed = vertex_cell(shape_base_, base_->identity());
    return r;
  }
  std::vector<GWord> tests = gens;
  for (size_t i = 0; i < gens.size(); ++i) {
    for (size_t j = i + 1; j < gens.size(); ++j) {
      tests.push_back(base_->normal_form(base_->mul(gens[i], gens[j])));
    }
  }
  for (const GWord& t : tests) {
    EllipticityResult er = elliptic_element(t);
    if (er.cert == Cert::No) {
      return er; // hyperbolic witness
    }
  }
  // All generators and pairwise products are elliptic: a common fixed vertex
  // exists; find it by projecting onto fixed subtrees.
  TreeVertexCell v = elliptic_element(gens[0]).fixed;
  for (long round = 0; round < budget; ++round) {
    bool moved = false;
    for (const GWord& g : gens) {
      TreeVertexCell gv = act(g, v);
      if (cells_equal(v, gv)) continue;
      Geodesic geo = geodesic(v, gv);
      v = geo.vertices[geo.vertices.size() / 2];
      moved = true;
    }
    if (!moved) {
      r.cert = Cert::Yes;
      r.fixed = v;
      return r;
    }
  }
  r.cert = Cert::Unknown;
  return r;
}

bool MarkedSplitting::half_tree_infinite(int oriented_edge) const {
  check_finalized();
  int n = num_oriented_edges();
  // multiplicity of continuing from e to f at dst(e); -1 encodes infinity.
  auto multiplicity = [&](int e, int f) -> long {
    if (src(f) != dst(e)) return 0;
    auto idx = side_group(f).index_in(vgroups_[src(f)]);
    if (!idx) return -1;
    long m = *idx;
    if (f == rev(e)) m -= 1;
    return m;
  };
  std::vector<std::vector<int>> succ(n);
  std::vector<char> inf_branch(n, 0);
  for (int e = 0; e < n; ++e) {
    for (int f : out_[dst(e)]) {
      long m = multiplicity(e, f);
      if (m == -1) inf_branch[e] = 1; // infinitely many continuations
      if (m != 0) succ[e].push_back(f);
    }
  }
  std::vector<char> reach(n, 0);
  std::queue<int> q;
  std::vector<int> reached;
  for (int f : succ[oriented_edge]) {
    if (!reach[f]) {
      reach[f] = 1;
      q.push(f);
    }
  }
  if (inf_branch[oriented_edge]) return true;
  while (!q.empty()) {
    int e = q.front();
    q.pop();
    reached.push_back(e);
    if (inf_branch[e]) return true;
    for (int f : succ[e]) {
      if (!reach[f]) {
        reach[f] = 1;
        q.push(f);
      }
    }
  }
  for (int e : reached) {
    std::vector<char> seen(n, 0);
    std::queue<int> qq;
    for (int f : succ[e]) {
      if (!seen[f]) {
        seen[f] = 1;
        qq.push(f);
      }
    }
    while (!qq.empty()) {
      int x = qq.front();
      qq.pop();
      if (x == e) return true;
      for (int f : succ[x]) {
        if (!seen[f]) {
          seen[f] = 1;
          qq.push(f);
        }
      }
    }
  }
  return false;
}

bool MarkedSplitting::is_essential_pair(int pair) const {
  int e = canonical_edge(pair);
  return half_tree_infinite(e) && half_tree_infinite(rev(e));
}

// ---------------------------------------------------------------------------
// Ball expansion

MarkedSplitting::Ball MarkedSplitting::expand_ball(const TreeVertexCell& center,
                                                   int radius) const {
  check_finalized();
  Ball ball;
  std::map<std::pair<int, std::string>, int> vid;
  std::map<std::pair<int, std::string>, int> eid;
  auto vkey = [&](const TreeVertexCell& c) {
    return std::make_pair(c.orbit, base_->to_string(c.rep));
  };
  auto ekey = [&](const TreeEdgeCell& c) {
    return std::make_pair(c.pair, base_->to_string(c.rep));
  };
  TreeVertexCell c0 = vertex_cell(center.orbit, center.rep);
  ball.vertices.push_back(c0);
  ball.depth.push_back(0);
  vid[vkey(c0)] = 0;
  std::queue<int> q;
  q.push(0);
  while (!q.empty()) {
    int cur = q.front();
    q.pop();
    if (ball.depth[cur] == radius) continue;
    TreeVertexCell c = ball.vertices[cur];
    for (int f : out_[c.orbit]) {
      const SubgroupSpec& side = side_group(f);
      auto idx = side.index_in(vgroups_[c.orbit]);
      if (!idx) throw invalid_input("expand_ball: infinite local index");
      // Left transversal: inverses of the right-coset representatives.
      std::vector<GWord> lt;
      for (const GWord& t : side.transversal_in(vgroups_[c.orbit])) {
        lt.push_back(base_->normal_form(base_->inv(t)));
      }
      for (const GWord& t : lt) {
        GWord x = base_->mul(c.rep, t);
        GWord cell_rep = is_canonical(f) ? x : base_->mul(x, delta_[f]);
        TreeEdgeCell ec = edge_cell(pair_of(f), cell_rep);
        int e_index;
        auto ek = ekey(ec);
        if (eid.count(ek)) {
          e_index = eid[ek];
        } else {
          e_index = static_cast<int>(ball.edges.size());
          ball.edges.push_back(ec);
          eid[ek] = e_index;
        }
        GWord far = base_->mul(base_->mul(x, delta_[f]), base_->identity());
        TreeVertexCell vc = vertex_cell(dst(f), far);
        auto vk = vkey(vc);
        int v_index;
        if (vid.count(vk)) {
          v_index = vid[vk];
        } else {
          v_index = static_cast<int>(ball.vertices.size());
          ball.vertices.push_back(vc);
          ball.depth.push_back(ball.depth[cur] + 1);
          vid[vk] = v_index;
          q.push(v_index);
        }
        ball.incidence.push_back({e_index, cur});
        ball.incidence.push_back({e_index, v_index});
      }
    }
  }
  // Deduplicate incidence entries.
  std::sort(ball.incidence.begin(), ball.incidence.end());
  ball.incidence.erase(std::unique(ball.incidence.begin(), ball.incidence.end()),
                       ball.incidence.end());
  return ball;
}

// ---------------------------------------------------------------------------
// Quotient trees

OrbitGraphData QuotientTree::orbit_data() const {
  OrbitGraphData d;
  for (const Node& n : nodes) d.nodes.push_back(OGNode{n.stab});
  for (const Arc& a : arcs) {
    OGArc arc;
    arc.stab = a.stab;
    arc.end[0] = a.end[0];
    arc.end[1] = a.end[1];
    arc.glue[0] = a.glue[0];
    arc.glue[1] = a.glue[1];
    d.arcs.push_back(std::move(arc));
  }
  return d;
}

std::optional<int> QuotientTree::find_spur(const BasePresentation& b) const {
  OrbitGraphData d = orbit_data();
  for (size_t i = 0; i < nodes.size(); ++i) {
    auto deg = cover_degree(b, d, static_cast<int>(i));
    if (deg && *deg == 1) return static_cast<int>(i);
  }
  return std::nullopt;
}

bool QuotientTree::spur_free(const BasePresentation& b) const {
  return !find_spur(b).has_value();
}

std::string QuotientTree::signature(const BasePresentation& b) const {
  // Deterministic, reindexing-invariant description.
  std::vector<std::string> node_keys;
  for (const Node& n : nodes) {
    node_keys.push_back("v" + std::to_string(n.cell.orbit) + ":" + b.to_string(n.cell.rep));
  }
  std::vector<int> order(nodes.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return node_keys[x] < node_keys[y]; });
  std::vector<int> rank(nodes.size());
  for (size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
  std::ostringstream os;
  for (int i : order) os << node_keys[i] << ";";
  std::vector<std::string> arc_keys;
  for (const Arc& a : arcs) {
    arc_keys.push_back("e" + std::to_string(a.cell.pair) + ":" + b.to_string(a.cell.rep) +
                       "[" + std::to_string(rank[a.end[0]]) + "," +
                       std::to_string(rank[a.end[1]]) + "]");
  }
  std::sort(arc_keys.begin(), arc_keys.end());
  for (const auto& k : arc_keys) os << k << ";";
  return os.str();
}

QuotientTree shave_quotient_tree(QuotientTree t, std::vector<ShaveMove>* trace) {
  const BasePresentation& b = t.split->base();
  while (true) {
    auto spur = t.find_spur(b);
    if (!spur) break;
    int node = *spur;
    int arc = -1;
    for (size_t a = 0; a < t.arcs.size(); ++a) {
      if (t.arcs[a].end[0] == node || t.arcs[a].end[1] == node) {
        arc = static_cast<int>(a);
        break;
      }
    }
    if (arc < 0) throw invalid_input("shave: spur without incident arc");
    if (trace) {
      ShaveMove mv;
      mv.node_removed = node;
      mv.arc_removed = arc;
      mv.node_key = "v" + std::to_string(t.nodes[node].cell.orbit) + ":" +
                    b.to_string(t.nodes[node].cell.rep);
      mv.arc_key = "e" + std::to_string(t.arcs[arc].cell.pair) + ":" +
                   b.to_string(t.arcs[arc].cell.rep);
      trace->push_back(std::move(mv));
    }
    QuotientTree nt;
    nt.split = t.split;
    nt.group = t.group;
    std::vector<int> remap(t.nodes.size(), -1);
    for (size_t i = 0; i < t.nodes.size(); ++i) {
      if (static_cast<int>(i) == node) continue;
      remap[i] = static_cast<int>(nt.nodes.size());
      nt.nodes.push_back(t.nodes[i]);
    }
    for (size_t a = 0; a < t.arcs.size(); ++a) {
      if (static_cast<int>(a) == arc) continue;
      QuotientTree::Arc na = t.arcs[a];
      if (na.end[0] == node || na.end[1] == node) {
        throw invalid_input("shave: removed node still referenced");
      }
      na.end[0] = remap[na.end[0]];
      na.end[1] = remap[na.end[1]];
      nt.arcs.push_back(std::move(na));
    }
    t = std::move(nt);
  }
  return t;
}

QuotientTree full_quotient_tree(const MarkedSplitting& s) {
  const BasePresentation& b = s.base();
  QuotientTree t;
  t.split = &s;
  t.group = s.ambient();
  for (int v = 0; v < s.num_vertices(); ++v) {
    QuotientTree::Node n;
    n.cell = s.vertex_cell(v, b.identity());
    n.stab = s.vertex_group(v).conjugate(n.cell.rep);
    t.nodes.push_back(std::move(n));
  }
  for (int p = 0; p < s.num_pairs(); ++p) {
    int e = s.canonical_edge(p);
    QuotientTree::Arc a;
    a.cell = s.edge_cell(p, b.identity());
    a.stab = s.side_group(e).conjugate(a.cell.rep);
    a.end[0] = s.src(e);
    a.end[1] = s.dst(e);
    // Faces of the arc representative as translates of the node reps.
    auto ends = s.endpoints(a.cell);
    auto g0 = transporter_in(t.group, s.vertex_group(s.src(e)), ends.first.rep,
                             t.nodes[s.src(e)].cell.rep);
    auto g1 = transporter_in(t.group, s.vertex_group(s.dst(e)), ends.second.rep,
                             t.nodes[s.dst(e)].cell.rep);
    if (!g0 || !g1) throw invalid_input("full_quotient_tree: face transporter missing");
    a.glue[0] = *g0;
    a.glue[1] = *g1;
    t.arcs.push_back(std::move(a));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Minimal subtree

namespace {

struct SubtreeBuilder {
  const MarkedSplitting& s;
  const SubgroupSpec& h;
  const BasePresentation& b;
  QuotientTree t;
  std::map<std::string, int> node_index;
  std::map<std::string, int> arc_index;

  SubtreeBuilder(const MarkedSplitting& split, const SubgroupSpec& grp)
      : s(split), h(grp), b(split.base()) {
    t.split = &s;
    t.group = h;
  }

  int add_vertex_orbit(const TreeVertexCell& c) {
    GWord rep = h.double_coset_rep(c.rep, s.vertex_group(c.orbit));
    std::string key = "v" + std::to_string(c.orbit) + ":" + b.to_string(rep);
    auto it = node_index.find(key);
    if (it != node_index.end()) return it->second;
    QuotientTree::Node n;
    n.cell = TreeVertexCell{c.orbit, rep};
    n.stab = h.intersect(s.vertex_group(c.orbit).conjugate(rep));
    int id = static_cast<int>(t.nodes.size());
    t.nodes.push_back(std::move(n));
    node_index[key] = id;
    return id;
  }

  int add_edge_orbit(const TreeEdgeCell& c) {
    int e = s.canonical_edge(c.pair);
    GWord rep = h.double_coset_rep(c.rep, s.side_group(e));
    std::string key = "e" + std::to_string(c.pair) + ":" + b.to_string(rep);
    auto it = arc_index.find(key);
    if (it != arc_index.end()) return it->second;
    QuotientTree::Arc a;
    a.cell = TreeEdgeCell{c.pair, s.side_group(e).coset_rep(rep)};
    a.stab = h.intersect(s.side_group(e).conjugate(a.cell.rep));
    auto ends = s.endpoints(a.cell);
    a.end[0] = add_vertex_orbit(ends.first);
    a.end[1] = add_vertex_orbit(ends.second);
    auto g0 = transporter_in(h, s.vertex_group(ends.first.orbit), ends.first.rep,
                             t.nodes[a.end[0]].cell.rep);
    auto g1 = transporter_in(h, s.vertex_group(ends.second.orbit), ends.second.rep,
                             t.nodes[a.end[1]].cell.rep);
    if (!g0 || !g1) throw invalid_input("subtree: face transporter missing");
    a.glue[0] = *g0;
    a.glue[1] = *g1;
    int id = static_cast<int>(t.arcs.size());
    t.arcs.push_back(std::move(a));
    arc_index[key] = id;
    return id;
  }

  void add_geodesic(const TreeVertexCell& from, const TreeVertexCell& to) {
    auto geo = s.geodesic(from, to);
    for (const auto& v : geo.vertices) add_vertex_orbit(v);
    for (const auto& e : geo.edges) add_edge_orbit(e);
  }
};

} // namespace

MinimalSubtreeResult minimal_subtree(const MarkedSplitting& s, const SubgroupSpec& h,
                                     const Budgets& budgets) {
  MinimalSubtreeResult res;
  const BasePresentation& b = s.base();
  EllipticityResult er = s.is_elliptic(h);
  if (er.cert == Cert::Unknown) throw budget_exhausted("minimal_subtree: ellipticity");
  if (er.cert == Cert::Yes) {
    res.elliptic = true;
    res.fixed = er.fixed;
    return res;
  }
  SubtreeBuilder builder(s, h);
  // Axis segments of hyperbolic generators and pairwise products.
  std::vector<GWord> cands = h.generators();
  for (size_t i = 0; i < h.generators().size(); ++i) {
    for (size_t j = i + 1; j < h.generators().size(); ++j) {
      cands.push_back(b.normal_form(b.mul(h.generators()[i], h.generators()[j])));
    }
  }
  TreeVertexCell v0 = s.vertex_cell(s.shape_base(), b.identity());
  std::vector<TreeVertexCell> anchors;
  for (const GWord& g : cands) {
    EllipticityResult eg = s.elliptic_element(g);
    if (eg.cert != Cert::No) continue;
    // Midpoint of [v0, g v0] lies on the axis; take the segment to g*mid.
    auto geo = s.geodesic(v0, s.act(g, v0));
    TreeVertexCell mid = geo.vertices[geo.vertices.size() / 2];
    builder.add_geodesic(mid, s.act(g, mid));
    anchors.push_back(mid);
  }
  for (size_t i = 1; i < anchors.size(); ++i) {
    builder.add_geodesic(anchors[0], anchors[i]);
  }
  // Grow until the cover is connected as an h-graph.
  for (long round = 0;; ++round) {
    if (round > budgets.steps) throw budget_exhausted("minimal_subtree: connectivity");
    OrbitGraphData d = builder.t.orbit_data();
    ComponentAnalysis an = analyze_components(b, d);
    if (an.num_components > 1) {
      // Bridge two quotient components.
      int other = -1;
      for (size_t i = 0; i < builder.t.nodes.size(); ++i) {
        if (an.node_comp[i] != an.node_comp[0]) other = static_cast<int>(i);
      }
      builder.add_geodesic(builder.t.nodes[0].cell, builder.t.nodes[other].cell);
      continue;
    }
    Cert full = an.group[0].contains_subgroup(h);
    if (full == Cert::Unknown) throw budget_exhausted("minimal_subtree: generation");
    if (full == Cert::Yes) break;
    // Find a generator outside the component subgroup and bridge to its
    // translate of the root node.
    bool bridged = false;
    for (const GWord& g : h.generators()) {
      if (an.group[0].membership(g).cert != Cert::Yes) {
        const TreeVertexCell& root = builder.t.nodes[0].cell;
        builder.add_geodesic(root, s.act(g, root));
        bridged = true;
        break;
      }
    }
    if (!bridged) throw invalid_input("minimal_subtree: generation mismatch");
  }
  res.tree = shave_quotient_tree(std::move(builder.t), nullptr);
  return res;
}

// ---------------------------------------------------------------------------
// Exports

std::string export_ball_dot(const MarkedSplitting& s, const MarkedSplitting::Ball& ball) {
  const BasePresentation& b = s.base();
  std::ostringstream os;
  os << "graph ball {\n";
  for (size_t i = 0; i < ball.vertices.size(); ++i) {
    const auto& c = ball.vertices[i];
    os << "  v" << i << " [label=\"" << s.vertex_name(c.orbit) << "|"
       << b.to_string(c.rep) << "\" color=\"/paired12/" << (c.orbit % 12) + 1
       << "\"];\n";
  }
  // incidence pairs come sorted; emit one line per edge index.
  std::map<int, std::vector<int>> ends;
  for (auto [e, v] : ball.incidence) ends[e].push_back(v);
  for (auto& [e, vs] : ends) {
    if (vs.size() >= 2) {
      os << "  v" << vs[0] << " -- v" << vs[1] << " [label=\""
         << s.edge_name(s.canonical_edge(ball.edges[e].pair)) << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string export_ball_json(const MarkedSplitting& s, const MarkedSplitting::Ball& ball) {
  const BasePresentation& b = s.base();
  std::ostringstream os;
  os << "{\"vertices\":[";
  for (size_t i = 0; i < ball.vertices.size(); ++i) {
    if (i) os << ",";
    os << "{\"kind\":\"vertex\",\"orbit\":" << ball.vertices[i].orbit << ",\"rep\":\""
       << b.to_string(ball.vertices[i].rep) << "\"}";
  }
  os << "],\"edges\":[";
  for (size_t i = 0; i < ball.edges.size(); ++i) {
    if (i) os << ",";
    os << "{\"kind\":\"edge\",\"orbit\":" << ball.edges[i].pair << ",\"rep\":\""
       << b.to_string(ball.edges[i].rep) << "\"}";
  }
  os << "]}";
  return os.str();
}

} // namespace gog
