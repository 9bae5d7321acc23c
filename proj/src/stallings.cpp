#include "gog/stallings.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <set>

namespace gog {

Letters reduce_letters(const GraphOfGroups& g, Letters w) {
  Letters out;
  for (int x : w) {
    if (!out.empty() && g.rev(out.back()) == x) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  return out;
}

Letters invert_letters(const GraphOfGroups& g, const Letters& w) {
  Letters out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(g.rev(*it));
  return out;
}

Letters concat_reduced(const GraphOfGroups& g, const Letters& a, const Letters& b) {
  Letters out = a;
  out.insert(out.end(), b.begin(), b.end());
  return reduce_letters(g, std::move(out));
}

bool shortlex_letters_less(const Letters& a, const Letters& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

Formal reduce_formal(Formal f) {
  Formal out;
  for (int x : f) {
    if (!out.empty() && out.back() == -x) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  return out;
}

static Formal invert_formal(Formal f) {
  std::reverse(f.begin(), f.end());
  for (int& x : f) x = -x;
  return f;
}

// ---------------------------------------------------------------------------

FoldedGraph::FoldedGraph(const BasePresentation* base, int basepoint_type)
    : base_(base) {
  root_ = new_vertex(basepoint_type);
}

int FoldedGraph::find(int v) const {
  while (parent_[v] != v) v = parent_[v];
  return v;
}

int FoldedGraph::new_vertex(int type) {
  type_.push_back(type);
  parent_.push_back(static_cast<int>(parent_.size()));
  dead_vertex_.push_back(0);
  incident_.emplace_back();
  return static_cast<int>(type_.size()) - 1;
}

void FoldedGraph::add_edge(int from, int to, int letter, Formal phi) {
  int id = static_cast<int>(edges_.size());
  edges_.push_back(Edge{from, to, letter, std::move(phi)});
  incident_[from].push_back(id);
  if (to != from) incident_[to].push_back(id);
}

void FoldedGraph::add_generator_loop(const Letters& w, int gen_index) {
  const GraphOfGroups& g = base_->graph();
  if (w.empty()) return;
  int at = root_;
  for (size_t i = 0; i < w.size(); ++i) {
    int letter = w[i];
    if (g.src(letter) != type_[find(at)]) {
      throw invalid_input("add_generator_loop: word does not compose");
    }
    int nxt = (i + 1 == w.size()) ? root_ : new_vertex(g.dst(letter));
    Formal phi;
    if (i + 1 == w.size()) phi.push_back(gen_index + 1);
    add_edge(at, nxt, letter, std::move(phi));
    at = nxt;
  }
  folded_ = false;
}

void FoldedGraph::fold() {
  const GraphOfGroups& g = base_->graph();

  // One half-edge record: departing `vertex` over `letter`, arriving at
  // `target`, with witness `phi` normalized to that direction.
  struct Half {
    int edge_id;
    bool forward;
    int letter;
    int target;
  };

  auto halves_at = [&](int v) {
    std::vector<Half> hs;
    for (int eid : incident_[v]) {
      const Edge& e = edges_[eid];
      if (e.dead) continue;
      int from = find(e.from), to = find(e.to);
      if (from == v) hs.push_back(Half{eid, true, e.letter, to});
      if (to == v) hs.push_back(Half{eid, false, g.rev(e.letter), from});
    }
    return hs;
  };

  auto phi_along = [&](const Half& h) {
    Formal p = edges_[h.edge_id].phi;
    return h.forward ? p : invert_formal(std::move(p));
  };

  auto merge_vertices = [&](int keep, int drop, const Formal& h_keep_from_drop) {
    // h has image v(drop) * v(keep)^-1; fix witnesses of edges at drop.
    Formal h_inv = invert_formal(h_keep_from_drop);
    for (int eid : incident_[drop]) {
      Edge& e = edges_[eid];
      if (e.dead) continue;
      if (find(e.to) == drop) {
        Formal np = e.phi;
        np.insert(np.end(), h_keep_from_drop.begin(), h_keep_from_drop.end());
        e.phi = reduce_formal(std::move(np));
      }
      if (find(e.from) == drop) {
        Formal np = h_inv;
        np.insert(np.end(), e.phi.begin(), e.phi.end());
        e.phi = reduce_formal(std::move(np));
      }
    }
    parent_[drop] = keep;
    dead_vertex_[drop] = 1;
    for (int eid : incident_[drop]) incident_[keep].push_back(eid);
    incident_[drop].clear();
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < static_cast<int>(type_.size()) && !changed; ++v) {
      if (dead_vertex_[v] || find(v) != v) continue;
      auto hs = halves_at(v);
      for (size_t i = 0; i < hs.size() && !changed; ++i) {
        for (size_t j = i + 1; j < hs.size() && !changed; ++j) {
          if (hs[i].letter != hs[j].letter) continue;
          if (hs[i].edge_id == hs[j].edge_id && hs[i].forward == hs[j].forward) continue;
          Half a = hs[i], b = hs[j];
          if (a.target != b.target) {
            int keep = a.target, drop = b.target;
            Formal pk = phi_along(a), pd = phi_along(b);
            if (drop == find(root_)) {
              std::swap(keep, drop);
              std::swap(pk, pd);
            }
            // image(pd^-1 * pk) = v(drop) * v(keep)^-1
            Formal h = invert_formal(pd);
            h.insert(h.end(), pk.begin(), pk.end());
            merge_vertices(keep, drop, reduce_formal(std::move(h)));
          }
          // Drop one duplicate edge; both now share endpoints and letter.
          if (!edges_[a.edge_id].dead && !edges_[b.edge_id].dead &&
              a.edge_id != b.edge_id) {
            edges_[b.edge_id].dead = true;
          }
          changed = true;
        }
      }
    }
  }
  prune();
  rebuild_index();
  folded_ = true;
}

void FoldedGraph::prune() {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < static_cast<int>(type_.size()); ++v) {
      if (dead_vertex_[v] || find(v) != v || v == find(root_)) continue;
      int deg = 0;
      int last = -1;
      for (int eid : incident_[v]) {
        const Edge& e = edges_[eid];
        if (e.dead) continue;
        if (find(e.from) == v) ++deg;
        if (find(e.to) == v) ++deg;
        last = eid;
      }
      if (deg <= 1) {
        if (last >= 0 && deg == 1) edges_[last].dead = true;
        dead_vertex_[v] = 1;
        changed = true;
      }
    }
  }
}

void FoldedGraph::rebuild_index() {
  alive_.clear();
  step_cache_.clear();
  for (int v = 0; v < static_cast<int>(type_.size()); ++v) {
    if (!dead_vertex_[v] && find(v) == v) alive_.push_back(v);
  }
  for (size_t eid = 0; eid < edges_.size(); ++eid) {
    const Edge& e = edges_[eid];
    if (e.dead) continue;
    int from = find(e.from), to = find(e.to);
    step_cache_[{from, e.letter}] = static_cast<int>(eid);
    step_cache_[{to, base_->graph().rev(e.letter)}] = static_cast<int>(eid);
  }
}

int FoldedGraph::step(int v, int letter) const {
  auto it = step_cache_.find({find(v), letter});
  if (it == step_cache_.end()) return -1;
  const Edge& e = edges_[it->second];
  if (find(e.from) == find(v) && e.letter == letter) return find(e.to);
  return find(e.from);
}

int FoldedGraph::trace(int from, const Letters& w) const {
  int at = find(from);
  for (int letter : w) {
    at = step(at, letter);
    if (at < 0) return -1;
  }
  return at;
}

bool FoldedGraph::accepts(const Letters& w) const {
  return trace(root(), w) == root();
}

std::optional<Formal> FoldedGraph::witness(const Letters& w) const {
  int at = root();
  Formal acc;
  for (int letter : w) {
    auto it = step_cache_.find({at, letter});
    if (it == step_cache_.end()) return std::nullopt;
    const Edge& e = edges_[it->second];
    bool fwd = find(e.from) == at && e.letter == letter;
    Formal p = e.phi;
    if (!fwd) p = invert_formal(std::move(p));
    acc.insert(acc.end(), p.begin(), p.end());
    at = fwd ? find(e.to) : find(e.from);
  }
  if (at != root()) return std::nullopt;
  return reduce_formal(std::move(acc));
}

std::vector<int> FoldedGraph::live_vertices() const { return alive_; }

Letters FoldedGraph::access_word(int v) const {
  const GraphOfGroups& g = base_->graph();
  std::map<int, Letters> word;
  std::queue<int> q;
  word[root()] = {};
  q.push(root());
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    if (x == find(v)) return word[x];
    for (int eid : incident_[x]) {
      const Edge& e = edges_[eid];
      if (e.dead) continue;
      int from = find(e.from), to = find(e.to);
      if (from == x && !word.count(to)) {
        Letters w = word[x];
        w.push_back(e.letter);
        word[to] = std::move(w);
        q.push(to);
      }
      if (to == x && !word.count(from)) {
        Letters w = word[x];
        w.push_back(g.rev(e.letter));
        word[from] = std::move(w);
        q.push(from);
      }
    }
  }
  throw invalid_input("access_word: vertex not reachable");
}

const FoldedGraph::BasisData& FoldedGraph::basis_data() const {
  if (basis_cache_) return *basis_cache_;
  const GraphOfGroups& g = base_->graph();
  BasisData data;
  std::set<int> tree_edges;
  std::set<int> seen{root()};
  std::queue<int> q;
  q.push(root());
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int eid : incident_[x]) {
      const Edge& e = edges_[eid];
      if (e.dead) continue;
      int from = find(e.from), to = find(e.to);
      if (from != x && to != x) continue;
      int other = from == x ? to : from;
      if (!seen.count(other)) {
        seen.insert(other);
        tree_edges.insert(eid);
        q.push(other);
      }
    }
  }
  data.tree_edges.assign(tree_edges.begin(), tree_edges.end());
  for (size_t eid = 0; eid < edges_.size(); ++eid) {
    const Edge& e = edges_[eid];
    if (e.dead || tree_edges.count(static_cast<int>(eid))) continue;
    int from = find(e.from), to = find(e.to);
    Letters w = access_word(from);
    w.push_back(e.letter);
    Letters back = invert_letters(g, access_word(to));
    w.insert(w.end(), back.begin(), back.end());
    data.edge_to_basis[static_cast<int>(eid)] = static_cast<int>(data.words.size());
    data.words.push_back(reduce_letters(g, std::move(w)));
  }
  basis_cache_ = std::move(data);
  return *basis_cache_;
}

std::vector<Letters> FoldedGraph::basis() const { return basis_data().words; }

std::optional<Formal> FoldedGraph::spell_in_basis(const Letters& w) const {
  const BasisData& data = basis_data();
  int at = root();
  Formal out;
  for (int letter : w) {
    auto it = step_cache_.find({at, letter});
    if (it == step_cache_.end()) return std::nullopt;
    int eid = it->second;
    const Edge& e = edges_[eid];
    bool fwd = find(e.from) == at && e.letter == letter;
    auto bit = data.edge_to_basis.find(eid);
    if (bit != data.edge_to_basis.end()) {
      out.push_back(fwd ? bit->second + 1 : -(bit->second + 1));
    }
    at = fwd ? find(e.to) : find(e.from);
  }
  if (at != root()) return std::nullopt;
  return reduce_formal(std::move(out));
}

int FoldedGraph::rank() const {
  int v = static_cast<int>(alive_.size());
  int e = 0;
  for (const Edge& ed : edges_) {
    if (!ed.dead) ++e;
  }
  return e - v + 1;
}

bool FoldedGraph::complete() const {
  const GraphOfGroups& g = base_->graph();
  for (int v : alive_) {
    for (int e = 0; e < g.num_oriented_edges(); ++e) {
      if (g.src(e) != type_[v]) continue;
      if (step(v, e) < 0) return false;
    }
  }
  return true;
}

std::optional<long> FoldedGraph::index_in_ambient() const {
  if (!complete()) return std::nullopt;
  long n = 0;
  for (int v : alive_) {
    if (type_[v] == base_->base_vertex()) ++n;
  }
  return n;
}

std::vector<Letters> FoldedGraph::coset_transversal() const {
  std::vector<Letters> out;
  for (int v : alive_) {
    if (type_[v] == base_->base_vertex()) out.push_back(access_word(v));
  }
  std::sort(out.begin(), out.end(), shortlex_letters_less);
  return out;
}

FoldedGraph fold_subgroup(const BasePresentation& base, int basepoint_type,
                          const std::vector<Letters>& gens) {
  FoldedGraph fg(&base, basepoint_type);
  for (size_t i = 0; i < gens.size(); ++i) {
    Letters w = reduce_letters(base.graph(), gens[i]);
    fg.add_generator_loop(w, static_cast<int>(i));
  }
  fg.fold();
  return fg;
}

// ---------------------------------------------------------------------------
// Tube automata

namespace {

// Plain letter-labeled graph for tube constructions: no witnesses, just
// deterministic folding and path search.
struct PlainGraph {
  const GraphOfGroups* g = nullptr;
  struct E {
    int from, to, letter;
    bool dead = false;
  };
  std::vector<E> edges;
  std::vector<std::vector<int>> inc;
  std::vector<int> merged;

  int add_vertex() {
    inc.emplace_back();
    merged.push_back(static_cast<int>(merged.size()));
    return static_cast<int>(merged.size()) - 1;
  }
  int find(int v) const {
    while (merged[v] != v) v = merged[v];
    return v;
  }
  void add_edge(int a, int b, int letter) {
    edges.push_back(E{a, b, letter, false});
    inc[a].push_back(static_cast<int>(edges.size()) - 1);
    if (b != a) inc[b].push_back(static_cast<int>(edges.size()) - 1);
  }
  void merge(int keep, int drop) {
    if (keep == drop) return;
    merged[drop] = keep;
    for (int e : inc[drop]) inc[keep].push_back(e);
    inc[drop].clear();
  }
  void fold() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int v = 0; v < static_cast<int>(merged.size()) && !changed; ++v) {
        if (find(v) != v) continue;
        struct Half {
          int edge_id;
          int letter;
          int target;
          bool fwd;
        };
        std::vector<Half> hs;
        for (int eid : inc[v]) {
          const E& e = edges[eid];
          if (e.dead) continue;
          int from = find(e.from), to = find(e.to);
          if (from == v) hs.push_back(Half{eid, e.letter, to, true});
          if (to == v) hs.push_back(Half{eid, g->rev(e.letter), from, false});
        }
        for (size_t i = 0; i < hs.size() && !changed; ++i) {
          for (size_t j = i + 1; j < hs.size() && !changed; ++j) {
            if (hs[i].letter != hs[j].letter) continue;
            if (hs[i].edge_id == hs[j].edge_id && hs[i].fwd == hs[j].fwd) continue;
            if (hs[i].target != hs[j].target) {
              merge(std::min(hs[i].target, hs[j].target),
                    std::max(hs[i].target, hs[j].target));
            }
            if (hs[i].edge_id != hs[j].edge_id) edges[hs[j].edge_id].dead = true;
            changed = true;
          }
        }
      }
    }
  }
  int step(int v, int letter) const {
    v = find(v);
    for (int eid : inc[v]) {
      const E& e = edges[eid];
      if (e.dead) continue;
      if (find(e.from) == v && e.letter == letter) return find(e.to);
      if (find(e.to) == v && g->rev(e.letter) == letter) return find(e.from);
    }
    return -1;
  }
};

int copy_into(const FoldedGraph& fg, PlainGraph& pg, std::map<int, int>& vmap) {
  for (int v : fg.live_vertices()) vmap[v] = pg.add_vertex();
  const GraphOfGroups& g = fg.base().graph();
  for (int v : fg.live_vertices()) {
    for (int letter = 0; letter < g.num_oriented_edges(); ++letter) {
      if (!g.edge(letter).canonical) continue;
      int to = fg.step(v, letter);
      if (to >= 0) pg.add_edge(vmap[v], vmap[to], letter);
    }
  }
  return vmap[fg.root()];
}

// Shortlex-minimal reduced path label between two vertices; states carry the
// arriving edge so immediate backtracking is excluded.
Letters min_reduced_path(const PlainGraph& pg, int from, int to) {
  const GraphOfGroups& g = *pg.g;
  struct State {
    Letters word;
    int vertex;
    int last_edge;
  };
  auto cmp = [](const State& a, const State& b) {
    if (a.word.size() != b.word.size()) return a.word.size() > b.word.size();
    return a.word > b.word;
  };
  std::priority_queue<State, std::vector<State>, decltype(cmp)> pq(cmp);
  std::set<std::pair<int, int>> done;
  pq.push(State{{}, pg.find(from), -1});
  while (!pq.empty()) {
    State s = pq.top();
    pq.pop();
    if (s.vertex == pg.find(to)) return s.word;
    if (done.count({s.vertex, s.last_edge})) continue;
    done.insert({s.vertex, s.last_edge});
    for (int eid : pg.inc[s.vertex]) {
      const auto& e = pg.edges[eid];
      if (e.dead || eid == s.last_edge) continue;
      std::vector<std::pair<int, int>> moves;
      if (pg.find(e.from) == s.vertex) moves.push_back({e.letter, pg.find(e.to)});
      if (pg.find(e.to) == s.vertex) moves.push_back({g.rev(e.letter), pg.find(e.from)});
      for (auto [letter, tgt] : moves) {
        if (done.count({tgt, eid})) continue;
        State ns;
        ns.word = s.word;
        ns.word.push_back(letter);
        ns.vertex = tgt;
        ns.last_edge = eid;
        pq.push(std::move(ns));
      }
    }
  }
  throw invalid_input("min_reduced_path: target not reachable");
}

} // namespace

Letters min_coset_rep(const FoldedGraph& w_graph, const Letters& g) {
  const GraphOfGroups& graph = w_graph.base().graph();
  PlainGraph pg;
  pg.g = &graph;
  std::map<int, int> vmap;
  int beta = copy_into(w_graph, pg, vmap);
  Letters gr = reduce_letters(graph, g);
  int start = beta;
  if (!gr.empty()) {
    start = pg.add_vertex();
    int at = start;
    for (size_t i = 0; i < gr.size(); ++i) {
      int nxt = (i + 1 == gr.size()) ? beta : pg.add_vertex();
      pg.add_edge(at, nxt, gr[i]);
      at = nxt;
    }
  }
  pg.fold();
  return min_reduced_path(pg, pg.find(start), pg.find(beta));
}

Letters min_double_rep(const FoldedGraph& s_graph, const Letters& g,
                       const FoldedGraph& w_graph) {
  const GraphOfGroups& graph = s_graph.base().graph();
  PlainGraph pg;
  pg.g = &graph;
  std::map<int, int> smap, wmap;
  int beta_s = copy_into(s_graph, pg, smap);
  int beta_w = copy_into(w_graph, pg, wmap);
  Letters gr = reduce_letters(graph, g);
  if (gr.empty()) {
    pg.merge(std::min(pg.find(beta_s), pg.find(beta_w)),
             std::max(pg.find(beta_s), pg.find(beta_w)));
  } else {
    int at = beta_s;
    for (size_t i = 0; i < gr.size(); ++i) {
      int nxt = (i + 1 == gr.size()) ? beta_w : pg.add_vertex();
      pg.add_edge(at, nxt, gr[i]);
      at = nxt;
    }
  }
  pg.fold();
  return min_reduced_path(pg, pg.find(beta_s), pg.find(beta_w));
}

std::optional<Letters> find_in_subgroup_coset(const FoldedGraph& s_graph,
                                              const FoldedGraph& c_graph,
                                              const Letters& h) {
  const GraphOfGroups& graph = s_graph.base().graph();
  PlainGraph tube;
  tube.g = &graph;
  std::map<int, int> cmap;
  int beta_c = copy_into(c_graph, tube, cmap);
  Letters hr = reduce_letters(graph, h);
  int t0 = beta_c;
  int at = beta_c;
  for (size_t i = 0; i < hr.size(); ++i) {
    int nxt = tube.add_vertex();
    tube.add_edge(at, nxt, hr[i]);
    at = nxt;
    t0 = nxt;
  }
  tube.fold();
  auto start = std::make_pair(s_graph.root(), tube.find(beta_c));
  auto goal = std::make_pair(s_graph.root(), tube.find(t0));
  if (start == goal) return Letters{};
  std::map<std::pair<int, int>, std::pair<std::pair<int, int>, int>> pred;
  std::queue<std::pair<int, int>> q;
  pred[start] = {start, 0};
  q.push(start);
  while (!q.empty()) {
    auto cur = q.front();
    q.pop();
    for (int letter = 0; letter < graph.num_oriented_edges(); ++letter) {
      int ns = s_graph.step(cur.first, letter);
      if (ns < 0) continue;
      int nt = tube.step(cur.second, letter);
      if (nt < 0) continue;
      auto nxt = std::make_pair(ns, nt);
      if (pred.count(nxt)) continue;
      pred[nxt] = {cur, letter};
      if (nxt == goal) {
        Letters out;
        auto walk = nxt;
        while (!(walk == start)) {
          out.push_back(pred[walk].second);
          walk = pred[walk].first;
        }
        std::reverse(out.begin(), out.end());
        return reduce_letters(graph, out);
      }
      q.push(nxt);
    }
  }
  return std::nullopt;
}

std::vector<Letters> intersect_subgroups(const FoldedGraph& a, const FoldedGraph& b) {
  const GraphOfGroups& graph = a.base().graph();
  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> stack;
  auto start = std::make_pair(a.root(), b.root());
  id[start] = 0;
  stack.push_back(start);
  struct PEdge {
    int from, to, letter;
  };
  std::vector<PEdge> edges;
  std::vector<std::pair<int, int>> nodes{start};
  while (!stack.empty()) {
    auto cur = stack.back();
    stack.pop_back();
    for (int letter = 0; letter < graph.num_oriented_edges(); ++letter) {
      if (!graph.edge(letter).canonical) continue;
      int na = a.step(cur.first, letter);
      int nb = b.step(cur.second, letter);
      if (na < 0 || nb < 0) continue;
      auto nxt = std::make_pair(na, nb);
      if (!id.count(nxt)) {
        id[nxt] = static_cast<int>(nodes.size());
        nodes.push_back(nxt);
        stack.push_back(nxt);
      }
      edges.push_back(PEdge{id[cur], id[nxt], letter});
    }
  }
  int n = static_cast<int>(nodes.size());
  std::vector<Letters> access(n);
  std::vector<char> seen(n, 0);
  std::set<size_t> tree_edges;
  std::vector<std::vector<size_t>> adj(n);
  for (size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].from].push_back(i);
    adj[edges[i].to].push_back(i);
  }
  std::queue<int> q;
  seen[0] = 1;
  q.push(0);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (size_t eid : adj[v]) {
      const PEdge& e = edges[eid];
      int other = e.from == v ? e.to : e.from;
      if (!seen[other]) {
        seen[other] = 1;
        tree_edges.insert(eid);
        Letters w = access[v];
        w.push_back(e.from == v ? e.letter : graph.rev(e.letter));
        access[other] = std::move(w);
        q.push(other);
      }
    }
  }
  std::vector<Letters> gens;
  for (size_t i = 0; i < edges.size(); ++i) {
    if (tree_edges.count(i)) continue;
    const PEdge& e = edges[i];
    Letters w = access[e.from];
    w.push_back(e.letter);
    Letters back = invert_letters(graph, access[e.to]);
    w.insert(w.end(), back.begin(), back.end());
    w = reduce_letters(graph, std::move(w));
    if (!w.empty()) gens.push_back(std::move(w));
  }
  std::sort(gens.begin(), gens.end(), shortlex_letters_less);
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  return gens;
}

} // namespace gog
