#include "gog/word.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

namespace gog {

BasePresentation::BasePresentation(GraphOfGroups g, int base_vertex)
    : graph_(std::move(g)), base_(base_vertex) {
  auto report = validate(graph_);
  if (!report.ok) throw invalid_input("base presentation: " + report.rule);
  if (graph_.has_marked_vertex()) {
    throw invalid_input("base presentation: vertex groups must be finite");
  }
  if (base_ < 0 || base_ >= graph_.num_vertices()) {
    throw invalid_input("base presentation: bad base vertex");
  }
  tree_ = graph_.spanning_tree();
  free_ = true;
  for (int v = 0; v < graph_.num_vertices(); ++v) {
    if (graph_.vertex(v).group.order() > 1) free_ = false;
  }
  // Paths from base through the spanning tree.
  tree_path_edges_.assign(graph_.num_vertices(), {});
  std::vector<char> seen(graph_.num_vertices(), 0);
  seen[base_] = 1;
  std::queue<int> q;
  q.push(base_);
  std::map<int, std::vector<int>> adj; // tree adjacency by oriented edges
  for (int e : tree_) {
    adj[graph_.src(e)].push_back(e);
    adj[graph_.dst(e)].push_back(graph_.rev(e));
  }
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int e : adj[v]) {
      int w = graph_.dst(e);
      if (!seen[w]) {
        seen[w] = 1;
        tree_path_edges_[w] = tree_path_edges_[v];
        tree_path_edges_[w].push_back(e);
        q.push(w);
      }
    }
  }
  build_transversals();
  build_generators();
}

void BasePresentation::build_transversals() {
  transversal_.resize(graph_.num_oriented_edges());
  for (int e = 0; e < graph_.num_oriented_edges(); ++e) {
    const FiniteGroup& gv = graph_.vertex(graph_.src(e)).group;
    const Morphism& a = graph_.edge(e).attach;
    int n = gv.order();
    std::vector<Decomp> dec(n, Decomp{-1, -1});
    // Left cosets g * im(a); the representative is the smallest element.
    for (int g = 0; g < n; ++g) {
      if (dec[g].rep >= 0) continue;
      for (int c = 0; c < a.source().order(); ++c) {
        int x = gv.mul(g, a.apply(c));
        // g is minimal in its coset because we scan g in increasing order.
        if (dec[x].rep < 0) dec[x] = Decomp{g, -1};
      }
      // Record the factor c for each member: x = g * a(c).
      for (int c = 0; c < a.source().order(); ++c) {
        int x = gv.mul(g, a.apply(c));
        if (dec[x].rep == g && dec[x].c < 0) dec[x].c = c;
      }
    }
    transversal_[e] = std::move(dec);
  }
}

void BasePresentation::build_generators() {
  vertex_gen_index_.resize(graph_.num_vertices());
  for (int v = 0; v < graph_.num_vertices(); ++v) {
    const FiniteGroup& gv = graph_.vertex(v).group;
    vertex_gen_index_[v].assign(gv.order(), -1);
    for (int a = 1; a < gv.order(); ++a) {
      GWord w = tree_path(v);
      if (w.steps.empty()) {
        w.head = a;
      } else {
        w.steps.back().elem = a;
      }
      GWord back = inv(tree_path(v));
      vertex_gen_index_[v][a] = static_cast<int>(gens_.size());
      gens_.push_back(normal_form(mul(w, back)));
      gen_labels_.push_back(graph_.vertex(v).name + ":" + gv.name_of(a));
    }
  }
  pair_gen_index_.assign(graph_.num_edge_pairs(), -1);
  for (int p = 0; p < graph_.num_edge_pairs(); ++p) {
    int e = graph_.canonical_edge_of_pair(p);
    bool in_tree = false;
    for (int t : tree_) {
      if (graph_.edge(t).pair == p) in_tree = true;
    }
    if (in_tree) continue;
    GWord w = tree_path(graph_.src(e));
    w.steps.push_back(GWord::Step{e, 0});
    GWord back = inv(tree_path(graph_.dst(e)));
    pair_gen_index_[p] = static_cast<int>(gens_.size());
    gens_.push_back(normal_form(mul(w, back)));
    gen_labels_.push_back(graph_.edge(e).name);
  }
}

std::vector<int> BasePresentation::factor_over_generators(const GWord& w) const {
  if (w.base != base_ || end_vertex(w) != base_) {
    throw invalid_input("factor_over_generators: word is not closed at the base");
  }
  std::vector<int> out;
  if (w.head != 0) out.push_back(vertex_gen_index_[w.base][w.head] + 1);
  int at = w.base;
  for (const auto& s : w.steps) {
    int e = s.edge;
    int p = graph_.edge(e).pair;
    if (pair_gen_index_[p] >= 0) {
      bool fwd = graph_.edge(e).canonical;
      out.push_back(fwd ? pair_gen_index_[p] + 1 : -(pair_gen_index_[p] + 1));
    }
    at = graph_.dst(e);
    if (s.elem != 0) out.push_back(vertex_gen_index_[at][s.elem] + 1);
  }
  return out;
}

GWord BasePresentation::tree_path(int v) const {
  GWord w;
  w.base = base_;
  for (int e : tree_path_edges_[v]) w.steps.push_back(GWord::Step{e, 0});
  return w;
}

int BasePresentation::end_vertex(const GWord& w) const {
  return w.steps.empty() ? w.base : graph_.dst(w.steps.back().edge);
}

ValidationReport BasePresentation::well_formed(const GWord& w) const {
  if (w.base < 0 || w.base >= graph_.num_vertices()) {
    return ValidationReport::fail("base vertex", std::to_string(w.base));
  }
  if (w.head < 0 || w.head >= graph_.vertex(w.base).group.order()) {
    return ValidationReport::fail("head element", std::to_string(w.head));
  }
  int at = w.base;
  for (size_t i = 0; i < w.steps.size(); ++i) {
    int e = w.steps[i].edge;
    if (e < 0 || e >= graph_.num_oriented_edges()) {
      return ValidationReport::fail("edge id", std::to_string(e));
    }
    if (graph_.src(e) != at) {
      return ValidationReport::fail("composability", "step " + std::to_string(i));
    }
    at = graph_.dst(e);
    if (w.steps[i].elem < 0 || w.steps[i].elem >= graph_.vertex(at).group.order()) {
      return ValidationReport::fail("element range", "step " + std::to_string(i));
    }
  }
  return ValidationReport::pass();
}

GWord BasePresentation::identity(int at_vertex) const {
  GWord w;
  w.base = at_vertex < 0 ? base_ : at_vertex;
  return w;
}

GWord BasePresentation::mul(const GWord& a, const GWord& b) const {
  if (end_vertex(a) != b.base) throw invalid_input("mul: paths not composable");
  GWord r = a;
  if (r.steps.empty()) {
    r.head = graph_.vertex(r.base).group.mul(r.head, b.head);
  } else {
    int v = end_vertex(a);
    r.steps.back().elem = graph_.vertex(v).group.mul(r.steps.back().elem, b.head);
  }
  r.steps.insert(r.steps.end(), b.steps.begin(), b.steps.end());
  return r;
}

GWord BasePresentation::inv(const GWord& a) const {
  GWord r;
  r.base = end_vertex(a);
  // (g0 e1 g1 ... en gn)^-1 = gn^-1 en^-1 ... e1^-1 g0^-1
  int n = a.length();
  if (n == 0) {
    r.head = graph_.vertex(a.base).group.inv(a.head);
    return r;
  }
  r.head = graph_.vertex(r.base).group.inv(a.steps.back().elem);
  for (int i = n - 1; i >= 1; --i) {
    int e = a.steps[i].edge;
    r.steps.push_back(GWord::Step{
        graph_.rev(e), graph_.vertex(graph_.src(e)).group.inv(a.steps[i - 1].elem)});
  }
  r.steps.push_back(GWord::Step{graph_.rev(a.steps[0].edge),
                                graph_.vertex(a.base).group.inv(a.head)});
  return r;
}

GWord BasePresentation::conj(const GWord& g, const GWord& x) const {
  return normal_form(mul(mul(g, x), inv(g)));
}

GWord BasePresentation::normal_form(GWord w) const {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < w.steps.size(); ++i) {
      int e = w.steps[i].edge;
      int f = w.steps[i + 1].edge;
      if (f != graph_.rev(e)) continue;
      // Middle element lives in the target group of e; pinch iff it is in
      // the image of the far-side attach.
      const Morphism& far = graph_.edge(graph_.rev(e)).attach;
      int mid = w.steps[i].elem;
      int c = -1;
      for (int k = 0; k < far.source().order(); ++k) {
        if (far.apply(k) == mid) c = k;
      }
      if (c < 0) continue;
      const Morphism& near = graph_.edge(e).attach;
      int transported = near.apply(c);
      const FiniteGroup& gs = graph_.vertex(graph_.src(e)).group;
      int tail = w.steps[i + 1].elem;
      // Merge transported * tail into the element preceding step i.
      int merged = gs.mul(transported, tail);
      if (i == 0) {
        w.head = gs.mul(w.head, merged);
      } else {
        w.steps[i - 1].elem = gs.mul(w.steps[i - 1].elem, merged);
      }
      w.steps.erase(w.steps.begin() + i, w.steps.begin() + i + 2);
      changed = true;
      break;
    }
  }
  return w;
}

GWord BasePresentation::canonical_form(GWord w) const {
  w = normal_form(std::move(w));
  // Left-greedy transversal sweep: peel the coset representative off each
  // prefix element and push the remainder across the edge.
  for (size_t i = 0; i < w.steps.size(); ++i) {
    int e = w.steps[i].edge;
    int g = i == 0 ? w.head : w.steps[i - 1].elem;
    const Decomp& d = transversal_[e][g];
    if (i == 0) {
      w.head = d.rep;
    } else {
      w.steps[i - 1].elem = d.rep;
    }
    const Morphism& far = graph_.edge(graph_.rev(e)).attach;
    const FiniteGroup& gt = graph_.vertex(graph_.dst(e)).group;
    w.steps[i].elem = gt.mul(far.apply(d.c), w.steps[i].elem);
  }
  return w;
}

bool BasePresentation::is_identity(const GWord& w) const {
  GWord n = normal_form(w);
  return n.steps.empty() && n.head == 0;
}

bool BasePresentation::eq(const GWord& a, const GWord& b) const {
  if (a.base != b.base || end_vertex(a) != end_vertex(b)) return false;
  return is_identity(mul(inv(a), b));
}

bool BasePresentation::shortlex_less(const GWord& a, const GWord& b) {
  int wa = a.length(), wb = b.length();
  if (wa != wb) return wa < wb;
  if (a.head != b.head) return a.head < b.head;
  for (int i = 0; i < wa; ++i) {
    if (a.steps[i].edge != b.steps[i].edge) return a.steps[i].edge < b.steps[i].edge;
    if (a.steps[i].elem != b.steps[i].elem) return a.steps[i].elem < b.steps[i].elem;
  }
  return false;
}

std::string BasePresentation::to_string(const GWord& w) const {
  std::vector<std::string> parts;
  if (w.head != 0) {
    parts.push_back(graph_.vertex(w.base).name + ":" +
                    graph_.vertex(w.base).group.name_of(w.head));
  }
  for (const auto& s : w.steps) {
    const EdgeDatum& d = graph_.edge(s.edge);
    parts.push_back(d.canonical ? d.name : d.name + "^-1");
    if (s.elem != 0) {
      int v = graph_.dst(s.edge);
      parts.push_back(graph_.vertex(v).name + ":" + graph_.vertex(v).group.name_of(s.elem));
    }
  }
  if (parts.empty()) return "1";
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ".";
    out += parts[i];
  }
  return out;
}

GWord BasePresentation::parse(const std::string& s, int at_vertex) const {
  GWord w = identity(at_vertex);
  if (s.empty() || s == "1") return w;
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  int at = w.base;
  for (const std::string& p : parts) {
    auto colon = p.find(':');
    if (colon != std::string::npos) {
      std::string vname = p.substr(0, colon);
      std::string ename = p.substr(colon + 1);
      int v = -1;
      for (int i = 0; i < graph_.num_vertices(); ++i) {
        if (graph_.vertex(i).name == vname) v = i;
      }
      if (v != at) throw invalid_input("parse: element '" + p + "' not at current vertex");
      int elem = -1;
      for (int a = 0; a < graph_.vertex(v).group.order(); ++a) {
        if (graph_.vertex(v).group.name_of(a) == ename) elem = a;
      }
      if (elem < 0) throw invalid_input("parse: unknown element name '" + p + "'");
      if (w.steps.empty()) {
        w.head = graph_.vertex(v).group.mul(w.head, elem);
      } else {
        w.steps.back().elem = graph_.vertex(v).group.mul(w.steps.back().elem, elem);
      }
      continue;
    }
    bool inverse = false;
    std::string name = p;
    if (name.size() > 3 && name.substr(name.size() - 3) == "^-1") {
      inverse = true;
      name = name.substr(0, name.size() - 3);
    }
    int edge = -1;
    for (int e = 0; e < graph_.num_oriented_edges(); ++e) {
      if (graph_.edge(e).name == name && graph_.edge(e).canonical == !inverse) edge = e;
    }
    if (edge < 0) throw invalid_input("parse: unknown generator name '" + name + "'");
    if (graph_.src(edge) != at) {
      throw invalid_input("parse: letter '" + p + "' does not compose at vertex " +
                          std::to_string(at));
    }
    w.steps.push_back(GWord::Step{edge, 0});
    at = graph_.dst(edge);
  }
  auto rep = well_formed(w);
  if (!rep.ok) throw invalid_input("parse: malformed word: " + rep.rule);
  return w;
}

GWord BasePresentation::from_raw(const RawWord& r, int at_vertex) const {
  GWord w = identity(at_vertex);
  int at = w.base;
  for (const RawSyllable& s : r.syllables) {
    if (s.kind == 0) {
      if (s.id != at) throw invalid_input("from_raw: element not at current vertex");
      if (w.steps.empty()) {
        w.head = graph_.vertex(at).group.mul(w.head, s.elem);
      } else {
        w.steps.back().elem = graph_.vertex(at).group.mul(w.steps.back().elem, s.elem);
      }
    } else {
      if (graph_.src(s.id) != at) throw invalid_input("from_raw: edge does not compose");
      w.steps.push_back(GWord::Step{s.id, 0});
      at = graph_.dst(s.id);
    }
  }
  return w;
}

std::vector<int> BasePresentation::letters(const GWord& w) const {
  if (!free_) throw invalid_input("letters: base presentation is not free");
  std::vector<int> out;
  out.reserve(w.steps.size());
  for (const auto& s : w.steps) out.push_back(s.edge);
  return out;
}

GWord BasePresentation::from_letters(const std::vector<int>& ls, int at_vertex) const {
  GWord w = identity(at_vertex);
  for (int e : ls) w.steps.push_back(GWord::Step{e, 0});
  auto rep = well_formed(w);
  if (!rep.ok) throw invalid_input("from_letters: malformed: " + rep.rule);
  return w;
}

} // namespace gog
