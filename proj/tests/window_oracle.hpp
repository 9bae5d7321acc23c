#ifndef GOG_TESTS_WINDOW_ORACLE_HPP
#define GOG_TESTS_WINDOW_ORACLE_HPP

// Brute-force verification of core complexes over a finite window of the
// ambient free group, kept deliberately independent of the library's folded
// graphs and canonicalization: words are plain strings, subgroups are ball
// closures, cosets are compared by exhaustive multiplication.

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "gog/core_complex.hpp"

namespace gog::testutil {

namespace windetail {

inline std::string wreduce(std::string w) {
  std::string out;
  for (char c : w) {
    if (!out.empty() && (out.back() ^ 32) == c) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  return out;
}

inline std::string winv(const std::string& w) {
  std::string out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(*it ^ 32);
  return out;
}

inline std::string wmul(const std::string& a, const std::string& b) {
  return wreduce(a + b);
}

inline std::vector<std::string> ball(int rank, int radius) {
  std::vector<std::string> letters;
  for (int i = 0; i < rank; ++i) {
    letters.push_back(std::string(1, static_cast<char>('a' + i)));
    letters.push_back(std::string(1, static_cast<char>('A' + i)));
  }
  std::vector<std::string> out{""};
  std::vector<std::string> layer{""};
  for (int r = 0; r < radius; ++r) {
    std::vector<std::string> next;
    for (const auto& w : layer) {
      for (const auto& l : letters) {
        std::string v = wmul(w, l);
        if (v.size() == w.size() + 1) {
          next.push_back(v);
          out.push_back(v);
        }
      }
    }
    layer = std::move(next);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::set<std::string> subgroup_ball(const std::vector<std::string>& gens,
                                           int bound) {
  std::set<std::string> seen{""};
  std::queue<std::string> q;
  q.push("");
  std::vector<std::string> steps;
  for (const auto& g : gens) {
    steps.push_back(wreduce(g));
    steps.push_back(winv(wreduce(g)));
  }
  while (!q.empty()) {
    std::string cur = q.front();
    q.pop();
    for (const auto& s : steps) {
      std::string nxt = wmul(cur, s);
      if (static_cast<int>(nxt.size()) <= bound && !seen.count(nxt)) {
        seen.insert(nxt);
        q.push(nxt);
      }
    }
  }
  return seen;
}

} // namespace windetail

// A one-edge segment splitting with trivial stable letter, described by
// generator strings; every corpus pair fed to the oracle has this shape.
struct WindowSegment {
  std::vector<std::string> gens_u;
  std::vector<std::string> gens_w;
  std::vector<std::string> gens_e;
};

struct WindowReport {
  bool ok = true;
  std::string detail;
  int claimed_cells = 0;
  int minimal_cells = 0;
};

inline std::string oracle_word(const BasePresentation& b, const GWord& w) {
  std::string out;
  for (int letter : b.letters(b.normal_form(w))) {
    int pair = b.graph().edge(letter).pair;
    bool fwd = b.graph().edge(letter).canonical;
    out.push_back(static_cast<char>((fwd ? 'a' : 'A') + pair));
  }
  return out;
}

/// Verifies a claimed core of two segment splittings inside a word-length
/// window: concrete instantiation, concrete fiber connectivity and interior
/// surjectivity, and minimality among face-closed orbit subsets.
inline WindowReport window_check_core(const EquivSquareComplex& z,
                                      const WindowSegment& s1, const WindowSegment& s2,
                                      int rank, int radius) {
  using namespace windetail;
  WindowReport rep;
  rep.claimed_cells = z.num_cells();
  const BasePresentation& b = z.base();

  auto elems = ball(rank, radius);
  int sub_bound = 2 * radius;
  std::set<std::string> u1 = subgroup_ball(s1.gens_u, sub_bound);
  std::set<std::string> w1 = subgroup_ball(s1.gens_w, sub_bound);
  std::set<std::string> e1 = subgroup_ball(s1.gens_e, sub_bound);
  std::set<std::string> u2 = subgroup_ball(s2.gens_u, sub_bound);
  std::set<std::string> w2 = subgroup_ball(s2.gens_w, sub_bound);
  std::set<std::string> e2 = subgroup_ball(s2.gens_e, sub_bound);

  std::map<std::pair<const void*, std::string>, std::string> key_cache;
  auto coset_key = [&](const std::string& g, const std::set<std::string>& sub) {
    auto cache_key = std::make_pair(static_cast<const void*>(&sub), g);
    auto it = key_cache.find(cache_key);
    if (it != key_cache.end()) return it->second;
    std::string best;
    bool first = true;
    for (const auto& h : sub) {
      std::string v = wmul(g, h);
      if (static_cast<int>(v.size()) > radius + 2) continue;
      if (first || v.size() < best.size() || (v.size() == best.size() && v < best)) {
        best = v;
        first = false;
      }
    }
    if (first) best = g;
    key_cache[cache_key] = best;
    return best;
  };

  // Concrete instances of every orbit cell: (left coset key, right coset key).
  std::vector<std::set<std::pair<std::string, std::string>>> inst(z.num_cells());
  int inst_radius = radius - 1;
  for (int i = 0; i < z.num_cells(); ++i) {
    const CellData& c = z.cell(i);
    const std::set<std::string>& left =
        (c.kind == CellKind::EdgeH || c.kind == CellKind::Square) ? e1
                                                                  : (c.a == 0 ? u1 : w1);
    const std::set<std::string>& right =
        (c.kind == CellKind::EdgeV || c.kind == CellKind::Square) ? e2
                                                                  : (c.b == 0 ? u2 : w2);
    std::string delta = oracle_word(b, c.delta);
    for (const auto& g : elems) {
      if (static_cast<int>(g.size()) > inst_radius) continue;
      inst[i].insert({coset_key(g, left), coset_key(wmul(g, delta), right)});
    }
    if (inst[i].empty()) {
      rep.ok = false;
      rep.detail = "orbit " + z.cell_key(i) + " has no window instances";
      return rep;
    }
  }
  for (int i = 0; i < z.num_cells(); ++i) {
    for (int j = i + 1; j < z.num_cells(); ++j) {
      const CellData& ci = z.cell(i);
      const CellData& cj = z.cell(j);
      if (ci.kind != cj.kind || ci.a != cj.a || ci.b != cj.b) continue;
      for (const auto& p : inst[i]) {
        if (inst[j].count(p)) {
          rep.ok = false;
          rep.detail = "orbits " + z.cell_key(i) + " and " + z.cell_key(j) +
                       " share a window instance";
          return rep;
        }
      }
    }
  }

  // Interior cosets that any valid subcomplex must cover (surjectivity).
  int margin = radius - 4;
  auto interior_keys = [&](const std::set<std::string>& sub) {
    std::set<std::string> keys;
    for (const auto& g : elems) {
      std::string k = coset_key(g, sub);
      if (static_cast<int>(k.size()) <= margin) keys.insert(k);
    }
    return keys;
  };
  std::set<std::string> int_u1 = interior_keys(u1), int_w1 = interior_keys(w1);
  std::set<std::string> int_e1 = interior_keys(e1);
  std::set<std::string> int_u2 = interior_keys(u2), int_w2 = interior_keys(w2);
  std::set<std::string> int_e2 = interior_keys(e2);

  // Node keys carry the vertex orbit ("0|..." or "1|...") so cosets of
  // different vertex groups can never collide as strings.
  auto vkey1 = [&](int orbit, const std::string& g) {
    return std::to_string(orbit) + "|" + coset_key(g, orbit == 0 ? u1 : w1);
  };
  auto vkey2 = [&](int orbit, const std::string& g) {
    return std::to_string(orbit) + "|" + coset_key(g, orbit == 0 ? u2 : w2);
  };

  auto subset_valid = [&](const std::set<int>& keep) {
    for (int i : keep) {
      for (int f : z.cell(i).face) {
        if (!keep.count(f)) return false;
      }
    }
    // Fibers over factor-i cells: nodes/arcs keyed by the base coset.
    std::map<std::string, std::set<std::string>> v1_nodes, v1_arcs;
    std::map<std::string, std::set<std::string>> e1_nodes, e1_arcs;
    std::map<std::string, std::set<std::string>> v2_nodes, v2_arcs;
    std::map<std::string, std::set<std::string>> e2_nodes, e2_arcs;
    for (int i : keep) {
      const CellData& c = z.cell(i);
      for (const auto& [x, y] : inst[i]) {
        switch (c.kind) {
          case CellKind::Vertex:
            v1_nodes[vkey1(c.a, x)].insert(vkey2(c.b, y));
            v2_nodes[vkey2(c.b, y)].insert(vkey1(c.a, x));
            break;
          case CellKind::EdgeV:
            v1_arcs[vkey1(c.a, x)].insert(y);
            e2_nodes[y].insert(vkey1(c.a, x));
            break;
          case CellKind::EdgeH:
            e1_nodes[x].insert(vkey2(c.b, y));
            v2_arcs[vkey2(c.b, y)].insert(x);
            break;
          case CellKind::Square:
            e1_arcs[x].insert(y);
            e2_arcs[y].insert(x);
            break;
          default:
            break;
        }
      }
    }
    // Surjectivity over interior cosets.
    for (const auto& k : int_u1) {
      if (!v1_nodes.count("0|" + k)) return false;
    }
    for (const auto& k : int_w1) {
      if (!v1_nodes.count("1|" + k)) return false;
    }
    for (const auto& k : int_e1) {
      if (!e1_nodes.count(k)) return false;
    }
    for (const auto& k : int_u2) {
      if (!v2_nodes.count("0|" + k)) return false;
    }
    for (const auto& k : int_w2) {
      if (!v2_nodes.count("1|" + k)) return false;
    }
    for (const auto& k : int_e2) {
      if (!e2_nodes.count(k)) return false;
    }
    // Connectivity of interior fibers. A factor-2-side arc y (a T2 edge
    // coset) joins the two endpoint vertex cosets of y; symmetrically for
    // factor 1.
    auto connected = [&](const std::set<std::string>& nodes,
                         const std::set<std::string>& arcs, bool second_factor) {
      std::map<std::string, int> comp;
      int nc = 0;
      for (const auto& n : nodes) comp[n] = nc++;
      auto unite = [&](const std::string& p, const std::string& q) {
        auto ip = comp.find(p);
        auto iq = comp.find(q);
        if (ip == comp.end() || iq == comp.end()) return;
        int cp = ip->second, cq = iq->second;
        if (cp == cq) return;
        for (auto& [k, v] : comp) {
          if (v == cq) v = cp;
        }
      };
      for (const auto& y : arcs) {
        if (second_factor) {
          unite(vkey2(0, y), vkey2(1, y));
        } else {
          unite(vkey1(0, y), vkey1(1, y));
        }
      }
      std::set<int> classes;
      for (auto& [k, v] : comp) classes.insert(v);
      return classes.size() <= 1;
    };
    auto interior = [&](const std::string& keyed) {
      auto pos = keyed.find('|');
      const std::string& raw = pos == std::string::npos ? keyed : keyed.substr(pos + 1);
      return static_cast<int>(raw.size()) <= margin;
    };
    for (auto& [x, nodes] : v1_nodes) {
      if (!interior(x)) continue;
      auto it = v1_arcs.find(x);
      if (!connected(nodes, it == v1_arcs.end() ? std::set<std::string>{} : it->second,
                     true)) {
        return false;
      }
    }
    for (auto& [x, nodes] : e1_nodes) {
      if (!interior(x)) continue;
      auto it = e1_arcs.find(x);
      if (!connected(nodes, it == e1_arcs.end() ? std::set<std::string>{} : it->second,
                     true)) {
        return false;
      }
    }
    for (auto& [y, nodes] : v2_nodes) {
      if (!interior(y)) continue;
      auto it = v2_arcs.find(y);
      if (!connected(nodes, it == v2_arcs.end() ? std::set<std::string>{} : it->second,
                     false)) {
        return false;
      }
    }
    for (auto& [y, nodes] : e2_nodes) {
      if (!interior(y)) continue;
      auto it = e2_arcs.find(y);
      if (!connected(nodes, it == e2_arcs.end() ? std::set<std::string>{} : it->second,
                     false)) {
        return false;
      }
    }
    return true;
  };

  std::set<int> all;
  for (int i = 0; i < z.num_cells(); ++i) all.insert(i);
  if (!subset_valid(all)) {
    rep.ok = false;
    rep.detail = "claimed core fails concrete window validity";
    return rep;
  }
  int n = z.num_cells();
  if (n <= 16) {
    int best = n;
    for (long mask = 0; mask < (1L << n); ++mask) {
      int bits = __builtin_popcountl(mask);
      if (bits >= best) continue;
      std::set<int> keep;
      for (int i = 0; i < n; ++i) {
        if (mask & (1L << i)) keep.insert(i);
      }
      if (subset_valid(keep)) best = bits;
    }
    rep.minimal_cells = best;
    if (best < n) {
      rep.ok = false;
      rep.detail = "a smaller valid subset exists: " + std::to_string(best) + " cells";
    }
  } else {
    rep.minimal_cells = n;
  }
  return rep;
}

} // namespace gog::testutil

#endif
