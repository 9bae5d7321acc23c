#include "gog/finite_group.hpp"

#include <set>

namespace gog {

FiniteGroup::FiniteGroup() : table_{{0}}, inv_{0}, names_{"1"} {}

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table,
                         std::vector<std::string> names)
    : table_(std::move(table)), names_(std::move(names)) {
  auto report = check_group_axioms(table_);
  if (!report.ok) {
    throw invalid_input("not a group table: " + report.rule + " (" + report.witness + ")");
  }
  int n = order();
  inv_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (table_[a][b] == 0) inv_[a] = b;
    }
  }
  if (static_cast<int>(names_.size()) != n) {
    names_.resize(n);
    for (int a = 0; a < n; ++a) {
      if (names_[a].empty()) names_[a] = a == 0 ? "1" : "g" + std::to_string(a);
    }
  }
}

int FiniteGroup::element_order(int a) const {
  int x = a, k = 1;
  while (x != 0) {
    x = mul(x, a);
    ++k;
  }
  return k;
}

ValidationReport check_group_axioms(const std::vector<std::vector<int>>& t) {
  int n = static_cast<int>(t.size());
  if (n == 0) return ValidationReport::fail("nonempty", "empty table");
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(t[a].size()) != n) {
      return ValidationReport::fail("square", "row " + std::to_string(a));
    }
    for (int b = 0; b < n; ++b) {
      if (t[a][b] < 0 || t[a][b] >= n) {
        return ValidationReport::fail(
            "entries in range",
            "(" + std::to_string(a) + "," + std::to_string(b) + ")");
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    if (t[0][a] != a || t[a][0] != a) {
      return ValidationReport::fail("identity at index 0", std::to_string(a));
    }
  }
  // Latin square: each row and column is a permutation.
  for (int a = 0; a < n; ++a) {
    std::set<int> row(t[a].begin(), t[a].end());
    if (static_cast<int>(row.size()) != n) {
      return ValidationReport::fail("latin square row", std::to_string(a));
    }
    std::set<int> col;
    for (int b = 0; b < n; ++b) col.insert(t[b][a]);
    if (static_cast<int>(col.size()) != n) {
      return ValidationReport::fail("latin square column", std::to_string(a));
    }
  }
  for (int a = 0; a < n; ++a) {
    bool has_inv = false;
    for (int b = 0; b < n; ++b) {
      if (t[a][b] == 0 && t[b][a] == 0) has_inv = true;
    }
    if (!has_inv) {
      return ValidationReport::fail("two-sided inverse", std::to_string(a) + " has no inverse");
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (t[t[a][b]][c] != t[a][t[b][c]]) {
          return ValidationReport::fail(
              "associativity", "(" + std::to_string(a) + "," + std::to_string(b) +
                                   "," + std::to_string(c) + ")");
        }
      }
    }
  }
  return ValidationReport::pass();
}

FiniteGroup make_cyclic(int n) {
  if (n < 1) throw invalid_input("make_cyclic: order must be positive");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  }
  std::vector<std::string> names(n);
  for (int a = 0; a < n; ++a) names[a] = a == 0 ? "1" : "c" + std::to_string(a);
  return FiniteGroup(std::move(t), std::move(names));
}

Morphism::Morphism(FiniteGroup src, FiniteGroup dst, std::vector<int> map)
    : src_(std::move(src)), dst_(std::move(dst)), map_(std::move(map)) {
  if (static_cast<int>(map_.size()) != src_.order()) {
    throw invalid_input("morphism: map size != source order");
  }
  for (int a : map_) {
    if (a < 0 || a >= dst_.order()) throw invalid_input("morphism: image out of range");
  }
  if (map_[0] != 0) throw invalid_input("morphism: identity not preserved");
  int n = src_.order();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (map_[src_.mul(a, b)] != dst_.mul(map_[a], map_[b])) {
        throw invalid_input("morphism: not a homomorphism at (" + std::to_string(a) +
                            "," + std::to_string(b) + ")");
      }
    }
  }
}

bool Morphism::injective() const {
  std::set<int> image(map_.begin(), map_.end());
  return static_cast<int>(image.size()) == src_.order();
}

Morphism Morphism::identity(FiniteGroup g) {
  std::vector<int> m(g.order());
  for (int a = 0; a < g.order(); ++a) m[a] = a;
  FiniteGroup copy = g;
  return Morphism(std::move(copy), std::move(g), std::move(m));
}

int subgroup_index(const Morphism& m) {
  if (!m.injective()) throw invalid_input("subgroup_index: morphism not injective");
  return m.target().order() / m.source().order();
}

} // namespace gog
