#ifndef GOG_FINITE_GROUP_HPP
#define GOG_FINITE_GROUP_HPP

#include <string>
#include <vector>

#include "gog/common.hpp"

namespace gog {

/// A finite group as a full multiplication table. Element 0 is the identity.
/// Orders at play are tiny, so tables beat any structured representation.
class FiniteGroup {
 public:
  FiniteGroup(); // trivial group
  explicit FiniteGroup(std::vector<std::vector<int>> table,
                       std::vector<std::string> names = {});

  int order() const { return static_cast<int>(table_.size()); }
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inv_[a]; }
  bool is_trivial() const { return order() == 1; }

  const std::vector<std::vector<int>>& table() const { return table_; }
  const std::string& name_of(int a) const { return names_[a]; }

  int element_order(int a) const;

  bool operator==(const FiniteGroup& o) const { return table_ == o.table_; }

 private:
  std::vector<std::vector<int>> table_;
  std::vector<int> inv_;
  std::vector<std::string> names_;
};

/// Exhaustive axiom check: square shape, entries in range, identity at 0,
/// two-sided inverses, associativity on all triples. Reports the first
/// failure with a witness triple.
ValidationReport check_group_axioms(const std::vector<std::vector<int>>& table);

FiniteGroup make_cyclic(int n);

/// A homomorphism between finite groups given element-by-element. Groups are
/// held by value; orders are tiny so copies are cheap and lifetimes trivial.
class Morphism {
 public:
  Morphism(FiniteGroup src, FiniteGroup dst, std::vector<int> map);

  const FiniteGroup& source() const { return src_; }
  const FiniteGroup& target() const { return dst_; }
  int apply(int a) const { return map_[a]; }
  const std::vector<int>& map() const { return map_; }
  bool injective() const;

  static Morphism identity(FiniteGroup g);

 private:
  FiniteGroup src_;
  FiniteGroup dst_;
  std::vector<int> map_;
};

/// Index of the image of an injective morphism in its target; this is the
/// number of edges of the corresponding orbit at a Bass-Serre tree vertex.
int subgroup_index(const Morphism& m);

} // namespace gog

#endif
