#ifndef GOG_TESTS_SPLIT_FIXTURES_HPP
#define GOG_TESTS_SPLIT_FIXTURES_HPP

#include "gog/splitting.hpp"
#include "helpers.hpp"

namespace gog::testutil {

inline SubgroupSpec sub_of(const BasePresentation& b,
                           const std::vector<std::string>& gens) {
  std::vector<GWord> ws;
  for (const auto& s : gens) ws.push_back(b.parse(s));
  return SubgroupSpec(&b, std::move(ws));
}

// F2 = <a> * <b> over the rank-2 free base.
inline MarkedSplitting split_a_star_b(const BasePresentation& b) {
  auto s = MarkedSplitting::build(b, SubgroupSpec::whole_group(b));
  int va = s.add_vertex(sub_of(b, {"a"}), "A");
  int vb = s.add_vertex(sub_of(b, {"b"}), "B");
  int e = s.add_edge_pair(va, vb, SubgroupSpec::trivial(b), b.identity(), "e");
  SPath ma{0, {b.parse("a")}, {}};
  SPath mb{0, {b.identity(), b.parse("b"), b.identity()}, {e, e + 1}};
  s.finalize(va, {ma, mb});
  return s;
}

// F2 = <ab> * <b>.
inline MarkedSplitting split_ab_star_b(const BasePresentation& b) {
  auto s = MarkedSplitting::build(b, SubgroupSpec::whole_group(b));
  int vab = s.add_vertex(sub_of(b, {"a.b"}), "AB");
  int vb = s.add_vertex(sub_of(b, {"b"}), "B");
  int e = s.add_edge_pair(vab, vb, SubgroupSpec::trivial(b), b.identity(), "e");
  SPath ma{0, {b.parse("a.b"), b.parse("b^-1"), b.identity()}, {e, e + 1}};
  SPath mb{0, {b.identity(), b.parse("b"), b.identity()}, {e, e + 1}};
  s.finalize(vab, {ma, mb});
  return s;
}

// F2 as the wedge splitting: single trivial vertex, loops with stable
// letters a and b.
inline MarkedSplitting split_wedge(const BasePresentation& b) {
  auto s = MarkedSplitting::build(b, SubgroupSpec::whole_group(b));
  int v = s.add_vertex(SubgroupSpec::trivial(b), "P");
  int ea = s.add_edge_pair(v, v, SubgroupSpec::trivial(b), b.parse("a"), "la");
  int eb = s.add_edge_pair(v, v, SubgroupSpec::trivial(b), b.parse("b"), "lb");
  SPath ma{0, {b.identity(), b.identity()}, {ea}};
  SPath mb{0, {b.identity(), b.identity()}, {eb}};
  s.finalize(v, {ma, mb});
  return s;
}

// F2 = <a> *_{<a^2>} <a^2, b>: a genuine splitting with infinite edge group.
inline MarkedSplitting split_a2(const BasePresentation& b) {
  auto s = MarkedSplitting::build(b, SubgroupSpec::whole_group(b));
  int va = s.add_vertex(sub_of(b, {"a"}), "A");
  int vw = s.add_vertex(sub_of(b, {"a.a", "b"}), "W");
  int e = s.add_edge_pair(va, vw, sub_of(b, {"a.a"}), b.identity(), "e");
  SPath ma{0, {b.parse("a")}, {}};
  SPath mb{0, {b.identity(), b.parse("b"), b.identity()}, {e, e + 1}};
  s.finalize(va, {ma, mb});
  return s;
}

// F3 = <a,b> *_{<a^2 b^2>} <a^2 b^2, c> over the rank-3 free base.
inline MarkedSplitting split_f3_amalgam(const BasePresentation& b) {
  auto s = MarkedSplitting::build(b, SubgroupSpec::whole_group(b));
  int vab = s.add_vertex(sub_of(b, {"a", "b"}), "AB");
  int vwc = s.add_vertex(sub_of(b, {"a.a.b.b", "c"}), "WC");
  int e = s.add_edge_pair(vab, vwc, sub_of(b, {"a.a.b.b"}), b.identity(), "e");
  SPath ma{0, {b.parse("a")}, {}};
  SPath mb{0, {b.parse("b")}, {}};
  SPath mc{0, {b.identity(), b.parse("c"), b.identity()}, {e, e + 1}};
  s.finalize(vab, {ma, mb, mc});
  return s;
}

// F3 = <a,b> * <c>: the free splitting used as T_f.
inline MarkedSplitting split_f3_free(const BasePresentation& b) {
  auto s = MarkedSplitting::build(b, SubgroupSpec::whole_group(b));
  int vab = s.add_vertex(sub_of(b, {"a", "b"}), "AB");
  int vc = s.add_vertex(sub_of(b, {"c"}), "C");
  int e = s.add_edge_pair(vab, vc, SubgroupSpec::trivial(b), b.identity(), "e");
  SPath ma{0, {b.parse("a")}, {}};
  SPath mb{0, {b.parse("b")}, {}};
  SPath mc{0, {b.identity(), b.parse("c"), b.identity()}, {e, e + 1}};
  s.finalize(vab, {ma, mb, mc});
  return s;
}

} // namespace gog::testutil

#endif
