#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gog/word.hpp"
#include "helpers.hpp"

using namespace gog;
using namespace gog::testutil;

TEST_CASE("empty word is identity") {
  auto b = free_base(2);
  CHECK(b->is_identity(b->identity()));
  CHECK(b->normal_form(b->identity()) == b->identity());
}

TEST_CASE("a a^-1 reduces to empty in F2") {
  auto b = free_base(2);
  GWord w = b->parse("a.a^-1");
  CHECK(b->is_identity(w));
  CHECK(b->normal_form(w).trivial_syllables());
}

TEST_CASE("a is not the identity, commutator is not the identity") {
  auto b = free_base(2);
  CHECK_FALSE(b->is_identity(b->parse("a")));
  GWord c = b->parse("a.b.a^-1.b^-1");
  CHECK_FALSE(b->is_identity(c));
  CHECK(b->normal_form(c).length() == 4);
}

TEST_CASE("pinch rewrites across an edge and shortens") {
  // Segment C2 -t- C2 with trivial edge group: t.t^-1 pinches away.
  FiniteGroup c2 = make_cyclic(2);
  FiniteGroup triv;
  auto b = segment_base(c2, c2, triv, {0}, {0});
  GWord w = b->parse("t.t^-1");
  CHECK(b->is_identity(w));

  // Infinite dihedral-ish base: C2 -e- C2 with edge group C2 embedded both
  // sides; a t-crossing around the edge-group element pinches across.
  auto d = segment_base(c2, c2, c2, {0, 1}, {0, 1});
  GWord p = d->parse("t.w:c1.t^-1");
  GWord nf = d->normal_form(p);
  CHECK(nf.length() == 0);
  CHECK(nf.head == 1); // rewritten across to the u-side element
  CHECK_FALSE(d->is_identity(p));
}

TEST_CASE("exhaustive rewriting agrees with normal_form on random words") {
  FiniteGroup c2 = make_cyclic(2);
  auto d = segment_base(c2, c2, c2, {0, 1}, {0, 1});
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    GWord w = random_element(*d, rng, trial % 9);
    GWord nf = d->normal_form(w);
    CHECK(d->normal_form(nf) == nf);
    CHECK(d->eq(w, nf));
  }
}

TEST_CASE("canonical form is a unique representative") {
  FiniteGroup c2 = make_cyclic(2);
  auto d = segment_base(c2, c2, make_cyclic(1), {0}, {0});
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    GWord w = random_element(*d, rng, trial % 8);
    GWord u = random_element(*d, rng, trial % 5);
    GWord cw = d->canonical_form(w);
    CHECK(d->eq(w, cw));
    CHECK(d->canonical_form(cw) == cw);
    GWord w2 = d->mul(d->mul(w, u), d->inv(u));
    CHECK(d->canonical_form(w2) == cw);
  }
}

TEST_CASE("w * w^-1 is the identity for many random words") {
  auto b = free_base(3);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    GWord w = random_element(*b, rng, trial % 12);
    CHECK(b->is_identity(b->mul(w, b->inv(w))));
  }
}

TEST_CASE("serialization round-trips bit-exactly") {
  auto b = free_base(2);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    GWord w = b->canonical_form(random_element(*b, rng, trial % 10));
    std::string s = b->to_string(w);
    GWord back = b->parse(s);
    CHECK(back == w);
    CHECK(b->to_string(back) == s);
  }
  FiniteGroup c2 = make_cyclic(2);
  auto d = segment_base(c2, c2, c2, {0, 1}, {0, 1});
  for (int trial = 0; trial < 100; ++trial) {
    GWord w = d->canonical_form(random_element(*d, rng, trial % 8));
    std::string s = d->to_string(w);
    CHECK(d->parse(s) == w);
  }
}

TEST_CASE("group generators are closed nontrivial words") {
  FiniteGroup c2 = make_cyclic(2);
  auto d = segment_base(c2, c2, make_cyclic(1), {0}, {0});
  CHECK(d->group_generators().size() == 2);
  auto b = free_base(2);
  CHECK(b->group_generators().size() == 2);
  for (const GWord& g : b->group_generators()) {
    CHECK(b->end_vertex(g) == b->base_vertex());
    CHECK_FALSE(b->is_identity(g));
  }
}
