#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include "gog/finite_group.hpp"

using namespace gog;

TEST_CASE("trivial group passes axioms") {
  CHECK(check_group_axioms({{0}}).ok);
}

TEST_CASE("C2 table passes") {
  CHECK(check_group_axioms({{0, 1}, {1, 0}}).ok);
}

TEST_CASE("bad table: 1 has no inverse") {
  auto r = check_group_axioms({{0, 1}, {1, 1}});
  CHECK_FALSE(r.ok);
}

TEST_CASE("cyclic groups") {
  FiniteGroup c1 = make_cyclic(1);
  CHECK(c1.order() == 1);
  FiniteGroup c2 = make_cyclic(2);
  CHECK(c2.mul(1, 1) == 0);
  FiniteGroup c6 = make_cyclic(6);
  CHECK(c6.order() == 6);
  CHECK(c6.element_order(2) == 3);
  CHECK_THROWS_AS(make_cyclic(0), invalid_input);
}

TEST_CASE("subgroup index") {
  FiniteGroup c1 = make_cyclic(1);
  FiniteGroup c2 = make_cyclic(2);
  Morphism triv_to_c2(c1, c2, {0});
  CHECK(subgroup_index(triv_to_c2) == 2);
  CHECK(subgroup_index(Morphism::identity(c2)) == 1);
  // C2 -> S3: any order-2 embedding has index 3.
  // S3 as permutation table, elements: e,(12),(13),(23),(123),(132)
  std::vector<std::vector<int>> s3 = {
      {0, 1, 2, 3, 4, 5}, {1, 0, 4, 5, 2, 3}, {2, 5, 0, 4, 3, 1},
      {3, 4, 5, 0, 1, 2}, {4, 3, 1, 2, 5, 0}, {5, 2, 3, 1, 0, 4}};
  CHECK(check_group_axioms(s3).ok);
  FiniteGroup S3(s3);
  Morphism emb(c2, S3, {0, 1});
  CHECK(subgroup_index(emb) == 3);
  // Non-injective morphism rejected by subgroup_index.
  Morphism collapse(c2, c1, {0, 0});
  CHECK_THROWS_AS(subgroup_index(collapse), invalid_input);
}

TEST_CASE("generated groups satisfy axioms") {
  for (int n = 1; n <= 8; ++n) {
    CHECK(check_group_axioms(make_cyclic(n).table()).ok);
  }
}
