#include <doctest.h>

#include "ctpair/group.hpp"

using namespace ctpair;

TEST_CASE("group catalog validity") {
  for (const FiniteGroup& g : {FiniteGroup::trivial(), FiniteGroup::cyclic(4),
                               FiniteGroup::klein_four(), FiniteGroup::symmetric3(),
                               FiniteGroup::dihedral(4)}) {
    std::string why;
    CHECK_MESSAGE(g.valid(&why), why);
    CHECK(g.mul(g.identity, g.identity) == g.identity);
  }
  CHECK(FiniteGroup::symmetric3().n == 6);
  CHECK(FiniteGroup::cyclic(4).order_of(1) == 4);
}

TEST_CASE("subgroup machinery") {
  FiniteGroup v4 = FiniteGroup::klein_four();
  auto subs = all_subgroups(v4);
  CHECK(subs.size() == 5); // 1, three Z/2's, V4
  FiniteGroup z4 = FiniteGroup::cyclic(4);
  CHECK(all_subgroups(z4).size() == 3);
  FiniteGroup s3 = FiniteGroup::symmetric3();
  CHECK(all_subgroups(s3).size() == 6);

  Subgroup h = Subgroup::generated(z4, {2});
  CHECK(h.size() == 2);
  CHECK(h.is_subgroup_of(Subgroup::full(z4)));
  CHECK(h.mul(1, 1) == 0);
  CHECK_THROWS_AS((void)h.local_of(1), error);
}

TEST_CASE("group product") {
  FiniteGroup p = FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3));
  CHECK(p.n == 6);
  std::string why;
  CHECK(p.valid(&why));
  CHECK(p.order_of(p.mul(3, 1)) > 1); // some nontrivial element
}
