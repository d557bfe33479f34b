#include <doctest.h>

#include <random>

#include "ctpair/cochain.hpp"
#include "oracles.hpp"

using namespace ctpair;

namespace {
FiniteGroup z2() { return FiniteGroup::cyclic(2); }
GModule c4neg() { return cyclic_coefficient(z2(), 4, {1, 3}); }

Cochain random_cochain(const Subgroup& h, const GModule& m, int degree, std::mt19937_64& eng) {
  Cochain c = Cochain::zero(h, m, degree);
  for (auto& e : c.table)
    for (int i = 0; i < m.m.rank(); ++i) e[i] = static_cast<long long>(eng() % m.m.moduli[i]);
  return c;
}
} // namespace

TEST_CASE("degree zero coboundary is sigma m - m") {
  GModule c = c4neg();
  Subgroup whole = Subgroup::full(c.g);
  Cochain f = Cochain::zero(whole, c, 0);
  f.table[0] = Elem{1};
  Cochain df = coboundary(f);
  CHECK(df.table[whole.identity_local()] == Elem{0});
  int sigma = 1 - whole.identity_local();
  CHECK(df.table[sigma] == Elem{2}); // -1 - 1 = -2 = 2 mod 4
}

TEST_CASE("d of d vanishes over S3 with Z/3 coefficients") {
  FiniteGroup s3 = FiniteGroup::symmetric3();
  GModule m = trivial_gmodule(s3, FiniteAbelianGroup({3}));
  Subgroup whole = Subgroup::full(s3);
  std::mt19937_64 eng(3);
  for (int t = 0; t < 10; ++t) {
    Cochain c = random_cochain(whole, m, 1, eng);
    CHECK(coboundary(coboundary(c)).is_zero());
  }
}

TEST_CASE("coboundary hom matches pointwise coboundary") {
  GModule c = c4neg();
  Subgroup whole = Subgroup::full(c.g);
  std::mt19937_64 eng(5);
  for (int degree = 0; degree <= 2; ++degree) {
    AbHom d = coboundary_hom(whole, c, degree);
    for (int t = 0; t < 5; ++t) {
      Cochain f = random_cochain(whole, c, degree, eng);
      CHECK(d.apply(flatten(f)) == flatten(coboundary(f)));
    }
  }
}

TEST_CASE("cup products") {
  FiniteGroup g = z2();
  GModule m2 = trivial_gmodule(g, FiniteAbelianGroup({2}));
  Subgroup whole = Subgroup::full(g);
  // multiplication pairing Z/2 x Z/2 -> Z/2
  GBilinear mult{m2, m2, m2, {{Elem{1}}}};
  REQUIRE(mult.well_defined());
  REQUIRE(mult.equivariant());

  Cochain f = Cochain::zero(whole, m2, 1), h = Cochain::zero(whole, m2, 1);
  int sigma = 1 - whole.identity_local();
  f.table[sigma] = Elem{1};
  h.table[sigma] = Elem{1};
  Cochain fh = cup(f, h, mult);
  // value at (s, s) = f(s) * s.h(s) = 1; all other pairs vanish
  for (unsigned long long i = 0; i < fh.tuples(); ++i) {
    auto t = fh.tuple_at(i);
    CHECK(fh.table[i] == ((t[0] == sigma && t[1] == sigma) ? Elem{1} : Elem{0}));
  }
  CHECK(cup(f, Cochain::zero(whole, m2, 1), mult).is_zero());

  // Leibniz rule d(a cup b) = da cup b + (-1)^i a cup db
  std::mt19937_64 eng(9);
  for (int trial = 0; trial < 20; ++trial) {
    int i = static_cast<int>(eng() % 2), j = static_cast<int>(eng() % 2);
    Cochain a = random_cochain(whole, m2, i, eng);
    Cochain b = random_cochain(whole, m2, j, eng);
    Cochain lhs = coboundary(cup(a, b, mult));
    Cochain rhs = cup(coboundary(a), b, mult);
    Cochain second = cup(a, coboundary(b), mult);
    rhs = (i % 2 == 0) ? rhs.add(second) : rhs.sub(second);
    CHECK(lhs.table == rhs.table);
  }
}

TEST_CASE("restriction commutes with d and cup") {
  GModule c = c4neg();
  Subgroup whole = Subgroup::full(c.g);
  Subgroup triv = Subgroup::trivial(c.g);
  std::mt19937_64 eng(13);
  Cochain a = random_cochain(whole, c, 1, eng);
  CHECK(restrict_to(a, whole).table == a.table);
  Cochain r = restrict_to(a, triv);
  CHECK(r.tuples() == 1);
  CHECK(restrict_to(coboundary(a), triv).table == coboundary(restrict_to(a, triv)).table);
}

TEST_CASE("H^0 is the fixed-point module") {
  GModule c = c4neg();
  Subgroup whole = Subgroup::full(c.g);
  CohomologyGroup h0 = cohomology(whole, c, 0);
  // fixed points of negation on Z/4 are {0, 2}
  CHECK(h0.carrier.moduli == std::vector<long long>{2});
  Elem fixed = h0.reps[0].table[0];
  CHECK(c.act(1, fixed) == fixed);
}

TEST_CASE("H^1(Z/2, Z/2) = Z/2 against the brute oracle") {
  FiniteGroup g = z2();
  GModule m = trivial_gmodule(g, FiniteAbelianGroup({2}));
  Subgroup whole = Subgroup::full(g);
  CohomologyGroup h1 = cohomology(whole, m, 1);
  CHECK(h1.carrier.moduli == std::vector<long long>{2});
  auto brute = oracle::brute_cohomology(whole, m, 1);
  CHECK(brute.order() == 2);
}

TEST_CASE("H^2(Z/2, Z/4 with negation) = Z/2, cross-checked") {
  GModule c = c4neg();
  Subgroup whole = Subgroup::full(c.g);
  CohomologyGroup h2 = cohomology(whole, c, 2);
  CHECK(h2.carrier.moduli == std::vector<long long>{2});
  auto brute = oracle::brute_cohomology(whole, c, 2);
  CHECK(brute.order() == 2);
  CHECK(brute.class_orders() == std::vector<long long>{1, 2});
  // the nonzero class is detected by z(sigma, sigma) in {1, 3}... after
  // normalization the distinguished representative has z(s,s) = 2 mod the
  // coboundary pattern; verify via reduce on the explicit cocycle
  Cochain z = Cochain::zero(whole, c, 2);
  int s = 1 - whole.identity_local();
  z.at({s, s}) = Elem{2};
  CHECK(coboundary(z).is_zero());
  Elem cls = h2.reduce(z);
  CHECK(cls == Elem{1}); // generates
  // reduce kills coboundaries and is stable under shifting by them
  std::mt19937_64 eng(17);
  Cochain eps = random_cochain(whole, c, 1, eng);
  CHECK(h2.reduce(z.add(coboundary(eps))) == cls);
  CHECK(h2.reduce(coboundary(eps)) == Elem{0});
  // representatives reduce to the corresponding generators
  for (int t = 0; t < h2.carrier.rank(); ++t) {
    Elem e = h2.carrier.zero();
    e[t] = 1;
    CHECK(h2.reduce(h2.reps[t]) == e);
  }
}

TEST_CASE("cohomology matches brute force on a catalog") {
  std::vector<FiniteGroup> groups = {FiniteGroup::cyclic(2), FiniteGroup::cyclic(3),
                                     FiniteGroup::klein_four()};
  for (const FiniteGroup& g : groups) {
    std::vector<GModule> mods;
    mods.push_back(trivial_gmodule(g, FiniteAbelianGroup({2})));
    mods.push_back(trivial_gmodule(g, FiniteAbelianGroup({4})));
    if (g.n == 2) mods.push_back(cyclic_coefficient(g, 4, {1, 3}));
    for (const GModule& m : mods) {
      Subgroup whole = Subgroup::full(g);
      for (int degree = 0; degree <= 2; ++degree) {
        CohomologyGroup h = cohomology(whole, m, degree);
        auto brute = oracle::brute_cohomology(whole, m, degree);
        CHECK(h.carrier.order() == Int(brute.order()));
        // class orders pin the group structure
        std::vector<long long> snf_orders;
        for (const Elem& x : oracle::all_elements(h.carrier))
          snf_orders.push_back(h.carrier.order_of(x));
        std::sort(snf_orders.begin(), snf_orders.end());
        CHECK(snf_orders == brute.class_orders());
      }
    }
  }
}

TEST_CASE("solve coboundary") {
  GModule c = c4neg();
  Subgroup whole = Subgroup::full(c.g);
  std::mt19937_64 eng(23);
  for (int t = 0; t < 5; ++t) {
    Cochain a = random_cochain(whole, c, 1, eng);
    Cochain z = coboundary(a);
    auto eps = solve_coboundary(z);
    REQUIRE(eps.has_value());
    CHECK(coboundary(*eps).table == z.table);
  }
  // a nontrivial H^2 representative is not a coboundary
  CohomologyGroup h2 = cohomology(whole, c, 2);
  REQUIRE(h2.carrier.rank() == 1);
  CHECK_FALSE(solve_coboundary(h2.reps[0]).has_value());
  // zero solves trivially
  auto z0 = solve_coboundary(Cochain::zero(whole, c, 2));
  REQUIRE(z0.has_value());
  CHECK(coboundary(*z0).is_zero());
}

TEST_CASE("set sections and lifts") {
  FiniteGroup g = z2();
  GModule z4t = trivial_gmodule(g, FiniteAbelianGroup({4}));
  GModule z2t = trivial_gmodule(g, FiniteAbelianGroup({2}));
  GModuleHom pi(z4t, z2t, Mat::identity(1)); // reduction mod 2
  SetSection s = make_section(pi);
  CHECK(s.lift({0}) == Elem{0});
  CHECK(s.lift({1}) == Elem{1}); // least preimage
  Subgroup whole = Subgroup::full(g);
  std::mt19937_64 eng(29);
  Cochain a = random_cochain(whole, z2t, 1, eng);
  Cochain lifted = lift_through(s, a);
  CHECK(apply_pointwise(pi, lifted).table == a.table);
  // a non-surjective map has no section
  CHECK_THROWS_AS((void)make_section(GModuleHom(z2t, z4t, Mat(1, 1))), error);
  GModuleHom incl(z2t, z4t, [] { Mat m(1, 1); m.at(0, 0) = 2; return m; }());
  CHECK_THROWS_AS((void)make_section(incl), error);
}

TEST_CASE("a nontrivial degree-3 class has no coboundary solution") {
  // with trivial action on Z/2 the cohomology of Z/2 is periodic and
  // H^3 is nonzero, so the degree-3 solve must surface the obstruction
  FiniteGroup g = z2();
  GModule m = trivial_gmodule(g, FiniteAbelianGroup({2}));
  Subgroup whole = Subgroup::full(g);
  CohomologyGroup h3 = cohomology(whole, m, 3);
  REQUIRE(h3.carrier.order() == 2);
  CHECK_FALSE(solve_coboundary(h3.reps[0]).has_value());
  // while actual coboundaries solve fine in degree 3
  std::mt19937_64 eng(41);
  Cochain c2 = random_cochain(whole, m, 2, eng);
  auto eps = solve_coboundary(coboundary(c2));
  REQUIRE(eps.has_value());
  CHECK(coboundary(*eps).table == coboundary(c2).table);
}
