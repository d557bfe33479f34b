#include <doctest.h>

#include <random>

#include "ctpair/gmodule.hpp"
#include "oracles.hpp"

using namespace ctpair;

namespace {
// The DBL4 building blocks: G = Z/2, C = Z/4 with negation.
FiniteGroup z2() { return FiniteGroup::cyclic(2); }
GModule c4neg() { return cyclic_coefficient(z2(), 4, {1, 3}); }
GModule mu2() { return torsion_submodule(c4neg(), 2); }
} // namespace

TEST_CASE("coefficient module and torsion submodule") {
  GModule c = c4neg();
  std::string why;
  CHECK(c.valid(&why));
  GModule m = mu2();
  CHECK(m.m.moduli == std::vector<long long>{2});
  CHECK(m.valid(&why));
  // negation fixes the 2-torsion: induced action is trivial
  CHECK(m.action[1] == Mat::identity(1));
}

TEST_CASE("dual module basics") {
  GModule c = c4neg();
  GModule m = mu2();
  GModule d = dual_module(m, c);
  CHECK(d.m.order() == m.m.order());
  std::string why;
  CHECK(d.valid(&why));
  CHECK(d.action[1] == Mat::identity(1)); // trivial action on Hom(Z/2, C)

  GModule dc = dual_module(c, c);
  CHECK(dc.m.order() == 4);
  CHECK(dc.valid(&why));
  // (sigma f)(x) = sigma f(sigma^{-1} x) = -f(-x) = f(x): trivial action
  CHECK(dc.action[1] == Mat::identity(1));

  GModule triv{z2(), trivial_group(), {Mat::identity(0), Mat::identity(0)}};
  CHECK(dual_module(triv, c).m.rank() == 0);

  CHECK_THROWS_AS((void)dual_module(trivial_gmodule(z2(), FiniteAbelianGroup({8})), c), error);
}

TEST_CASE("evaluation pairing and nondegeneracy") {
  GModule c = c4neg();
  GModule m = trivial_gmodule(z2(), FiniteAbelianGroup({2, 2}));
  GBilinear ev = evaluation_pairing(m, c);
  CHECK(ev.well_defined());
  CHECK(ev.equivariant());
  CHECK(ev.eval(m.m.zero(), ev.right.m.generator(0)) == Elem{0});
  CHECK(ev.eval(m.m.generator(0), ev.right.m.zero()) == Elem{0});
  // nondegenerate: both annihilators trivial
  BilinearForm f = as_form(ev);
  CHECK(annihilator(f, full_subgroup(f.a)).carrier.rank() == 0);
  CHECK(annihilator_left(f, full_subgroup(f.b)).carrier.rank() == 0);
  // <m, f> = f(m) on explicit values
  for (const Elem& x : oracle::all_elements(m.m))
    for (const Elem& phi : oracle::all_elements(ev.right.m))
      CHECK(ev.eval(x, phi)[0] == eval_dual(m, c, x, phi));
}

TEST_CASE("double dual is the identity functorially") {
  GModule c = c4neg();
  for (const GModule& m : {mu2(), c4neg(), trivial_gmodule(z2(), FiniteAbelianGroup({2, 2}))}) {
    GModuleHom beta = double_dual_map(m, c);
    CHECK(check_equivariance(beta));
    CHECK(beta.ab().is_injective());
    CHECK(beta.ab().is_surjective());
    // beta(m)(f) = f(m)
    GModule d = dual_module(m, c);
    for (const Elem& x : oracle::all_elements(m.m))
      for (const Elem& phi : oracle::all_elements(d.m))
        CHECK(eval_dual(d, c, phi, beta.apply(x)) == eval_dual(m, c, x, phi));
  }
}

TEST_CASE("duality is contravariantly functorial") {
  GModule c = c4neg();
  GModule a = mu2(), b = c4neg();
  for (const GModuleHom& f : all_equivariant_homs(a, b)) {
    GModuleHom fd = dual_hom(f, c);
    CHECK(check_equivariance(fd));
    // <f(x), phi> = <x, fd(phi)>
    GModule bd = dual_module(b, c);
    for (const Elem& x : oracle::all_elements(a.m))
      for (const Elem& phi : oracle::all_elements(bd.m))
        CHECK(eval_dual(b, c, f.apply(x), phi) == eval_dual(a, c, x, fd.apply(phi)));
    // beta o f = (f^dual)^dual o beta
    GModuleHom lhs = double_dual_map(b, c).compose(f);
    GModuleHom rhs = dual_hom(fd, c).compose(double_dual_map(a, c));
    CHECK(lhs == rhs);
  }
  // (f o g)^dual = g^dual o f^dual on a composable pair
  auto homs_ab = all_equivariant_homs(a, b);
  auto homs_ba = all_equivariant_homs(b, a);
  for (const auto& f : homs_ab)
    for (const auto& g : homs_ba) {
      GModuleHom fg = f.compose(g);
      CHECK(dual_hom(fg, c) == dual_hom(g, c).compose(dual_hom(f, c)));
    }
}

TEST_CASE("equivariance checker") {
  GModule c = c4neg();
  CHECK(check_equivariance(GModuleHom::identity(c)));
  GModule z4t = trivial_gmodule(z2(), FiniteAbelianGroup({4}));
  CHECK(check_equivariance(multiplication_by(-1, z4t)));
  // x -> x from C (negation) into trivial-action Z/4 is not equivariant
  GModuleHom bad(c, z4t, Mat::identity(1));
  int witness = -1;
  CHECK_FALSE(check_equivariance(bad, &witness));
  CHECK(witness == 1);
}

TEST_CASE("direct sums and quotients of modules") {
  GModule c = c4neg();
  ModuleSum s = direct_sum_modules(mu2(), c);
  std::string why;
  CHECK(s.total.valid(&why));
  CHECK(check_equivariance(s.inj1));
  CHECK(check_equivariance(s.proj2));
  CHECK(s.proj1.compose(s.inj1) == GModuleHom::identity(mu2()));

  GModuleHom proj;
  GModule q = quotient_module(c, subgroup(c.m, {Elem{2}}), &proj);
  CHECK(q.m.order() == 2);
  CHECK(check_equivariance(proj));
}
