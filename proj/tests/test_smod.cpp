#include <doctest.h>

#include "fixtures_common.hpp"
#include "oracles.hpp"

using namespace ctpair;
using namespace ctpair::testcfg;

TEST_CASE("objects, morphisms, and the morphism condition") {
  FixtureContext ctx = dbl4();
  GModule m = mu2_squared(ctx);
  SModObject full = make_object_full(ctx, m);
  SModObject zero = make_object_zero(ctx, m);
  // identity is a morphism; zero -> full always; full -> zero only via 0
  CHECK(is_morphism(full, full, GModuleHom::identity(m)));
  CHECK(is_morphism(zero, full, GModuleHom::identity(m)));
  CHECK_FALSE(is_morphism(full, zero, GModuleHom::identity(m)));
  CHECK(is_morphism(full, zero, GModuleHom::zero(m, m)));
  CHECK_THROWS_AS((void)make_morphism(full, zero, GModuleHom::identity(m)), error);
}

TEST_CASE("strict mono and epi characterizations") {
  FixtureContext ctx = dbl4();
  GModule m = mu2_squared(ctx);
  SModObject full = make_object_full(ctx, m);
  SModMorphism id = make_morphism(full, full, GModuleHom::identity(m));
  CHECK(is_strict_mono(id));
  CHECK(is_strict_epi(id));

  // mu2 -> mu4 with middle conditions = full: iota^{-1}(full) = full != 0
  GModuleHom incl;
  GModule mu2 = torsion_submodule(ctx.fx->c, 2, &incl);
  SModObject src = make_object_zero(ctx, mu2);
  SModObject tgt = make_object_full(ctx, ctx.fx->c);
  SModMorphism f = make_morphism(src, tgt, incl);
  std::string why;
  CHECK_FALSE(is_strict_mono(f, &why));
  CHECK(why == "pulled-back conditions differ from W");
}

TEST_CASE("kernels and cokernels carry induced conditions") {
  SumConditionsResult sc = dbl4_test_sequence();
  const SES& e = sc.sequence;
  // kernel of pi is (M1, W1)
  ObjectWithMap k = kernel_object(e.pi);
  CHECK(k.object.m.m.isomorphic(e.first().m.m));
  // compare conditions through the canonical identification
  auto iso = find_sequence_isomorphism(
      SES{k.map, e.pi}, SES{e.iota, e.pi});
  // the kernel inclusion differs from iota only by the identification of K with M1
  CHECK(is_strict_mono(k.map));
  ObjectWithMap q = cokernel_object(e.iota);
  CHECK(q.object.m.m.isomorphic(e.last().m.m));
  CHECK(is_strict_epi(q.map));
  (void)iso;
}

TEST_CASE("exactness report on the canonical sequence") {
  SumConditionsResult sc = dbl4_test_sequence();
  Report rep = check_exact(sc.sequence);
  INFO(rep.to_text());
  CHECK(rep.all_required_pass());
  // split sequences are exact too
  Dbl4Sym cfg = dbl4_symplectic_conditions();
  SModObject a = make_object(cfg.ctx, cfg.m, cfg.wa);
  SModObject b = make_object(cfg.ctx, cfg.m, cfg.wb);
  CHECK(is_exact(split_sequence(a, b)));
}

TEST_CASE("dual objects") {
  Dbl4Sym cfg = dbl4_symplectic_conditions();
  SModObject full = make_object_full(cfg.ctx, cfg.m);
  SModObject zero = make_object_zero(cfg.ctx, cfg.m);
  // V2 holds, so full^perp = 0 and 0^perp = full
  CHECK(dual_object(full).w.carrier.rank() == 0);
  SModObject dz = dual_object(zero);
  CHECK(dz.w.carrier.order() == dz.ld->sum1.total.order());
  // double dual recovers W through beta's induced identification
  SModObject wa_obj = make_object(cfg.ctx, cfg.m, cfg.wa);
  SModObject dd = dual_object(dual_object(wa_obj));
  GModuleHom beta = double_dual_map(cfg.m, cfg.ctx.fx->c);
  AbHom beta_loc = induced_local1(*cfg.ctx.fx, *wa_obj.ld, *dd.ld, beta);
  CHECK(subgroup_eq(image(beta_loc, wa_obj.w), dd.w));
}

TEST_CASE("dual sequence shapes") {
  SumConditionsResult sc = dbl4_test_sequence();
  SES ed = dual_sequence(sc.sequence);
  INFO(check_exact(ed).to_text());
  CHECK(is_exact(ed));
  // dual of a split sequence is split (up to isomorphism of extensions)
  Dbl4Sym cfg = dbl4_symplectic_conditions();
  SModObject a = make_object(cfg.ctx, cfg.m, cfg.wa);
  SModObject b = make_object(cfg.ctx, cfg.m, cfg.wb);
  SES split = split_sequence(a, b);
  SES dsplit = dual_sequence(split);
  SES expected = split_sequence(dual_object(b), dual_object(a));
  CHECK(find_sequence_isomorphism(dsplit, expected).has_value());
}

TEST_CASE("pullback along identity and zero") {
  SumConditionsResult sc = dbl4_test_sequence();
  const SES& e = sc.sequence;
  SModMorphism id = make_morphism(e.last(), e.last(), GModuleHom::identity(e.last().m));
  PulledBack pb = pullback(e, id);
  CHECK(is_exact(pb.sequence));
  CHECK(find_sequence_isomorphism(pb.sequence, e).has_value());

  SModMorphism z = make_morphism(e.last(), e.last(), GModuleHom::zero(e.last().m, e.last().m));
  PulledBack pz = pullback(e, z);
  CHECK(is_exact(pz.sequence));
  SES split = split_sequence(e.first(), e.last());
  CHECK(find_sequence_isomorphism(pz.sequence, split).has_value());
}

TEST_CASE("pushout along identity is the identity") {
  SumConditionsResult sc = dbl4_test_sequence();
  const SES& e = sc.sequence;
  SModMorphism id = make_morphism(e.first(), e.first(), GModuleHom::identity(e.first().m));
  PushedOut po = pushout(e, id);
  CHECK(is_exact(po.sequence));
  CHECK(find_sequence_isomorphism(po.sequence, e).has_value());
}

TEST_CASE("pullbacks and pushouts preserve exactness and commute") {
  SumConditionsResult sc = dbl4_test_sequence();
  const SES& e = sc.sequence;
  Rng rng(99);
  auto homs2 = all_equivariant_homs(e.last().m, e.last().m);
  auto homs1 = all_equivariant_homs(e.first().m, e.first().m);
  int done = 0;
  for (int trial = 0; trial < 40 && done < 6; ++trial) {
    const GModuleHom& f = homs2[rng.pick(homs2.size())];
    const GModuleHom& g = homs1[rng.pick(homs1.size())];
    std::string why;
    if (!is_morphism(e.last(), e.last(), f, &why)) continue;
    if (!is_morphism(e.first(), e.first(), g, &why)) continue;
    SModMorphism fm = make_morphism(e.last(), e.last(), f);
    SModMorphism gm = make_morphism(e.first(), e.first(), g);
    PulledBack pb = pullback(e, fm);
    REQUIRE(is_exact(pb.sequence));
    PushedOut po = pushout(e, gm);
    REQUIRE(is_exact(po.sequence));
    // the cube: pushout of the pullback vs pullback of the pushout
    PushedOut route1 = pushout(pb.sequence, gm);
    PulledBack route2 = pullback(po.sequence, fm);
    REQUIRE(is_exact(route1.sequence));
    REQUIRE(is_exact(route2.sequence));
    CHECK(find_sequence_isomorphism(route1.sequence, route2.sequence).has_value());
    ++done;
  }
  CHECK(done >= 3);
}

TEST_CASE("Baer sum: adding the split extension changes nothing") {
  SumConditionsResult sc = dbl4_test_sequence();
  const SES& e = sc.sequence;
  SES split = split_sequence(e.first(), e.last());
  SES sum = baer_sum(e, split);
  CHECK(is_exact(sum));
  CHECK(find_sequence_isomorphism(sum, e).has_value());
  // E + E with W-structure of order 2: for this configuration the sum is
  // isomorphic to the split extension iff the class has order 2 in Ext
  SES ee = baer_sum(e, e);
  CHECK(is_exact(ee));
}

TEST_CASE("Baer sum is commutative and associative up to isomorphism") {
  SumConditionsResult sc = dbl4_test_sequence();
  const SES& e = sc.sequence;
  SES split = split_sequence(e.first(), e.last());
  std::vector<SES> pool{e, split, baer_sum(e, split)};
  CHECK(find_sequence_isomorphism(baer_sum(pool[0], pool[1]),
                                  baer_sum(pool[1], pool[0]))
            .has_value());
  SES lhs = baer_sum(baer_sum(pool[0], pool[1]), pool[2]);
  SES rhs = baer_sum(pool[0], baer_sum(pool[1], pool[2]));
  CHECK(find_sequence_isomorphism(lhs, rhs).has_value());
}

TEST_CASE("kernel and cokernel universal properties against a small battery") {
  SumConditionsResult sc = dbl4_test_sequence();
  const SES& e = sc.sequence;
  // iota is the kernel of pi: every T -> M with pi o u = 0 factors uniquely
  FixtureContext ctx = e.first().ctx;
  GModuleHom incl;
  GModule mu2 = torsion_submodule(ctx.fx->c, 2, &incl);
  std::vector<SModObject> battery{make_object_zero(ctx, mu2), make_object_full(ctx, mu2),
                                  make_object_global(ctx, mu2)};
  Solver iota_solver(e.iota.f.ab());
  for (const SModObject& t : battery) {
    for (const GModuleHom& u : all_equivariant_homs(t.m, e.middle().m)) {
      if (!is_morphism(t, e.middle(), u)) continue;
      bool kills = true;
      for (int i = 0; i < t.m.m.rank(); ++i)
        if (!e.last().m.m.is_zero(e.pi.f.apply(u.apply(t.m.m.generator(i))))) kills = false;
      if (!kills) continue;
      // unique w with iota o w = u
      Mat wm(e.first().m.m.rank(), t.m.m.rank());
      bool solvable = true;
      for (int i = 0; i < t.m.m.rank() && solvable; ++i) {
        auto x = iota_solver.solve(u.apply(t.m.m.generator(i)));
        if (!x) solvable = false;
        else
          for (int r = 0; r < e.first().m.m.rank(); ++r) wm.at(r, i) = (*x)[r];
      }
      REQUIRE(solvable);
      GModuleHom w(t.m, e.first().m, wm);
      CHECK(e.iota.f.compose(w) == u);
      CHECK(is_morphism(t, e.first(), w)); // the factorization is an SMod morphism
    }
  }
}

TEST_CASE("the mu sequence dualizes exactly and its double splits") {
  FixtureContext ctx = dbl4();
  SES mu = dbl4_mu_sequence(ctx);
  SES dual = dual_sequence(mu);
  INFO(check_exact(dual).to_text());
  CHECK(is_exact(dual));
  // the module extension class of Z/4 over Z/2 has order 2, so E + E is the
  // split extension of the same decorated objects
  SES twice = baer_sum(mu, mu);
  SES split = split_sequence(mu.first(), mu.last());
  CHECK(find_sequence_isomorphism(twice, split).has_value());
  // double dual of the sequence matches the original through beta
  SES dd = dual_sequence(dual);
  CHECK(dd.first().m.m.isomorphic(mu.first().m.m));
  CHECK(dd.middle().m.m.isomorphic(mu.middle().m.m));
}

TEST_CASE("duality is order-reversing on local conditions") {
  Dbl4Sym cfg = dbl4_symplectic_conditions();
  SModObject small = make_object(cfg.ctx, cfg.m, cfg.wa);
  SModObject big = make_object(cfg.ctx, cfg.m, join(cfg.wa, cfg.wb));
  REQUIRE(subgroup_leq(small.w, big.w));
  SModObject dsmall = dual_object(small);
  SModObject dbig = dual_object(big);
  CHECK(subgroup_leq(dbig.w, dsmall.w));
}
