// Shared test configurations over the DBL4 fixture.
#pragma once

#include "ctpair/ctp.hpp"
#include "ctpair/theta.hpp"

namespace ctpair::testcfg {

inline FixtureContext dbl4() { return FixtureContext::make(dbl4_fixture()); }

// M = (Z/2)^2 with trivial action: the symplectic module.
inline GModule mu2_squared(const FixtureContext& ctx) {
  return trivial_gmodule(ctx.fx->g, FiniteAbelianGroup({2, 2}));
}

// The transverse Lagrangian conditions W_a = <e1@v1, e2@v2>,
// W_b = <e2@v1, e1@v2> inside the local H^1 sum of mu2_squared.
struct Dbl4Sym {
  FixtureContext ctx;
  GModule m;
  std::shared_ptr<const LocalData> ld;
  SubgroupPresentation wa, wb;
};

inline Dbl4Sym dbl4_symplectic_conditions() {
  Dbl4Sym cfg{dbl4(), {}, {}, {}, {}};
  cfg.m = mu2_squared(cfg.ctx);
  cfg.ld = std::make_shared<const LocalData>(make_local_data(*cfg.ctx.fx, cfg.m));
  // each local H^1(G_v, (Z/2)^2) = Hom(Z/2, (Z/2)^2) = (Z/2)^2; the total is
  // (Z/2)^4 with coordinates (v1:e1, v1:e2, v2:e1, v2:e2)
  const FiniteAbelianGroup& total = cfg.ld->sum1.total;
  if (total.moduli != std::vector<long long>{2, 2, 2, 2})
    fail(errc::invalid_argument, "unexpected local H1 shape for the DBL4 symplectic module");
  cfg.wa = subgroup(total, {Elem{1, 0, 0, 0}, Elem{0, 0, 0, 1}});
  cfg.wb = subgroup(total, {Elem{0, 1, 0, 0}, Elem{0, 0, 1, 0}});
  return cfg;
}

// The canonical nontrivial test sequence: sum-of-conditions over the
// symplectic module with the transverse Lagrangian conditions.
inline SumConditionsResult dbl4_test_sequence() {
  Dbl4Sym cfg = dbl4_symplectic_conditions();
  return sum_conditions_sequence(cfg.ctx, cfg.m, cfg.wa, cfg.wb);
}

// The degenerate Kummer-type sequence 0 -> C[2] -> C -> C[2] -> 0 with the
// localized-global middle conditions; endpoint conditions are induced so the
// sequence is exact by construction.
inline SES dbl4_mu_sequence(const FixtureContext& ctx) {
  GModule c = ctx.fx->c;
  GModuleHom incl;
  GModule mu2 = torsion_submodule(c, 2, &incl);
  SModObject mid = make_object_global(ctx, c);
  SModObject probe = make_object_zero(ctx, mu2); // carries the mu2 local data
  GModuleHom proj = multiplication_by(2, c);
  // pi : C -> C[2], x -> 2x expressed through the torsion carrier
  Solver s(incl.ab());
  Mat pm(mu2.m.rank(), c.m.rank());
  for (int t = 0; t < c.m.rank(); ++t) {
    auto x = s.solve(proj.apply(c.m.generator(t)));
    if (!x) fail(errc::invalid_argument, "2C escapes C[2]");
    for (int i = 0; i < mu2.m.rank(); ++i) pm.at(i, t) = (*x)[i];
  }
  GModuleHom pi(c, mu2, pm);
  AbHom incl_loc = induced_local1(*ctx.fx, *probe.ld, *mid.ld, incl);
  AbHom pi_loc = induced_local1(*ctx.fx, *mid.ld, *probe.ld, pi);
  SModObject first = make_object(ctx, mu2, preimage(incl_loc, mid.w));
  SModObject last = make_object(ctx, mu2, image(pi_loc, mid.w));
  return SES{make_morphism(first, mid, incl), make_morphism(mid, last, pi)};
}

} // namespace ctpair::testcfg
