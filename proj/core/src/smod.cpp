#include "ctpair/smod.hpp"

namespace ctpair {

SModObject make_object(const FixtureContext& ctx, GModule m, SubgroupPresentation w) {
  SModObject o;
  o.ctx = ctx;
  o.ld = std::make_shared<const LocalData>(make_local_data(*ctx.fx, m));
  o.m = std::move(m);
  if (!(w.ambient == o.ld->sum1.total))
    fail(errc::mismatched_ambient, "local conditions live in the wrong direct sum");
  o.w = std::move(w);
  return o;
}

SModObject make_object_full(const FixtureContext& ctx, GModule m) {
  SModObject o;
  o.ctx = ctx;
  o.ld = std::make_shared<const LocalData>(make_local_data(*ctx.fx, m));
  o.m = std::move(m);
  o.w = full_subgroup(o.ld->sum1.total);
  return o;
}

SModObject make_object_zero(const FixtureContext& ctx, GModule m) {
  SModObject o;
  o.ctx = ctx;
  o.ld = std::make_shared<const LocalData>(make_local_data(*ctx.fx, m));
  o.m = std::move(m);
  o.w = trivial_subgroup(o.ld->sum1.total);
  return o;
}

SModObject make_object_unramified(const FixtureContext& ctx, GModule m) {
  SModObject o;
  o.ctx = ctx;
  o.ld = std::make_shared<const LocalData>(make_local_data(*ctx.fx, m));
  o.m = std::move(m);
  o.w = unramified_sum(*ctx.fx, *o.ld);
  return o;
}

SModObject make_object_global(const FixtureContext& ctx, GModule m) {
  SModObject o;
  o.ctx = ctx;
  o.ld = std::make_shared<const LocalData>(make_local_data(*ctx.fx, m));
  o.m = std::move(m);
  o.w = image(o.ld->localize1);
  return o;
}

bool object_eq(const SModObject& a, const SModObject& b) {
  return a.m == b.m && subgroup_eq(a.w, b.w);
}

AbHom induced_local1(const ArithmeticFixture& fx, const LocalData& src, const LocalData& tgt,
                     const GModuleHom& f) {
  Mat mat(tgt.sum1.total.rank(), src.sum1.total.rank());
  for (size_t p = 0; p < fx.places.size(); ++p) {
    const CohomologyGroup& hs = src.h1v[p];
    const CohomologyGroup& ht = tgt.h1v[p];
    for (int t = 0; t < hs.carrier.rank(); ++t) {
      Elem img = ht.reduce(apply_pointwise(f, hs.reps[t]));
      Elem col = tgt.sum1.inject[p].apply(img);
      int srccol = src.sum1.offsets[p] + t;
      for (int i = 0; i < tgt.sum1.total.rank(); ++i) mat.at(i, srccol) = col[i];
    }
  }
  return AbHom(src.sum1.total, tgt.sum1.total, std::move(mat));
}

SModMorphism make_map_unchecked(const SModObject& src, const SModObject& tgt,
                                const GModuleHom& f) {
  if (!(f.source.m == src.m.m) || !(f.target.m == tgt.m.m))
    fail(errc::group_mismatch, "morphism endpoints mismatch");
  SModMorphism mor{src, tgt, f, induced_local1(*src.ctx.fx, *src.ld, *tgt.ld, f)};
  return mor;
}

bool is_morphism(const SModObject& src, const SModObject& tgt, const GModuleHom& f,
                 std::string* why) {
  int witness = -1;
  if (!check_equivariance(f, &witness)) {
    if (why) *why = "not equivariant at group element " + std::to_string(witness);
    return false;
  }
  AbHom loc = induced_local1(*src.ctx.fx, *src.ld, *tgt.ld, f);
  if (!subgroup_leq(image(loc, src.w), tgt.w)) {
    if (why) *why = "local conditions not preserved";
    return false;
  }
  return true;
}

SModMorphism make_morphism(const SModObject& src, const SModObject& tgt, const GModuleHom& f) {
  std::string why;
  if (!is_morphism(src, tgt, f, &why)) fail(errc::invalid_argument, "not an SMod morphism: " + why);
  return make_map_unchecked(src, tgt, f);
}

Report check_exact(const SES& e) {
  Report rep;
  rep.title = "exactness";
  const SModMorphism& i = e.iota;
  const SModMorphism& p = e.pi;
  bool mid = object_eq(i.target, p.source);
  rep.add("middle objects agree", mid ? Verdict::pass : Verdict::fail);
  if (!mid) return rep;
  bool inj = i.f.ab().is_injective();
  rep.add("iota injective", inj ? Verdict::pass : Verdict::fail);
  bool surj = p.f.ab().is_surjective();
  rep.add("pi surjective", surj ? Verdict::pass : Verdict::fail);
  bool exact_mid = subgroup_eq(image(i.f.ab()), kernel(p.f.ab()));
  rep.add("im iota = ker pi", exact_mid ? Verdict::pass : Verdict::fail);
  bool w1 = subgroup_eq(preimage(i.local1, i.target.w), i.source.w);
  rep.add("iota^{-1}(W) = W1", w1 ? Verdict::pass : Verdict::fail);
  bool w2 = subgroup_eq(image(p.local1, p.source.w), p.target.w);
  rep.add("pi(W) = W2", w2 ? Verdict::pass : Verdict::fail);
  return rep;
}

bool is_exact(const SES& e) { return check_exact(e).all_required_pass(); }

SModObject dual_object(const SModObject& o) {
  GModule md = dual_module(o.m, o.ctx.fx->c);
  SModObject d;
  d.ctx = o.ctx;
  d.ld = std::make_shared<const LocalData>(make_local_data(*o.ctx.fx, md));
  d.m = std::move(md);
  BilinearForm tp = total_pairing(o.ctx, *o.ld, *d.ld);
  d.w = annihilator(tp, o.w);
  return d;
}

SES dual_sequence(const SES& e) {
  SModObject d2 = dual_object(e.last());
  SModObject dm = dual_object(e.middle());
  SModObject d1 = dual_object(e.first());
  const GModule& c = e.first().ctx.fx->c;
  GModuleHom pid = dual_hom(e.pi.f, c);   // M2^dual -> M^dual
  GModuleHom iotad = dual_hom(e.iota.f, c); // M^dual -> M1^dual
  return SES{make_morphism(d2, dm, pid), make_morphism(dm, d1, iotad)};
}

ObjectWithMap kernel_object(const SModMorphism& f) {
  SubgroupPresentation ker = kernel(f.f.ab());
  GModuleHom incl;
  GModule kmod = submodule(f.source.m, ker, &incl);
  SModObject kobj;
  kobj.ctx = f.source.ctx;
  kobj.ld = std::make_shared<const LocalData>(make_local_data(*f.source.ctx.fx, kmod));
  kobj.m = kmod;
  AbHom incl_local = induced_local1(*f.source.ctx.fx, *kobj.ld, *f.source.ld, incl);
  kobj.w = preimage(incl_local, f.source.w);
  return ObjectWithMap{kobj, make_morphism(kobj, f.source, incl)};
}

ObjectWithMap cokernel_object(const SModMorphism& f) {
  SubgroupPresentation im = image(f.f.ab());
  GModuleHom proj;
  GModule qmod = quotient_module(f.target.m, im, &proj);
  SModObject qobj;
  qobj.ctx = f.target.ctx;
  qobj.ld = std::make_shared<const LocalData>(make_local_data(*f.target.ctx.fx, qmod));
  qobj.m = qmod;
  AbHom proj_local = induced_local1(*f.target.ctx.fx, *f.target.ld, *qobj.ld, proj);
  qobj.w = image(proj_local, f.target.w);
  return ObjectWithMap{qobj, make_morphism(f.target, qobj, proj)};
}

bool is_strict_mono(const SModMorphism& f, std::string* why) {
  if (!f.f.ab().is_injective()) {
    if (why) *why = "not injective";
    return false;
  }
  if (!subgroup_eq(preimage(f.local1, f.target.w), f.source.w)) {
    if (why) *why = "pulled-back conditions differ from W";
    return false;
  }
  return true;
}

bool is_strict_epi(const SModMorphism& f, std::string* why) {
  if (!f.f.ab().is_surjective()) {
    if (why) *why = "not surjective";
    return false;
  }
  if (!subgroup_eq(image(f.local1, f.source.w), f.target.w)) {
    if (why) *why = "pushed-forward conditions differ from W'";
    return false;
  }
  return true;
}

ObjectSum direct_sum_objects(const SModObject& a, const SModObject& b) {
  ModuleSum ms = direct_sum_modules(a.m, b.m);
  SModObject t;
  t.ctx = a.ctx;
  t.ld = std::make_shared<const LocalData>(make_local_data(*a.ctx.fx, ms.total));
  t.m = ms.total;
  AbHom i1 = induced_local1(*a.ctx.fx, *a.ld, *t.ld, ms.inj1);
  AbHom i2 = induced_local1(*a.ctx.fx, *b.ld, *t.ld, ms.inj2);
  std::vector<Elem> gens;
  for (const Elem& g : a.w.generators()) gens.push_back(i1.apply(g));
  for (const Elem& g : b.w.generators()) gens.push_back(i2.apply(g));
  t.w = subgroup(t.ld->sum1.total, gens);
  ObjectSum out{t,
                make_morphism(a, t, ms.inj1),
                make_morphism(b, t, ms.inj2),
                make_morphism(t, a, ms.proj1),
                make_morphism(t, b, ms.proj2)};
  return out;
}

SES split_sequence(const SModObject& a, const SModObject& b) {
  ObjectSum s = direct_sum_objects(a, b);
  return SES{s.inj1, s.proj2};
}

PulledBack pullback(const SES& e, const SModMorphism& f) {
  if (!object_eq(f.target, e.last())) fail(errc::incompatible_ends, "pullback target mismatch");
  const SModObject& n2 = f.source;
  ObjectSum d = direct_sum_objects(n2, e.middle());
  // N = ker(f o proj1 - pi o proj2) inside N2 + M
  GModuleHom h = f.f.compose(d.proj1.f).plus(e.pi.f.compose(d.proj2.f).negated());
  SubgroupPresentation ker = kernel(h.ab());
  GModuleHom incl;
  GModule nmod = submodule(d.total.m, ker, &incl);
  SModObject nobj;
  nobj.ctx = e.first().ctx;
  nobj.ld = std::make_shared<const LocalData>(make_local_data(*nobj.ctx.fx, nmod));
  nobj.m = nmod;
  AbHom incl_local = induced_local1(*nobj.ctx.fx, *nobj.ld, *d.total.ld, incl);
  nobj.w = preimage(incl_local, d.total.w);
  // iota_N : M1 -> N with image (0, iota(m1))
  GModuleHom into_d = d.inj2.f.compose(e.iota.f);
  Solver incl_solver(incl.ab());
  Mat im(nmod.m.rank(), e.first().m.m.rank());
  for (int t = 0; t < e.first().m.m.rank(); ++t) {
    auto x = incl_solver.solve(into_d.apply(e.first().m.m.generator(t)));
    if (!x) fail(errc::invalid_argument, "pullback inclusion failed");
    for (int i = 0; i < nmod.m.rank(); ++i) im.at(i, t) = (*x)[i];
  }
  GModuleHom iota_n(e.first().m, nmod, std::move(im));
  GModuleHom pi_n = d.proj1.f.compose(incl);
  PulledBack out{SES{make_morphism(e.first(), nobj, iota_n), make_morphism(nobj, n2, pi_n)},
                 make_morphism(nobj, e.middle(), d.proj2.f.compose(incl))};
  return out;
}

PushedOut pushout(const SES& e, const SModMorphism& g) {
  if (!object_eq(g.source, e.first())) fail(errc::incompatible_ends, "pushout source mismatch");
  const SModObject& n1 = g.target;
  ObjectSum d = direct_sum_objects(n1, e.middle());
  // P = (N1 + M) / antidiagonal image of M1
  GModuleHom anti = d.inj1.f.compose(g.f).plus(d.inj2.f.compose(e.iota.f).negated());
  SubgroupPresentation antiim = image(anti.ab());
  GModuleHom proj;
  GModule pmod = quotient_module(d.total.m, antiim, &proj);
  SModObject pobj;
  pobj.ctx = e.first().ctx;
  pobj.ld = std::make_shared<const LocalData>(make_local_data(*pobj.ctx.fx, pmod));
  pobj.m = pmod;
  AbHom proj_local = induced_local1(*pobj.ctx.fx, *d.total.ld, *pobj.ld, proj);
  pobj.w = image(proj_local, d.total.w);
  GModuleHom into_p = proj.compose(d.inj1.f); // N1 -> P
  // P -> M2 : lift through proj, then pi o proj2
  Solver proj_solver(proj.ab());
  Mat pm(e.last().m.m.rank(), pmod.m.rank());
  GModuleHom down = e.pi.f.compose(d.proj2.f); // N1+M -> M2
  for (int t = 0; t < pmod.m.rank(); ++t) {
    auto x = proj_solver.solve(pmod.m.generator(t));
    if (!x) fail(errc::invalid_argument, "pushout projection not surjective");
    Elem v = down.apply(*x);
    for (int i = 0; i < e.last().m.m.rank(); ++i) pm.at(i, t) = v[i];
  }
  GModuleHom out_p(pmod, e.last().m, std::move(pm));
  PushedOut out{SES{make_morphism(n1, pobj, into_p), make_morphism(pobj, e.last(), out_p)},
                make_morphism(e.middle(), pobj, proj.compose(d.inj2.f))};
  return out;
}

SES baer_sum(const SES& ea, const SES& eb) {
  if (!object_eq(ea.first(), eb.first()) || !object_eq(ea.last(), eb.last()))
    fail(errc::incompatible_ends, "Baer sum needs extensions of the same objects");
  ObjectSum mid = direct_sum_objects(ea.middle(), eb.middle());
  ObjectSum ones = direct_sum_objects(ea.first(), eb.first());
  ObjectSum twos = direct_sum_objects(ea.last(), eb.last());
  GModuleHom iota_sum =
      mid.inj1.f.compose(ea.iota.f).compose(ones.proj1.f)
          .plus(mid.inj2.f.compose(eb.iota.f).compose(ones.proj2.f));
  GModuleHom pi_sum =
      twos.inj1.f.compose(ea.pi.f).compose(mid.proj1.f)
          .plus(twos.inj2.f.compose(eb.pi.f).compose(mid.proj2.f));
  SES esum{make_morphism(ones.total, mid.total, iota_sum),
           make_morphism(mid.total, twos.total, pi_sum)};
  // pull back along the diagonal M2 -> M2 + M2
  GModuleHom diag = twos.inj1.f.plus(twos.inj2.f);
  SModMorphism diag_m = make_morphism(ea.last(), twos.total, diag);
  PulledBack pb = pullback(esum, diag_m);
  // push out along the codiagonal M1 + M1 -> M1
  GModuleHom codiag = ones.proj1.f.plus(ones.proj2.f);
  SModMorphism codiag_m = make_morphism(ones.total, ea.first(), codiag);
  PushedOut po = pushout(pb.sequence, codiag_m);
  return po.sequence;
}

std::optional<GModuleHom> find_sequence_isomorphism(const SES& a, const SES& b) {
  if (!object_eq(a.first(), b.first()) || !object_eq(a.last(), b.last())) return std::nullopt;
  for (const GModuleHom& phi : all_equivariant_homs(a.middle().m, b.middle().m)) {
    if (!(phi.compose(a.iota.f) == b.iota.f)) continue;
    if (!(b.pi.f.compose(phi) == a.pi.f)) continue;
    if (!phi.ab().is_injective() || !phi.ab().is_surjective()) continue;
    AbHom loc = induced_local1(*a.middle().ctx.fx, *a.middle().ld, *b.middle().ld, phi);
    if (!subgroup_eq(image(loc, a.middle().w), b.middle().w)) continue;
    return phi;
  }
  return std::nullopt;
}

} // namespace ctpair
