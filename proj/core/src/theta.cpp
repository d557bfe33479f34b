#include "ctpair/theta.hpp"

#include <json.hpp>

namespace ctpair {

long long ThetaPresentation::fval(const Elem& a, const Elem& b) const {
  return factor[m.m.index_of(a)][m.m.index_of(b)];
}

long long ThetaPresentation::tval(int g, const Elem& a) const {
  return twist[g][m.m.index_of(a)];
}

ThetaPresentation::El ThetaPresentation::mul(const El& x, const El& y) const {
  long long nn = n();
  return El{((x.a + y.a + fval(x.m, y.m)) % nn + nn) % nn, m.m.add(x.m, y.m)};
}

ThetaPresentation::El ThetaPresentation::inverse(const El& x) const {
  long long nn = n();
  Elem neg = m.m.neg(x.m);
  return El{(((-x.a - fval(x.m, neg)) % nn) + nn) % nn, neg};
}

ThetaPresentation::El ThetaPresentation::act(int g, const El& x) const {
  long long nn = n();
  long long cg = c.action[g].at(0, 0).convert_to<long long>();
  return El{((cg * x.a + tval(g, x.m)) % nn + nn) % nn, m.act(g, x.m)};
}

ThetaPresentation::El ThetaPresentation::power(const El& x, long long k) const {
  El base = k >= 0 ? x : inverse(x);
  if (k < 0) k = -k;
  El acc = one();
  for (long long i = 0; i < k; ++i) acc = mul(acc, base);
  return acc;
}

Report ThetaPresentation::validate() const {
  Report rep;
  rep.title = "theta presentation";
  unsigned long long msize = m.m.order_ull();
  long long nn = n();
  bool shapes = factor.size() == msize && twist.size() == static_cast<size_t>(m.g.n);
  for (const auto& row : factor) shapes = shapes && row.size() == msize;
  for (const auto& row : twist) shapes = shapes && row.size() == msize;
  rep.add("table shapes", shapes ? Verdict::pass : Verdict::fail);
  if (!shapes) return rep;

  std::vector<Elem> els;
  for (unsigned long long i = 0; i < msize; ++i) els.push_back(m.m.element_at(i));
  bool norm = true;
  for (const Elem& x : els)
    if (fval(m.m.zero(), x) % nn != 0 || fval(x, m.m.zero()) % nn != 0) norm = false;
  for (const Elem& x : els)
    if (tval(m.g.identity, x) % nn != 0) norm = false;
  rep.add("normalization", norm ? Verdict::pass : Verdict::fail);

  bool assoc = true;
  std::string aw;
  if (msize * msize * msize <= (1ULL << 18)) {
    for (const Elem& x : els)
      for (const Elem& y : els)
        for (const Elem& z : els)
          if ((fval(x, y) + fval(m.m.add(x, y), z)) % nn !=
              (fval(y, z) + fval(x, m.m.add(y, z))) % nn) {
            assoc = false;
            aw = "cocycle identity fails";
          }
  } else {
    Rng rng(1);
    for (int t = 0; t < 2000 && assoc; ++t) {
      Elem x = rng.element(m.m), y = rng.element(m.m), z = rng.element(m.m);
      if ((fval(x, y) + fval(m.m.add(x, y), z)) % nn !=
          (fval(y, z) + fval(x, m.m.add(y, z))) % nn)
        assoc = false;
    }
  }
  rep.add("factor set associativity", assoc ? Verdict::pass : Verdict::fail, aw);

  bool action_ok = true;
  for (int g = 0; g < m.g.n && action_ok; ++g) {
    long long cg = c.action[g].at(0, 0).convert_to<long long>();
    for (int h = 0; h < m.g.n && action_ok; ++h) {
      long long ch = c.action[h].at(0, 0).convert_to<long long>();
      (void)ch;
      for (const Elem& x : els) {
        long long lhs = tval(m.g.mul(g, h), x) % nn;
        long long rhs = (cg * tval(h, x) + tval(g, m.act(h, x))) % nn;
        if (((lhs - rhs) % nn + nn) % nn != 0) {
          action_ok = false;
          break;
        }
      }
    }
    for (const Elem& x : els) {
      for (const Elem& y : els) {
        long long lhs = (tval(g, m.m.add(x, y)) + cg * fval(x, y)) % nn;
        long long rhs = (fval(m.act(g, x), m.act(g, y)) + tval(g, x) + tval(g, y)) % nn;
        if (((lhs - rhs) % nn + nn) % nn != 0) {
          action_ok = false;
          break;
        }
      }
      if (!action_ok) break;
    }
  }
  rep.add("action axioms", action_ok ? Verdict::pass : Verdict::fail);
  return rep;
}

ThetaPresentation trivial_theta(const GModule& c, const GModule& m) {
  unsigned long long msize = m.m.order_ull();
  ThetaPresentation th{c, m,
                       std::vector<std::vector<long long>>(msize, std::vector<long long>(msize, 0)),
                       std::vector<std::vector<long long>>(m.g.n, std::vector<long long>(msize, 0))};
  return th;
}

ThetaPresentation symplectic_theta(const GModule& c, const GModule& m) {
  if (m.m.moduli != std::vector<long long>{2, 2})
    fail(errc::invalid_argument, "symplectic presentation expects (Z/2)^2");
  long long nn = c.cyclic_modulus();
  if (nn % 2 != 0) fail(errc::invalid_argument, "coefficient modulus must be even");
  ThetaPresentation th = trivial_theta(c, m);
  unsigned long long msize = m.m.order_ull();
  for (unsigned long long i = 0; i < msize; ++i)
    for (unsigned long long j = 0; j < msize; ++j) {
      Elem x = m.m.element_at(i), y = m.m.element_at(j);
      th.factor[i][j] = (nn / 2) * ((x[1] * y[0]) % 2) % nn;
    }
  Report rep = th.validate();
  if (!rep.all_required_pass())
    fail(errc::invalid_argument, "symplectic data invalid over this fixture:\n" + rep.to_text());
  return th;
}

ThetaPresentation pull_back_theta(const ThetaPresentation& th, const GModuleHom& iota) {
  if (!(iota.target.m == th.m.m)) fail(errc::group_mismatch, "pullback target mismatch");
  const GModule& m1 = iota.source;
  unsigned long long size = m1.m.order_ull();
  ThetaPresentation out{th.c, m1,
                        std::vector<std::vector<long long>>(size, std::vector<long long>(size, 0)),
                        std::vector<std::vector<long long>>(m1.g.n,
                                                            std::vector<long long>(size, 0))};
  for (unsigned long long i = 0; i < size; ++i) {
    Elem xi = iota.apply(m1.m.element_at(i));
    for (unsigned long long j = 0; j < size; ++j)
      out.factor[i][j] = th.fval(xi, iota.apply(m1.m.element_at(j)));
    for (int g = 0; g < m1.g.n; ++g) out.twist[g][i] = th.tval(g, xi);
  }
  return out;
}

ThetaPresentation doubled_theta(const ThetaPresentation& th, const ModuleSum& sum) {
  if (!(sum.inj1.target.m == sum.total.m) || !(sum.inj1.source.m == th.m.m))
    fail(errc::group_mismatch, "doubled theta needs the M+M sum of the theta module");
  unsigned long long size = sum.total.m.order_ull();
  long long nn = th.n();
  ThetaPresentation out{th.c, sum.total,
                        std::vector<std::vector<long long>>(size, std::vector<long long>(size, 0)),
                        std::vector<std::vector<long long>>(sum.total.g.n,
                                                            std::vector<long long>(size, 0))};
  for (unsigned long long i = 0; i < size; ++i) {
    Elem xi = sum.total.m.element_at(i);
    Elem mi = sum.proj1.apply(xi), ni = sum.proj2.apply(xi);
    for (unsigned long long j = 0; j < size; ++j) {
      Elem xj = sum.total.m.element_at(j);
      Elem mj = sum.proj1.apply(xj), nj = sum.proj2.apply(xj);
      out.factor[i][j] = ((th.fval(mi, mj) - th.fval(ni, nj)) % nn + nn) % nn;
    }
    for (int g = 0; g < sum.total.g.n; ++g)
      out.twist[g][i] = ((th.tval(g, mi) - th.tval(g, ni)) % nn + nn) % nn;
  }
  return out;
}

CommutatorData commutator_and_associated_map(const ThetaPresentation& th) {
  unsigned long long size = th.m.m.order_ull();
  long long nn = th.n();
  CommutatorData out;
  out.pairing.assign(size, std::vector<long long>(size, 0));
  for (unsigned long long i = 0; i < size; ++i)
    for (unsigned long long j = 0; j < size; ++j) {
      Elem x = th.m.m.element_at(i), y = th.m.m.element_at(j);
      out.pairing[i][j] = ((th.factor[i][j] - th.factor[j][i]) % nn + nn) % nn;
      // commutator of arbitrary lifts must match
      ThetaPresentation::El gx{0, x}, gy{0, y};
      ThetaPresentation::El comm = th.mul(th.mul(gx, gy), th.inverse(th.mul(gy, gx)));
      if (!th.m.m.is_zero(comm.m) || comm.a != out.pairing[i][j])
        fail(errc::not_realizable, "commutator does not match the factor-set antisymmetrization");
    }
  // additivity of P(., y): required for the associated map to exist
  for (unsigned long long j = 0; j < size; ++j)
    for (unsigned long long i1 = 0; i1 < size; ++i1)
      for (unsigned long long i2 = 0; i2 < size; ++i2) {
        Elem x1 = th.m.m.element_at(i1), x2 = th.m.m.element_at(i2);
        unsigned long long i12 = th.m.m.index_of(th.m.m.add(x1, x2));
        if ((out.pairing[i1][j] + out.pairing[i2][j]) % nn != out.pairing[i12][j])
          fail(errc::not_realizable, "commutator pairing is not biadditive");
      }
  GModule md = dual_module(th.m, th.c);
  int r = th.m.m.rank();
  Mat fm(r, r);
  for (int t = 0; t < r; ++t) {
    Elem values(r);
    for (int i = 0; i < r; ++i)
      values[i] = out.pairing[th.m.m.index_of(th.m.m.generator(i))]
                             [th.m.m.index_of(th.m.m.generator(t))];
    Elem dual = hom_to_dual_coords(th.m, th.c, values);
    for (int i = 0; i < r; ++i) fm.at(i, t) = dual[i];
  }
  out.f = GModuleHom(th.m, md, std::move(fm));
  if (!check_equivariance(out.f))
    fail(errc::not_realizable, "associated map is not equivariant");
  return out;
}

Cochain connecting_q_cochain(const ThetaPresentation& th, const Cochain& a) {
  if (!(a.m.m == th.m.m) || a.degree != 1)
    fail(errc::invalid_argument, "connecting map expects a degree-1 cochain in M");
  Cochain out = Cochain::zero(a.h, th.c, 2);
  for (unsigned long long oi = 0; oi < out.tuples(); ++oi) {
    std::vector<int> t = out.tuple_at(oi);
    int s = t[0], u = t[1];
    ThetaPresentation::El bs{0, a.table[s]};
    ThetaPresentation::El bu{0, a.table[u]};
    ThetaPresentation::El bsu{0, a.table[a.h.mul(s, u)]};
    ThetaPresentation::El v =
        th.mul(th.mul(bs, th.act(a.h.parent_of(s), bu)), th.inverse(bsu));
    if (!th.m.m.is_zero(v.m))
      fail(errc::not_a_cocycle, "connecting map applied to a non-cocycle");
    out.table[oi] = Elem{v.a};
  }
  return out;
}

Elem connecting_q_class(const ThetaPresentation& th, const CohomologyGroup& h1m,
                        const CohomologyGroup& h2c, const Elem& phi) {
  return h2c.reduce(connecting_q_cochain(th, h1m.rep_of(phi)));
}

PairingValue q_loc_sum(const FixtureContext& ctx, const ThetaPresentation& th,
                       const LocalData& ld, const Elem& tuple) {
  const ArithmeticFixture& fx = *ctx.fx;
  long long nn = fx.n();
  long long acc = 0;
  for (size_t p = 0; p < fx.places.size(); ++p) {
    Elem comp = ld.sum1.project[p].apply(tuple);
    Cochain a = ld.h1v[p].rep_of(comp);
    Elem cls = ctx.fc->h2v_c[p].reduce(connecting_q_cochain(th, a));
    Elem v = fx.places[p].inv.apply(cls);
    acc = (acc + (v.empty() ? 0 : v[0])) % nn;
  }
  return PairingValue::make(acc, nn);
}

bool is_isotropic(const FixtureContext& ctx, const ThetaPresentation& th, const LocalData& ld,
                  const SubgroupPresentation& w) {
  std::vector<Elem> gens = w.generators();
  for (size_t i = 0; i < gens.size(); ++i) {
    if (!q_loc_sum(ctx, th, ld, gens[i]).is_zero()) return false;
    for (size_t j = i; j < gens.size(); ++j)
      if (!q_loc_sum(ctx, th, ld, ld.sum1.total.add(gens[i], gens[j])).is_zero()) return false;
  }
  return true;
}

Report check_assumptions(const SES& e, const ThetaPresentation& th) {
  Report rep;
  rep.title = "theta assumptions";
  if (!(th.m.m == e.middle().m.m))
    fail(errc::group_mismatch, "theta presentation is not over the middle module");
  const FixtureContext& ctx = e.first().ctx;
  CommutatorData cd = commutator_and_associated_map(th);
  long long nn = th.n();

  // (1) iota(M1) isotropic for the commutator pairing
  bool a1 = true;
  for (int i = 0; i < e.first().m.m.rank() && a1; ++i)
    for (int j = 0; j < e.first().m.m.rank() && a1; ++j) {
      Elem xi = e.iota.f.apply(e.first().m.m.generator(i));
      Elem xj = e.iota.f.apply(e.first().m.m.generator(j));
      if (cd.pairing[th.m.m.index_of(xi)][th.m.m.index_of(xj)] % nn != 0) a1 = false;
    }
  rep.add("(1) restricted extension commutative", a1 ? Verdict::pass : Verdict::fail);

  // (2) q_loc_sum vanishes on iota(W1)
  SubgroupPresentation iw1 = image(e.iota.local1, e.first().w);
  bool a2 = is_isotropic(ctx, th, *e.middle().ld, iw1);
  rep.add("(2) q_loc_sum kills iota(W1)", a2 ? Verdict::pass : Verdict::fail);

  // (3) iota(W1) inside f_H(W)^perp
  GModule md = dual_module(th.m, ctx.fx->c);
  LocalData ldd = make_local_data(*ctx.fx, md);
  AbHom f_local = induced_local1(*ctx.fx, *e.middle().ld, ldd, cd.f);
  BilinearForm tp = total_pairing(ctx, *e.middle().ld, ldd);
  SubgroupPresentation fw = image(f_local, e.middle().w);
  SubgroupPresentation perp = annihilator_left(tp, fw);
  bool a3 = subgroup_leq(iw1, perp);
  rep.add("(3) iota(W1) orthogonal to f_H(W)", a3 ? Verdict::pass : Verdict::fail);

  // combined single condition: q(w1 + w) = q(w) for w1 in iota(W1), w in W
  bool combined = a2;
  if (combined) {
    for (const Elem& x : iw1.generators()) {
      for (const Elem& y : e.middle().w.generators()) {
        PairingValue bxy = q_loc_sum(ctx, th, *e.middle().ld,
                                     e.middle().ld->sum1.total.add(x, y)) -
                           q_loc_sum(ctx, th, *e.middle().ld, x) -
                           q_loc_sum(ctx, th, *e.middle().ld, y);
        if (!bxy.is_zero()) {
          combined = false;
          break;
        }
      }
      if (!combined) break;
    }
  }
  rep.add("combined form", combined ? Verdict::pass : Verdict::fail);
  bool consistent = combined == (a2 && a3);
  rep.add("combined form consistent with (2) and (3)",
          consistent ? Verdict::pass : Verdict::fail);
  return rep;
}

bool assumptions_hold(const SES& e, const ThetaPresentation& th) {
  Report rep = check_assumptions(e, th);
  for (const auto& it : rep.items)
    if (it.verdict == Verdict::fail) return false;
  return true;
}

InducedMorphisms induced_morphisms(const SES& e, const ThetaPresentation& th) {
  const FixtureContext& ctx = e.first().ctx;
  CommutatorData cd = commutator_and_associated_map(th);
  // (1) must hold for the factorizations to exist
  {
    long long nn = th.n();
    for (int i = 0; i < e.first().m.m.rank(); ++i)
      for (int j = 0; j < e.first().m.m.rank(); ++j) {
        Elem xi = e.iota.f.apply(e.first().m.m.generator(i));
        Elem xj = e.iota.f.apply(e.first().m.m.generator(j));
        if (cd.pairing[th.m.m.index_of(xi)][th.m.m.index_of(xj)] % nn != 0)
          fail(errc::assumption_one_fails, "iota(M1) is not isotropic for the commutator");
      }
  }
  GModuleHom pi_dual = dual_hom(e.pi.f, ctx.fx->c);   // M2^dual -> M^dual
  GModuleHom iota_dual = dual_hom(e.iota.f, ctx.fx->c); // M^dual -> M1^dual
  Solver pid_solver(pi_dual.ab());
  // f1 = (pi^dual)^{-1} o f_H o iota
  int r1 = e.first().m.m.rank();
  Mat f1m(pi_dual.source.m.rank(), r1);
  for (int t = 0; t < r1; ++t) {
    auto x = pid_solver.solve(cd.f.apply(e.iota.f.apply(e.first().m.m.generator(t))));
    if (!x) fail(errc::assumption_one_fails, "f_H(iota(M1)) escapes the image of pi^dual");
    for (int i = 0; i < pi_dual.source.m.rank(); ++i) f1m.at(i, t) = (*x)[i];
  }
  GModuleHom f1(e.first().m, pi_dual.source, std::move(f1m));
  // f2 via a set-section of pi
  SetSection sec = make_section(e.pi.f);
  int r2 = e.last().m.m.rank();
  Mat f2m(iota_dual.target.m.rank(), r2);
  for (int t = 0; t < r2; ++t) {
    Elem v = iota_dual.apply(cd.f.apply(sec.lift(e.last().m.m.generator(t))));
    for (int i = 0; i < iota_dual.target.m.rank(); ++i) f2m.at(i, t) = v[i];
  }
  GModuleHom f2(e.last().m, iota_dual.target, std::move(f2m));
  // the ladder must commute
  if (!(pi_dual.compose(f1) == cd.f.compose(e.iota.f)))
    fail(errc::not_realizable, "f1 ladder square does not commute");
  if (!(iota_dual.compose(cd.f) == f2.compose(e.pi.f)))
    fail(errc::not_realizable, "f2 ladder square does not commute");
  if (!check_equivariance(f1) || !check_equivariance(f2))
    fail(errc::not_realizable, "induced morphisms are not equivariant");
  return InducedMorphisms{f1, f2};
}

namespace {

// Homomorphic section of the restricted extension H_1 -> M1, as a table of
// C-values indexed by M1 element enumeration. The parameters tau shift the
// generators' lifts; pass {} for the deterministic least solution.
std::vector<long long> solve_section(const ThetaPresentation& th1,
                                     const std::vector<long long>& tau_shift) {
  const FiniteAbelianGroup& m1 = th1.m.m;
  long long nn = th1.n();
  int r = m1.rank();
  std::vector<long long> tau(r, 0);
  for (int i = 0; i < r; ++i) {
    // need d_i * tau_i + kappa_i = 0 mod N, kappa_i the C-part of (0, e_i)^{d_i}
    ThetaPresentation::El h = th1.power(ThetaPresentation::El{0, m1.generator(i)}, m1.moduli[i]);
    if (!m1.is_zero(h.m)) fail(errc::invalid_argument, "generator power misbehaves");
    long long kappa = h.a;
    long long d = m1.moduli[i];
    long long g = std::gcd(d, nn);
    if (kappa % g != 0)
      fail(errc::no_homomorphic_section,
           "the restricted extension does not split as abelian groups (enlarge N)");
    // solve d * tau = -kappa mod N
    long long dd = d / g, nng = nn / g, kk = (-kappa / g) % nng;
    // inverse of dd mod nng
    long long inv = 1;
    for (long long cand = 0; cand < nng; ++cand)
      if ((dd * cand) % nng == ((1 % nng) + nng) % nng) { inv = cand; break; }
    long long t0 = ((kk * inv) % nng + nng) % nng;
    tau[i] = t0;
    if (i < static_cast<int>(tau_shift.size()))
      tau[i] = (tau[i] + tau_shift[i] * nng) % nn; // shift by solutions of d*tau = 0
  }
  // t(m) = C-part of prod_i h_i^{a_i}
  unsigned long long size = m1.order_ull();
  std::vector<long long> t(size, 0);
  for (unsigned long long idx = 0; idx < size; ++idx) {
    Elem m = m1.element_at(idx);
    ThetaPresentation::El acc = th1.one();
    for (int i = 0; i < r; ++i)
      acc = th1.mul(acc, th1.power(ThetaPresentation::El{tau[i], m1.generator(i)}, m[i]));
    if (!(acc.m == m)) fail(errc::invalid_argument, "section assembly failed");
    t[idx] = acc.a;
  }
  // homomorphic by construction in the abelian case; verify
  for (unsigned long long i = 0; i < size; ++i)
    for (unsigned long long j = 0; j < size; ++j) {
      Elem x = m1.element_at(i), y = m1.element_at(j);
      long long lhs = t[m1.index_of(m1.add(x, y))];
      long long rhs = (t[i] + t[j] + th1.fval(x, y)) % nn;
      if (((lhs - rhs) % nn + nn) % nn != 0)
        fail(errc::no_homomorphic_section, "restricted extension is not commutative enough");
    }
  return t;
}

Cochain ps_cocycle_from_section(const SES& e, const ThetaPresentation& th1,
                                const std::vector<long long>& t, const GModule& m1d) {
  const FixtureContext& ctx = e.first().ctx;
  const GModule& m1 = e.first().m;
  long long nn = ctx.n();
  Subgroup whole = ctx.fx->whole_group();
  Cochain psi = Cochain::zero(whole, m1d, 1);
  for (int s = 0; s < whole.size(); ++s) {
    int sp = whole.parent_of(s);
    int spinv = ctx.fx->g.inv(sp);
    long long cs = ctx.fx->c.action[sp].at(0, 0).convert_to<long long>();
    // psi(s)(m) = c_s t(s^{-1} m) + twist_s(s^{-1} m) - t(m), a homomorphism in m
    auto value = [&](const Elem& m) {
      Elem mm = m1.act(spinv, m);
      long long v = (cs * t[m1.m.index_of(mm)] + th1.tval(sp, mm) - t[m1.m.index_of(m)]) % nn;
      return (v + nn) % nn;
    };
    // verify additivity before converting to dual coordinates
    unsigned long long size = m1.m.order_ull();
    for (unsigned long long i = 0; i < size; ++i)
      for (unsigned long long j = 0; j < size; ++j) {
        Elem x = m1.m.element_at(i), y = m1.m.element_at(j);
        if ((value(x) + value(y)) % nn != value(m1.m.add(x, y)))
          fail(errc::not_realizable, "Poonen-Stoll values are not homomorphic");
      }
    Elem gen_values(m1.m.rank());
    for (int i = 0; i < m1.m.rank(); ++i) gen_values[i] = value(m1.m.generator(i));
    psi.table[s] = hom_to_dual_coords(m1, ctx.fx->c, gen_values);
  }
  if (!coboundary(psi).is_zero())
    fail(errc::not_realizable, "Poonen-Stoll cochain is not a cocycle");
  return psi;
}

} // namespace

PoonenStollClass poonen_stoll_class(const SES& e, const ThetaPresentation& th) {
  const FixtureContext& ctx = e.first().ctx;
  ThetaPresentation th1 = pull_back_theta(th, e.iota.f);
  PoonenStollClass out;
  out.section = solve_section(th1, {});
  GModule m1d = dual_module(e.first().m, ctx.fx->c);
  out.cocycle = ps_cocycle_from_section(e, th1, out.section, m1d);
  LocalData ldd = make_local_data(*ctx.fx, m1d);
  out.h1_class = ldd.h1_global.reduce(out.cocycle);
  // independence of the solved section: shift every generator lift and compare
  {
    std::vector<long long> shift(e.first().m.m.rank(), 1);
    std::vector<long long> t2 = solve_section(th1, shift);
    Cochain psi2 = ps_cocycle_from_section(e, th1, t2, m1d);
    if (!(ldd.h1_global.reduce(psi2) == out.h1_class))
      fail(errc::not_realizable, "Poonen-Stoll class depends on the section");
  }
  // Selmer membership: localize lands in W1^perp
  SModObject m1perp = dual_object(e.first());
  out.in_selmer = contains(m1perp.w, ldd.localize1.apply(out.h1_class));
  return out;
}

Report check_theta_main(const SES& e, const ThetaPresentation& th) {
  Report rep;
  rep.title = "theta main theorem";
  const FixtureContext& ctx = e.first().ctx;
  Report ass = check_assumptions(e, th);
  bool applicable = true;
  for (const auto& it : ass.items)
    if (it.verdict == Verdict::fail) applicable = false;
  if (!applicable) {
    rep.add("main identity", Verdict::not_applicable, "theta assumptions fail");
    return rep;
  }
  CtpEngine eng(SES{e.iota, e.pi});
  InducedMorphisms ind = induced_morphisms(e, th);
  PoonenStollClass ps = poonen_stoll_class(e, th);
  rep.add("Poonen-Stoll class in Sel(M1^dual)", ps.in_selmer ? Verdict::pass : Verdict::fail);
  auto ps_sel = eng.sel1d().from_h1(ps.h1_class);
  if (!ps_sel) {
    rep.add("main identity", Verdict::fail, "Poonen-Stoll class escapes the Selmer group");
    return rep;
  }
  bool main_ok = true;
  std::string witness;
  unsigned long long selsize = eng.sel2().carrier.order_ull();
  for (unsigned long long i = 0; i < selsize && main_ok; ++i) {
    Elem phi = eng.sel2().carrier.element_at(i);
    // f2(phi) in Selmer coordinates
    Cochain pushed = apply_pointwise(ind.f2, eng.sel2().rep_of(phi));
    auto f2phi = eng.sel1d().from_h1(eng.m1_dual_object().ld->h1_global.reduce(pushed));
    if (!f2phi) fail(errc::not_in_selmer, "f2(phi) is not Selmer");
    Elem arg = eng.sel1d().carrier.sub(*ps_sel, *f2phi);
    PairingValue lhs = eng.pair(phi, arg);
    Elem wlift = eng.local_lift_in_w(phi);
    Elem w_total = e.middle().w.inclusion.apply(wlift);
    PairingValue rhs = q_loc_sum(ctx, th, *e.middle().ld, w_total);
    if (!(lhs == rhs)) {
      main_ok = false;
      witness = "phi #" + std::to_string(i) + ": " + lhs.str() + " vs " + rhs.str();
    }
  }
  rep.add("CTP(phi, psi_PS - f2(phi)) = q_loc_sum(lift)",
          main_ok ? Verdict::pass : Verdict::fail, witness);

  if (is_isotropic(ctx, th, *e.middle().ld, e.middle().w)) {
    bool iso_ok = true;
    bool diag_zero = true;
    for (unsigned long long i = 0; i < selsize && iso_ok; ++i) {
      Elem phi = eng.sel2().carrier.element_at(i);
      Cochain pushed = apply_pointwise(ind.f2, eng.sel2().rep_of(phi));
      auto f2phi = eng.sel1d().from_h1(eng.m1_dual_object().ld->h1_global.reduce(pushed));
      PairingValue a = eng.pair(phi, *f2phi);
      PairingValue b = eng.pair(phi, *ps_sel);
      if (!(a == b)) iso_ok = false;
      if (!a.is_zero()) diag_zero = false;
    }
    rep.add("isotropic: CTP(phi, f2(phi)) = CTP(phi, psi_PS)",
            iso_ok ? Verdict::pass : Verdict::fail);
    // alternating criterion: psi_PS lifts to Sel(M^dual) iff the self-pairing dies
    SelmerGroup selmd = selmer(eng.dual_middle());
    GModuleHom iota_dual = dual_hom(e.iota.f, ctx.fx->c);
    AbHom ids = [&] {
      Mat m(eng.m1_dual_object().ld->h1_global.carrier.rank(),
            eng.dual_middle().ld->h1_global.carrier.rank());
      for (int t = 0; t < eng.dual_middle().ld->h1_global.carrier.rank(); ++t) {
        Elem img = eng.m1_dual_object().ld->h1_global.reduce(
            apply_pointwise(iota_dual, eng.dual_middle().ld->h1_global.reps[t]));
        for (int i = 0; i < m.rows; ++i) m.at(i, t) = img[i];
      }
      return AbHom(eng.dual_middle().ld->h1_global.carrier,
                   eng.m1_dual_object().ld->h1_global.carrier, std::move(m));
    }();
    SubgroupPresentation lifted = image(ids, selmd.in_h1);
    bool lifts = contains(lifted, ps.h1_class);
    rep.add("alternating criterion consistent",
            (lifts == diag_zero) ? Verdict::pass : Verdict::fail,
            "psi_PS lifts: " + std::string(lifts ? "yes" : "no") +
                ", self-pairing zero: " + std::string(diag_zero ? "yes" : "no"));
  }
  return rep;
}

FiniteThetaResult construct_finite_theta(const GModule& c, const FiniteThetaInput& in) {
  FiniteThetaResult out;
  long long nn = c.cyclic_modulus();
  if (nn % 2 != 0) fail(errc::invalid_argument, "the construction needs 2 | N");
  GModuleHom mult2 = multiplication_by(2, in.m);
  SubgroupPresentation s2l = preimage(mult2.ab(), in.m0);
  out.m2lambda = submodule(in.m, s2l, &out.incl_2lambda);
  out.mlambda = submodule(in.m, in.m0, &out.incl_lambda);
  // doubling: M[2 lambda] -> M[lambda]
  Solver lam_solver(out.incl_lambda.ab());
  Mat dm(out.mlambda.m.rank(), out.m2lambda.m.rank());
  for (int t = 0; t < out.m2lambda.m.rank(); ++t) {
    Elem big = in.m.m.smul(2, out.incl_2lambda.apply(out.m2lambda.m.generator(t)));
    auto x = lam_solver.solve(big);
    if (!x) fail(errc::invalid_argument, "2 M[2 lambda] escapes M[lambda]");
    for (int i = 0; i < out.mlambda.m.rank(); ++i) dm.at(i, t) = (*x)[i];
  }
  out.doubling = GModuleHom(out.m2lambda, out.mlambda, std::move(dm));
  if (!out.doubling.ab().is_surjective())
    fail(errc::doubling_not_surjective, "doubling M[2 lambda] -> M[lambda] is not onto");
  GModuleHom incl_two;
  out.mtwo = torsion_submodule(out.m2lambda, 2, &incl_two);
  out.incl_two = incl_two;

  unsigned long long big = out.m2lambda.m.order_ull();
  unsigned long long small = out.mtwo.m.order_ull();
  if (in.p1.size() != big) fail(errc::invalid_argument, "P1 table has wrong size");
  for (const auto& row : in.p1)
    if (row.size() != big) fail(errc::invalid_argument, "P1 table has wrong size");
  if (in.e.size() != small) fail(errc::invalid_argument, "e table has wrong size");

  auto p1v = [&](const Elem& x, const Elem& y) {
    return ((in.p1[out.m2lambda.m.index_of(x)][out.m2lambda.m.index_of(y)]) % nn + nn) % nn;
  };
  // P1 bilinear, antisymmetric, equivariant
  for (unsigned long long i = 0; i < big; ++i)
    for (unsigned long long j = 0; j < big; ++j) {
      Elem x = out.m2lambda.m.element_at(i), y = out.m2lambda.m.element_at(j);
      if ((in.p1[i][j] + in.p1[j][i]) % nn != 0)
        fail(errc::invalid_argument, "P1 is not antisymmetric");
      for (unsigned long long k = 0; k < big; ++k) {
        Elem z = out.m2lambda.m.element_at(k);
        if ((p1v(x, y) + p1v(x, z)) % nn != p1v(x, out.m2lambda.m.add(y, z)))
          fail(errc::invalid_argument, "P1 is not bilinear");
      }
    }
  for (int g = 0; g < in.m.g.n; ++g) {
    long long cg = c.action[g].at(0, 0).convert_to<long long>();
    for (unsigned long long i = 0; i < big; ++i)
      for (unsigned long long j = 0; j < big; ++j) {
        Elem x = out.m2lambda.m.element_at(i), y = out.m2lambda.m.element_at(j);
        long long lhs = p1v(out.m2lambda.act(g, x), out.m2lambda.act(g, y));
        if (((lhs - cg * p1v(x, y)) % nn + nn) % nn != 0)
          fail(errc::invalid_argument, "P1 is not equivariant");
      }
  }
  // e is a quadratic refinement of P1 on M[2], valued in C[2]
  for (unsigned long long i = 0; i < small; ++i) {
    if ((2 * in.e[i]) % nn != 0)
      fail(errc::bad_quadratic_refinement, "e is not valued in C[2]");
    for (unsigned long long j = 0; j < small; ++j) {
      Elem x = out.mtwo.m.element_at(i), y = out.mtwo.m.element_at(j);
      long long lhs =
          (in.e[out.mtwo.m.index_of(out.mtwo.m.add(x, y))] - in.e[i] - in.e[j]) % nn;
      long long rhs = p1v(incl_two.apply(x), incl_two.apply(y));
      if (((lhs - rhs) % nn + nn) % nn != 0)
        fail(errc::bad_quadratic_refinement,
             "e(x+y) - e(x) - e(y) != P1(x,y) at a 2-torsion pair");
    }
  }
  // equivariance of e (needed for the twist to be well defined)
  for (int g = 0; g < in.m.g.n; ++g) {
    long long cg = c.action[g].at(0, 0).convert_to<long long>();
    for (unsigned long long i = 0; i < small; ++i) {
      Elem x = out.mtwo.m.element_at(i);
      long long lhs = in.e[out.mtwo.m.index_of(out.mtwo.act(g, x))];
      if (((lhs - cg * in.e[i]) % nn + nn) % nn != 0)
        fail(errc::bad_quadratic_refinement, "e is not equivariant");
    }
  }

  // deterministic section of doubling: least preimage in enumeration order
  unsigned long long lsize = out.mlambda.m.order_ull();
  std::vector<Elem> tsec(lsize);
  {
    std::vector<bool> seen(lsize, false);
    for (unsigned long long i = 0; i < big; ++i) {
      Elem u = out.m2lambda.m.element_at(i);
      unsigned long long li = out.mlambda.m.index_of(out.doubling.apply(u));
      if (!seen[li]) {
        seen[li] = true;
        tsec[li] = u;
      }
    }
  }
  Solver two_solver(incl_two.ab());
  // U arithmetic and reduction to the canonical transversal
  struct UEl {
    long long a;
    Elem u;
  };
  auto umul = [&](const UEl& x, const UEl& y) {
    return UEl{(x.a + y.a + p1v(x.u, y.u)) % nn, out.m2lambda.m.add(x.u, y.u)};
  };
  auto uinv = [&](const UEl& x) {
    Elem neg = out.m2lambda.m.neg(x.u);
    return UEl{((-x.a + p1v(x.u, x.u)) % nn + nn) % nn, neg};
  };
  (void)uinv;
  auto canonical = [&](const UEl& x) -> std::pair<long long, Elem> {
    Elem lam = out.doubling.apply(x.u);
    const Elem& rep = tsec[out.mlambda.m.index_of(lam)];
    Elem diff = out.m2lambda.m.sub(x.u, rep);
    auto small_coords = two_solver.solve(diff);
    if (!small_coords) fail(errc::invalid_argument, "transversal reduction failed");
    long long ex = in.e[out.mtwo.m.index_of(*small_coords)];
    // multiply by (e(x2), x2)^{-1} on the right
    UEl n_el{ex, diff};
    UEl n_inv{((-n_el.a + p1v(n_el.u, n_el.u)) % nn + nn) % nn, out.m2lambda.m.neg(n_el.u)};
    UEl red = umul(x, n_inv);
    if (!(red.u == rep)) fail(errc::invalid_argument, "canonical form did not land on the transversal");
    return {red.a, lam};
  };

  ThetaPresentation th = trivial_theta(c, out.mlambda);
  for (unsigned long long i = 0; i < lsize; ++i)
    for (unsigned long long j = 0; j < lsize; ++j) {
      UEl prod = umul(UEl{0, tsec[i]}, UEl{0, tsec[j]});
      th.factor[i][j] = canonical(prod).first;
    }
  for (int g = 0; g < in.m.g.n; ++g) {
    long long cg = c.action[g].at(0, 0).convert_to<long long>();
    for (unsigned long long i = 0; i < lsize; ++i) {
      UEl moved{(cg * 0) % nn, out.m2lambda.act(g, tsec[i])};
      auto [alpha, lam] = canonical(moved);
      // the canonical form sits over g . (element i)
      if (!(lam == out.mlambda.act(g, out.mlambda.m.element_at(i))))
        fail(errc::invalid_argument, "twist reduction mismatch");
      th.twist[g][i] = alpha;
    }
  }
  Report val = th.validate();
  if (!val.all_required_pass())
    fail(errc::invalid_argument, "constructed presentation invalid:\n" + val.to_text());
  out.theta = th;

  // induced pairing P0(2a, 2b) = 2 P1(a, b), tabulated on M[lambda]
  out.p0.assign(lsize, std::vector<long long>(lsize, 0));
  for (unsigned long long i = 0; i < lsize; ++i)
    for (unsigned long long j = 0; j < lsize; ++j)
      out.p0[i][j] = (2 * p1v(tsec[i], tsec[j])) % nn;
  out.p1 = in.p1;
  out.e = in.e;
  out.transversal = tsec;
  CommutatorData cd = commutator_and_associated_map(out.theta);
  if (cd.pairing != out.p0)
    fail(errc::invalid_argument, "commutator pairing of the quotient differs from P0");
  return out;
}

Report check_quadratic_form(const FiniteThetaResult& ft, const Subgroup& hsub,
                            const GModule& c) {
  Report rep;
  rep.title = "quadratic form";
  const ThetaPresentation& th = ft.theta;
  long long nn = th.n();
  unsigned long long lsize = th.m.m.order_ull();
  // gamma through U: (alpha, m) -> (alpha + kappa(m), -m) with kappa(m) the
  // C-part of the canonical form of (0, -t(m))
  auto p1v = [&](const Elem& x, const Elem& y) {
    return ((ft.p1[ft.m2lambda.m.index_of(x)][ft.m2lambda.m.index_of(y)]) % nn + nn) % nn;
  };
  Solver two_solver(ft.incl_two.ab());
  auto canonical_cpart = [&](long long a, const Elem& u) {
    Elem lam = ft.doubling.apply(u);
    const Elem& rep_u = ft.transversal[ft.mlambda.m.index_of(lam)];
    Elem diff = ft.m2lambda.m.sub(u, rep_u);
    auto sc = two_solver.solve(diff);
    if (!sc) fail(errc::invalid_argument, "transversal reduction failed");
    long long ex = ft.e[ft.mtwo.m.index_of(*sc)];
    long long ninv_a = ((-ex + p1v(diff, diff)) % nn + nn) % nn;
    Elem ninv_u = ft.m2lambda.m.neg(diff);
    long long a2 = ((a + ninv_a + p1v(u, ninv_u)) % nn + nn) % nn;
    return a2;
  };
  std::vector<long long> kappa(lsize);
  for (unsigned long long i = 0; i < lsize; ++i)
    kappa[i] = canonical_cpart(0, ft.m2lambda.m.neg(ft.transversal[i]));
  auto gamma = [&](const ThetaPresentation::El& x) {
    return ThetaPresentation::El{(x.a + kappa[th.m.m.index_of(x.m)]) % nn, th.m.m.neg(x.m)};
  };
  // gamma must be an equivariant automorphism fixing C over -1 on M[lambda]
  bool is_auto = true;
  for (unsigned long long i = 0; i < lsize && is_auto; ++i) {
    ThetaPresentation::El x{static_cast<long long>(i % nn), th.m.m.element_at(i)};
    if (!(gamma(ThetaPresentation::El{x.a, th.m.m.zero()}) ==
          ThetaPresentation::El{x.a, th.m.m.zero()}))
      is_auto = false;
    if (!(gamma(x).m == th.m.m.neg(x.m))) is_auto = false;
    for (int g = 0; g < th.m.g.n && is_auto; ++g)
      if (!(gamma(th.act(g, x)) == th.act(g, gamma(x)))) is_auto = false;
    for (unsigned long long j = 0; j < lsize && is_auto; ++j)
      for (long long a = 0; a < nn && is_auto; ++a) {
        ThetaPresentation::El y{a, th.m.m.element_at(j)};
        if (!(gamma(th.mul(x, y)) == th.mul(gamma(x), gamma(y)))) is_auto = false;
      }
  }
  rep.add("gamma is an equivariant automorphism over -1", is_auto ? Verdict::pass : Verdict::fail);

  CohomologyGroup h1 = cohomology(hsub, th.m, 1);
  CohomologyGroup h2c = cohomology(hsub, c, 2);
  bool q0 = connecting_q_class(th, h1, h2c, h1.carrier.zero()) == h2c.carrier.zero();
  rep.add("q(0) = 0", q0 ? Verdict::pass : Verdict::fail);
  bool law = true;
  long long expn = std::max<long long>(h1.carrier.exponent(), 1);
  for (unsigned long long i = 0; i < h1.carrier.order_ull() && law; ++i) {
    Elem phi = h1.carrier.element_at(i);
    Elem q = connecting_q_class(th, h1, h2c, phi);
    if (!(connecting_q_class(th, h1, h2c, h1.carrier.neg(phi)) == q)) law = false;
    for (long long a = 0; a < 2 * expn && law; ++a) {
      Elem lhs = connecting_q_class(th, h1, h2c, h1.carrier.smul(a, phi));
      if (!(lhs == h2c.carrier.smul(a * a, q))) law = false;
    }
  }
  rep.add("q(a phi) = a^2 q(phi)", law ? Verdict::pass : Verdict::fail);

  // polarization identity against P0
  GBilinear p0{th.m, th.m, c, {}};
  p0.vals.assign(th.m.m.rank(), std::vector<Elem>(th.m.m.rank(), c.m.zero()));
  for (int i = 0; i < th.m.m.rank(); ++i)
    for (int j = 0; j < th.m.m.rank(); ++j)
      p0.vals[i][j] =
          Elem{ft.p0[th.m.m.index_of(th.m.m.generator(i))][th.m.m.index_of(th.m.m.generator(j))]};
  bool zar = true;
  for (unsigned long long i = 0; i < h1.carrier.order_ull() && zar; ++i)
    for (unsigned long long j = 0; j < h1.carrier.order_ull() && zar; ++j) {
      Elem phi = h1.carrier.element_at(i), psi = h1.carrier.element_at(j);
      Elem lhs = h2c.carrier.sub(
          connecting_q_class(th, h1, h2c, h1.carrier.add(phi, psi)),
          h2c.carrier.add(connecting_q_class(th, h1, h2c, phi),
                          connecting_q_class(th, h1, h2c, psi)));
      Elem rhs = h2c.reduce(cup(h1.rep_of(phi), h1.rep_of(psi), p0));
      if (!(lhs == rhs)) zar = false;
    }
  rep.add("q(phi+psi) - q(phi) - q(psi) = phi cup_P0 psi", zar ? Verdict::pass : Verdict::fail);
  return rep;
}

bool isotropy_from_level_two(const FixtureContext& ctx, const FiniteThetaResult& ft,
                             const SubgroupPresentation& w1, const SubgroupPresentation& w0) {
  SModObject o1 = make_object(ctx, ft.m2lambda, w1);
  SModObject o0 = make_object(ctx, ft.mlambda, w0);
  SModMorphism dbl = make_map_unchecked(o1, o0, ft.doubling);
  std::string why;
  if (!is_strict_epi(dbl, &why))
    fail(errc::not_strictly_epic, "doubling is not strictly epic: " + why);
  GBilinear p1{ft.m2lambda, ft.m2lambda, ctx.fx->c, {}};
  p1.vals.assign(ft.m2lambda.m.rank(), std::vector<Elem>(ft.m2lambda.m.rank(), ctx.fx->c.m.zero()));
  for (int i = 0; i < ft.m2lambda.m.rank(); ++i)
    for (int j = 0; j < ft.m2lambda.m.rank(); ++j)
      p1.vals[i][j] = Elem{ft.p1[ft.m2lambda.m.index_of(ft.m2lambda.m.generator(i))]
                                [ft.m2lambda.m.index_of(ft.m2lambda.m.generator(j))]};
  const ArithmeticFixture& fx = *ctx.fx;
  long long nn = fx.n();
  auto q1 = [&](const Elem& tuple) {
    long long acc = 0;
    for (size_t p = 0; p < fx.places.size(); ++p) {
      Elem comp = o1.ld->sum1.project[p].apply(tuple);
      Cochain a = o1.ld->h1v[p].rep_of(comp);
      Elem cls = ctx.fc->h2v_c[p].reduce(cup(a, a, p1));
      Elem v = fx.places[p].inv.apply(cls);
      acc = (acc + (v.empty() ? 0 : v[0])) % nn;
    }
    return acc;
  };
  std::vector<Elem> gens = w1.generators();
  for (size_t i = 0; i < gens.size(); ++i) {
    if (q1(gens[i]) != 0) return false;
    for (size_t j = i; j < gens.size(); ++j)
      if (q1(o1.ld->sum1.total.add(gens[i], gens[j])) != 0) return false;
  }
  // hypothesis holds: the conclusion must agree with the direct check
  if (!is_isotropic(ctx, ft.theta, *o0.ld, w0))
    fail(errc::invalid_argument, "level-two criterion contradicts the direct isotropy check");
  return true;
}

namespace {

// Theta-valued cochains: dense tables of presentation elements.
struct ThCochain {
  Subgroup h;
  int degree = 0;
  std::vector<ThetaPresentation::El> table;

  unsigned long long index(const std::vector<int>& locals) const {
    unsigned long long idx = 0;
    for (int s : locals) idx = idx * h.size() + static_cast<unsigned long long>(s);
    return idx;
  }
  std::vector<int> tuple_at(unsigned long long idx) const {
    std::vector<int> t(degree);
    for (int k = degree - 1; k >= 0; --k) {
      t[k] = static_cast<int>(idx % h.size());
      idx /= h.size();
    }
    return t;
  }
};

ThCochain th_zero(const ThetaPresentation& th, const Subgroup& h, int degree) {
  ThCochain c{h, degree, {}};
  size_t n = 1;
  for (int i = 0; i < degree; ++i) n *= h.size();
  c.table.assign(n, th.one());
  return c;
}

ThCochain th_mul(const ThetaPresentation& th, const ThCochain& a, const ThCochain& b) {
  ThCochain out = a;
  for (size_t i = 0; i < out.table.size(); ++i) out.table[i] = th.mul(a.table[i], b.table[i]);
  return out;
}

ThCochain th_inv(const ThetaPresentation& th, const ThCochain& a) {
  ThCochain out = a;
  for (auto& x : out.table) x = th.inverse(x);
  return out;
}

bool th_eq(const ThCochain& a, const ThCochain& b) { return a.table == b.table; }

// b over M-part from a Cochain plus C-parts.
ThCochain th_from(const ThetaPresentation& th, const Cochain& a,
                  const std::vector<long long>& cparts) {
  ThCochain out = th_zero(th, a.h, a.degree);
  for (size_t i = 0; i < out.table.size(); ++i)
    out.table[i] = ThetaPresentation::El{cparts.empty() ? 0 : cparts[i], a.table[i]};
  return out;
}

// Embed a C-valued cochain as a theta cochain with zero M-part.
ThCochain th_embed(const ThetaPresentation& th, const Cochain& c) {
  ThCochain out = th_zero(th, c.h, c.degree);
  for (size_t i = 0; i < out.table.size(); ++i)
    out.table[i] = ThetaPresentation::El{c.table[i].empty() ? 0 : c.table[i][0], th.m.m.zero()};
  return out;
}

// The C-parts, once the M-parts vanish.
Cochain th_cpart(const ThetaPresentation& th, const GModule& c, const ThCochain& tc) {
  Cochain out = Cochain::zero(tc.h, c, tc.degree);
  for (size_t i = 0; i < out.table.size(); ++i) {
    if (!th.m.m.is_zero(tc.table[i].m))
      fail(errc::invalid_argument, "cochain is not valued in the coefficient group");
    out.table[i] = Elem{tc.table[i].a};
  }
  return out;
}

ThCochain serre_d(const ThetaPresentation& th, const ThCochain& b) {
  if (b.degree != 1) fail(errc::invalid_argument, "serre coboundary needs degree 1");
  ThCochain out = th_zero(th, b.h, 2);
  for (unsigned long long oi = 0; oi < out.table.size(); ++oi) {
    std::vector<int> t = out.tuple_at(oi);
    int s = t[0], u = t[1];
    out.table[oi] = th.mul(
        th.mul(b.table[s], th.act(b.h.parent_of(s), b.table[u])),
        th.inverse(b.table[b.index({b.h.mul(s, u)})]));
  }
  return out;
}

// Alternating coboundary for cochains valued in a commutative part of the
// presentation (the values must pairwise commute).
ThCochain th_abelian_d(const ThetaPresentation& th, const ThCochain& c) {
  ThCochain out = th_zero(th, c.h, c.degree + 1);
  for (unsigned long long oi = 0; oi < out.table.size(); ++oi) {
    std::vector<int> t = out.tuple_at(oi);
    ThetaPresentation::El acc = th.one();
    {
      std::vector<int> rest(t.begin() + 1, t.end());
      acc = th.mul(acc, th.act(c.h.parent_of(t[0]), c.table[c.index(rest)]));
    }
    for (int j = 1; j <= c.degree; ++j) {
      std::vector<int> v;
      for (int k = 0; k < j - 1; ++k) v.push_back(t[k]);
      v.push_back(c.h.mul(t[j - 1], t[j]));
      for (int k = j + 1; k <= c.degree; ++k) v.push_back(t[k]);
      const ThetaPresentation::El& x = c.table[c.index(v)];
      acc = th.mul(acc, (j % 2 == 0) ? x : th.inverse(x));
    }
    {
      std::vector<int> head(t.begin(), t.begin() + c.degree);
      const ThetaPresentation::El& x = c.table[c.index(head)];
      acc = th.mul(acc, (c.degree % 2 == 0) ? th.inverse(x) : x);
    }
    out.table[oi] = acc;
  }
  return out;
}

} // namespace

Report cochain_lemma_suite(const SES& e, const ThetaPresentation& th, int trials,
                           std::uint64_t seed) {
  Report rep;
  rep.title = "cochain lemma suite";
  const FixtureContext& ctx = e.first().ctx;
  if (!assumptions_hold(e, th)) {
    rep.add("suite", Verdict::not_applicable, "theta assumptions fail");
    return rep;
  }
  CommutatorData cd = commutator_and_associated_map(th);
  InducedMorphisms ind = induced_morphisms(e, th);
  ThetaPresentation th1 = pull_back_theta(th, e.iota.f);
  std::vector<long long> tsec = solve_section(th1, {});
  GModule m1d = dual_module(e.first().m, ctx.fx->c);
  Cochain psi_ps = ps_cocycle_from_section(e, th1, tsec, m1d);
  GBilinear ev_m = evaluation_pairing(e.middle().m, ctx.fx->c);
  GBilinear ev1_swap = swap_pairing(evaluation_pairing(e.first().m, ctx.fx->c));
  SetSection sec_pi = make_section(e.pi.f);
  Solver iota_solver(e.iota.f.ab());
  Rng rng(seed);

  std::vector<Subgroup> domains{ctx.fx->whole_group()};
  for (const Place& p : ctx.fx->places) domains.push_back(p.gv);

  auto random_cocycle = [&](const Subgroup& h, const GModule& m) {
    CohomologyGroup h1 = cohomology(h, m, 1);
    Cochain z = h1.rep_of(rng.element(h1.carrier));
    Cochain shift = Cochain::zero(h, m, 0);
    shift.table[0] = rng.element(m.m);
    return z.add(coboundary(shift));
  };
  auto random_cochain = [&](const Subgroup& h, const GModule& m, int degree) {
    Cochain c = Cochain::zero(h, m, degree);
    for (auto& x : c.table) x = rng.element(m.m);
    return c;
  };
  auto random_cparts = [&](size_t count) {
    std::vector<long long> v(count);
    for (auto& x : v) x = rng.below(th.n());
    return v;
  };
  auto section_apply = [&](const Cochain& h_cochain) {
    // s o h for h valued in M1: (t(x), iota(x))
    ThCochain out = th_zero(th, h_cochain.h, h_cochain.degree);
    for (size_t i = 0; i < out.table.size(); ++i) {
      const Elem& x = h_cochain.table[i];
      out.table[i] = ThetaPresentation::El{tsec[e.first().m.m.index_of(x)],
                                           e.iota.f.apply(x)};
    }
    return out;
  };

  int ok1 = 0, ok2 = 0, ok3 = 0, ok4a = 0, ok4b = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const Subgroup& h = domains[trial % domains.size()];
    // -------- lemma: db is valued in H1 and d(db) = -a cup (f o da)
    {
      Cochain a2 = random_cocycle(h, e.last().m);
      Cochain a = lift_through(sec_pi, a2)
                      .add(apply_pointwise(e.iota.f, random_cochain(h, e.first().m, 1)));
      ThCochain b = th_from(th, a, random_cparts(static_cast<size_t>(h.size())));
      ThCochain db = serre_d(th, b);
      bool valued_ok = true;
      for (const auto& x : db.table)
        if (!iota_solver.solvable(x.m)) valued_ok = false;
      ThCochain ddb = th_abelian_d(th, db);
      Cochain da = coboundary(a);
      Cochain rhs = cup(a, apply_pointwise(cd.f, da), ev_m).neg();
      bool match = valued_ok;
      for (size_t i = 0; i < ddb.table.size() && match; ++i) {
        if (!th.m.m.is_zero(ddb.table[i].m)) match = false;
        long long want = rhs.table[i].empty() ? 0 : rhs.table[i][0];
        if (ddb.table[i].a != ((want % th.n()) + th.n()) % th.n()) match = false;
      }
      if (match) ++ok1;
    }
    // -------- lemma: d(b b') = db db' (a' cup f a)
    {
      Cochain a = random_cochain(h, e.middle().m, 1);
      ThCochain b = th_from(th, a, random_cparts(static_cast<size_t>(h.size())));
      Cochain ap = random_cocycle(h, e.middle().m);
      ThCochain bp = th_from(th, ap, random_cparts(static_cast<size_t>(h.size())));
      ThCochain dbp = serre_d(th, bp);
      bool cval = true;
      for (const auto& x : dbp.table)
        if (!th.m.m.is_zero(x.m)) cval = false;
      ThCochain lhs = serre_d(th, th_mul(th, b, bp));
      Cochain cupterm = cup(ap, apply_pointwise(cd.f, a), ev_m);
      ThCochain rhs = th_mul(th, th_mul(th, serre_d(th, b), dbp), th_embed(th, cupterm));
      if (cval && th_eq(lhs, rhs)) ++ok2;
    }
    // -------- lemma: d(s o h) = s o dh + psi_PS cup h
    {
      int k = static_cast<int>(rng.below(3));
      Cochain hc = random_cochain(h, e.first().m, k);
      ThCochain lhs = th_abelian_d(th, section_apply(hc));
      Cochain corr = cup(restrict_to(psi_ps, h), hc, ev1_swap);
      ThCochain rhs = th_mul(th, section_apply(coboundary(hc)), th_embed(th, corr));
      if (th_eq(lhs, rhs)) ++ok3;
    }
    // -------- compound lemma, both parts
    {
      Cochain ap = random_cocycle(h, e.middle().m); // a' with da' = 0
      Cochain a2 = apply_pointwise(e.pi.f, ap);
      Cochain a = lift_through(sec_pi, a2)
                      .add(apply_pointwise(e.iota.f, random_cochain(h, e.first().m, 1)));
      ThCochain b = th_from(th, a, random_cparts(static_cast<size_t>(h.size())));
      ThCochain bp = th_from(th, ap, random_cparts(static_cast<size_t>(h.size())));
      Cochain a1big = coboundary(a); // valued in iota(M1)
      Cochain a1 = preimage_pointwise(e.iota.f, a1big, iota_solver); // A_1
      ThCochain w = th_mul(th, serre_d(th, b), th_inv(th, section_apply(a1)));
      bool part1 = true;
      Cochain wc = [&] {
        try {
          return th_cpart(th, ctx.fx->c, w);
        } catch (const error&) {
          part1 = false;
          return Cochain::zero(h, ctx.fx->c, 2);
        }
      }();
      if (part1) {
        Cochain coeff = apply_pointwise(ind.f2, a2).sub(restrict_to(psi_ps, h));
        Cochain rhs = cup(coeff, a1, ev1_swap);
        if (!(coboundary(wc).table == rhs.table)) part1 = false;
      }
      if (part1) ++ok4a;
      // part 2: db' = (db - s A1) + (f2 a2 - psi) cup a1 mod coboundaries
      bool part2 = part1;
      if (part2) {
        ThCochain dbp = serre_d(th, bp);
        Cochain dbp_c = th_cpart(th, ctx.fx->c, dbp);
        Cochain small = preimage_pointwise(e.iota.f, a.sub(ap), iota_solver); // a_1
        Cochain coeff = apply_pointwise(ind.f2, a2).sub(restrict_to(psi_ps, h));
        Cochain delta = dbp_c.sub(wc).sub(cup(coeff, small, ev1_swap));
        if (!solve_coboundary(delta).has_value()) part2 = false;
      }
      if (part2) ++ok4b;
    }
  }
  auto tally = [&](const char* name, int ok) {
    rep.add(name, ok == trials ? Verdict::pass : Verdict::fail,
            std::to_string(ok) + "/" + std::to_string(trials));
  };
  tally("db valued in H1 and d(db) = -a cup (f o da)", ok1);
  tally("d(b b') = db db' (a' cup (f o a))", ok2);
  tally("d(s o h) = s o dh + psi_PS cup h", ok3);
  tally("compound part 1", ok4a);
  tally("compound part 2 (mod coboundaries)", ok4b);
  rep.add("statement-vs-proof form of the s-o-h lemma", Verdict::not_applicable,
          "the suite implements the evaluation-pairing form used in the proof; the "
          "statement's pairing through f is recorded as a discrepancy, not reconciled",
          false);
  return rep;
}

namespace {

GModule gmodule_from_json(const FixtureContext& ctx, const nlohmann::json& j) {
  std::vector<long long> inv = j.at("invariant_factors").get<std::vector<long long>>();
  FiniteAbelianGroup m(inv);
  GModule mod{ctx.fx->g, m, {}};
  const auto& actions = j.at("action");
  if (static_cast<int>(actions.size()) != ctx.fx->g.n)
    fail(errc::parse_error, "theta module needs one action matrix per group element");
  for (const auto& aj : actions) {
    Mat a(m.rank(), m.rank());
    auto rows = aj.get<std::vector<std::vector<long long>>>();
    if (static_cast<int>(rows.size()) != m.rank())
      fail(errc::parse_error, "theta module action matrix has wrong shape");
    for (int i = 0; i < m.rank(); ++i) {
      if (static_cast<int>(rows[i].size()) != m.rank())
        fail(errc::parse_error, "theta module action matrix has wrong shape");
      for (int k = 0; k < m.rank(); ++k) a.at(i, k) = rows[i][k];
    }
    mod.action.push_back(std::move(a));
  }
  std::string why;
  if (!mod.valid(&why)) fail(errc::parse_error, "theta module invalid: " + why);
  return mod;
}

} // namespace

std::vector<ThetaBlock> theta_blocks_from_json(const FixtureContext& ctx,
                                               const std::string& fixture_json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(fixture_json_text);
  } catch (const std::exception& ex) {
    fail(errc::parse_error, std::string("bad JSON: ") + ex.what());
  }
  std::vector<ThetaBlock> out;
  if (!j.contains("theta")) return out;
  for (const auto& tj : j["theta"]) {
    ThetaBlock block;
    block.name = tj.value("name", "theta");
    GModule m = gmodule_from_json(ctx, tj.at("module"));
    if (tj.contains("factor_set")) {
      ThetaPresentation th = trivial_theta(ctx.fx->c, m);
      auto fs = tj.at("factor_set").get<std::vector<std::vector<long long>>>();
      auto tw = tj.at("twist").get<std::vector<std::vector<long long>>>();
      unsigned long long size = m.m.order_ull();
      if (fs.size() != size || tw.size() != static_cast<size_t>(ctx.fx->g.n))
        fail(errc::parse_error, "theta tables have wrong shape");
      long long nn = ctx.n();
      for (unsigned long long i = 0; i < size; ++i)
        for (unsigned long long k = 0; k < size; ++k)
          th.factor[i][k] = ((fs[i][k] % nn) + nn) % nn;
      for (int g = 0; g < ctx.fx->g.n; ++g)
        for (unsigned long long k = 0; k < size; ++k)
          th.twist[g][k] = ((tw[g][k] % nn) + nn) % nn;
      Report val = th.validate();
      if (!val.all_required_pass())
        fail(errc::parse_error, "theta block '" + block.name + "' invalid:\n" + val.to_text());
      block.theta = th;
    } else if (tj.contains("P1")) {
      FiniteThetaInput in;
      in.m = m;
      std::vector<Elem> gens;
      for (const auto& gj : tj.at("M0")) gens.push_back(gj.get<Elem>());
      in.m0 = subgroup(m.m, gens);
      in.p1 = tj.at("P1").get<std::vector<std::vector<long long>>>();
      in.e = tj.at("e").get<std::vector<long long>>();
      block.theta = construct_finite_theta(ctx.fx->c, in).theta;
    } else {
      fail(errc::parse_error, "theta block needs factor_set/twist or P1/e data");
    }
    out.push_back(std::move(block));
  }
  return out;
}

} // namespace ctpair
