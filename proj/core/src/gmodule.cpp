#include "ctpair/gmodule.hpp"

namespace ctpair {

Elem GModule::act(int gidx, const Elem& x) const {
  return AbHom(m, m, action[gidx]).apply(x);
}

long long GModule::cyclic_modulus() const {
  if (m.rank() == 0) return 1;
  if (m.rank() != 1) fail(errc::invalid_argument, "module is not cyclic");
  return m.moduli[0];
}

bool GModule::valid(std::string* why) const {
  if (static_cast<int>(action.size()) != g.n) {
    if (why) *why = "one action matrix per group element required";
    return false;
  }
  for (int x = 0; x < g.n; ++x) {
    AbHom ax(m, m, action[x]);
    if (!ax.well_defined()) {
      if (why) *why = "action matrix not a homomorphism";
      return false;
    }
  }
  AbHom id = AbHom::identity(m);
  if (!(AbHom(m, m, action[g.identity]) == id)) {
    if (why) *why = "identity does not act trivially";
    return false;
  }
  for (int x = 0; x < g.n; ++x) {
    for (int y = 0; y < g.n; ++y) {
      AbHom ax(m, m, action[x]), ay(m, m, action[y]);
      AbHom axy(m, m, action[g.mul(x, y)]);
      if (!(ax.compose(ay) == axy)) {
        if (why) *why = "action is not multiplicative";
        return false;
      }
    }
    AbHom ax(m, m, action[x]), axinv(m, m, action[g.inv(x)]);
    if (!(ax.compose(axinv) == id)) {
      if (why) *why = "action not invertible";
      return false;
    }
  }
  return true;
}

bool GModule::operator==(const GModule& o) const {
  return g == o.g && m == o.m && action == o.action;
}

GModule trivial_gmodule(const FiniteGroup& g, const FiniteAbelianGroup& m) {
  GModule mod{g, m, std::vector<Mat>(g.n, Mat::identity(m.rank()))};
  return mod;
}

GModule cyclic_coefficient(const FiniteGroup& g, long long n,
                           const std::vector<long long>& units) {
  if (static_cast<int>(units.size()) != g.n)
    fail(errc::invalid_argument, "one unit per group element required");
  GModule c{g, cyclic_group(n), {}};
  for (int x = 0; x < g.n; ++x) {
    Mat a(1, 1);
    a.at(0, 0) = units[x];
    c.action.push_back(std::move(a));
  }
  std::string why;
  if (!c.valid(&why)) fail(errc::invalid_argument, "coefficient module invalid: " + why);
  return c;
}

GModuleHom::GModuleHom(GModule s, GModule t, Mat mat)
    : source(std::move(s)), target(std::move(t)), m(std::move(mat)) {
  if (!(source.g == target.g)) fail(errc::group_mismatch, "hom between modules over different groups");
  if (m.rows != target.m.rank() || m.cols != source.m.rank())
    fail(errc::invalid_argument, "module hom matrix shape mismatch");
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) {
      m.at(i, j) %= target.m.moduli[i];
      if (m.at(i, j) < 0) m.at(i, j) += target.m.moduli[i];
    }
}

GModuleHom GModuleHom::identity(const GModule& g) {
  return GModuleHom(g, g, Mat::identity(g.m.rank()));
}

GModuleHom GModuleHom::zero(const GModule& s, const GModule& t) {
  return GModuleHom(s, t, Mat(t.m.rank(), s.m.rank()));
}

GModuleHom GModuleHom::compose(const GModuleHom& inner) const {
  if (!(inner.target == source)) fail(errc::group_mismatch, "module hom composition mismatch");
  return GModuleHom(inner.source, target, m * inner.m);
}

GModuleHom GModuleHom::plus(const GModuleHom& o) const {
  Mat s = m;
  for (size_t i = 0; i < s.a.size(); ++i) s.a[i] += o.m.a[i];
  return GModuleHom(source, target, std::move(s));
}

GModuleHom GModuleHom::negated() const {
  Mat s = m;
  for (auto& x : s.a) x = -x;
  return GModuleHom(source, target, std::move(s));
}

bool GModuleHom::operator==(const GModuleHom& o) const {
  return source == o.source && target == o.target && m == o.m;
}

bool check_equivariance(const GModuleHom& f, int* witness) {
  const FiniteGroup& g = f.source.g;
  for (int x = 0; x < g.n; ++x) {
    AbHom lhs = f.ab().compose(AbHom(f.source.m, f.source.m, f.source.action[x]));
    AbHom rhs = AbHom(f.target.m, f.target.m, f.target.action[x]).compose(f.ab());
    if (!(lhs == rhs)) {
      if (witness) *witness = x;
      return false;
    }
  }
  return true;
}

Elem GBilinear::eval(const Elem& x, const Elem& y) const {
  Elem acc = target.m.zero();
  for (int i = 0; i < left.m.rank(); ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < right.m.rank(); ++j) {
      if (y[j] == 0) continue;
      acc = target.m.add(acc, target.m.smul(x[i] * y[j] % target.m.exponent(), vals[i][j]));
    }
  }
  return acc;
}

bool GBilinear::well_defined() const {
  for (int i = 0; i < left.m.rank(); ++i)
    for (int j = 0; j < right.m.rank(); ++j) {
      if (!target.m.is_zero(target.m.smul(left.m.moduli[i], vals[i][j]))) return false;
      if (!target.m.is_zero(target.m.smul(right.m.moduli[j], vals[i][j]))) return false;
    }
  return true;
}

bool GBilinear::equivariant(int* witness) const {
  const FiniteGroup& g = left.g;
  for (int s = 0; s < g.n; ++s) {
    for (int i = 0; i < left.m.rank(); ++i)
      for (int j = 0; j < right.m.rank(); ++j) {
        Elem lhs = eval(left.act(s, left.m.generator(i)), right.act(s, right.m.generator(j)));
        Elem rhs = target.act(s, vals[i][j]);
        if (lhs != rhs) {
          if (witness) *witness = s;
          return false;
        }
      }
  }
  return true;
}

BilinearForm as_form(const GBilinear& p) {
  if (p.target.m.rank() > 1) fail(errc::invalid_argument, "pairing target is not cyclic");
  long long n = p.target.cyclic_modulus();
  Mat vals(p.left.m.rank(), p.right.m.rank());
  for (int i = 0; i < p.left.m.rank(); ++i)
    for (int j = 0; j < p.right.m.rank(); ++j)
      vals.at(i, j) = p.vals[i][j].empty() ? 0 : p.vals[i][j][0];
  return BilinearForm{p.left.m, p.right.m, n, std::move(vals)};
}

GModule dual_module(const GModule& m, const GModule& c) {
  long long n = c.cyclic_modulus();
  if (n % std::max<long long>(m.m.exponent(), 1) != 0)
    fail(errc::exponent_mismatch, "module exponent does not divide coefficient modulus");
  GModule d{m.g, m.m, {}}; // Hom(M, C) has the same moduli
  int r = m.m.rank();
  for (int s = 0; s < m.g.n; ++s) {
    int sinv = m.g.inv(s);
    long long cs = c.m.rank() ? c.action[s].at(0, 0).convert_to<long long>() : 1;
    Mat b(r, r);
    for (int t = 0; t < r; ++t) {
      // image of dual basis vector e_t: (s.f)(e_j) = c_s * f(s^{-1} e_j)
      for (int j = 0; j < r; ++j) {
        Int v = 0;
        v = cs * m.action[sinv].at(t, j) % n * (n / m.m.moduli[t]) % n;
        if (v < 0) v += n;
        long long scale = n / m.m.moduli[j];
        if (v % scale != 0) fail(errc::not_realizable, "dual action not divisible");
        b.at(j, t) = v / scale;
      }
    }
    d.action.push_back(std::move(b));
  }
  return d;
}

Elem hom_to_dual_coords(const GModule& m, const GModule& c, const Elem& values_on_gens) {
  long long n = c.cyclic_modulus();
  Elem out(m.m.rank());
  for (int i = 0; i < m.m.rank(); ++i) {
    long long scale = n / m.m.moduli[i];
    long long v = ((values_on_gens[i] % n) + n) % n;
    if (v % scale != 0) fail(errc::not_realizable, "values do not define a homomorphism");
    out[i] = (v / scale) % m.m.moduli[i];
  }
  return out;
}

Elem dual_coords_to_values(const GModule& m, const GModule& c, const Elem& dual_coords) {
  long long n = c.cyclic_modulus();
  Elem out(m.m.rank());
  for (int i = 0; i < m.m.rank(); ++i)
    out[i] = dual_coords[i] * (n / m.m.moduli[i]) % n;
  return out;
}

long long eval_dual(const GModule& m, const GModule& c, const Elem& x, const Elem& dual_coords) {
  long long n = c.cyclic_modulus();
  Int acc = 0;
  for (int i = 0; i < m.m.rank(); ++i)
    acc += Int(dual_coords[i]) * x[i] % n * (n / m.m.moduli[i]);
  acc %= n;
  if (acc < 0) acc += n;
  return acc.convert_to<long long>();
}

GBilinear evaluation_pairing(const GModule& m, const GModule& c) {
  GModule d = dual_module(m, c);
  long long n = c.cyclic_modulus();
  GBilinear p{m, d, c, {}};
  p.vals.assign(m.m.rank(), std::vector<Elem>(m.m.rank(), c.m.zero()));
  for (int i = 0; i < m.m.rank(); ++i)
    p.vals[i][i] = Elem{n / m.m.moduli[i]};
  return p;
}

GBilinear swap_pairing(const GBilinear& p) {
  GBilinear q{p.right, p.left, p.target, {}};
  q.vals.assign(p.right.m.rank(), std::vector<Elem>(p.left.m.rank()));
  for (int i = 0; i < p.left.m.rank(); ++i)
    for (int j = 0; j < p.right.m.rank(); ++j) q.vals[j][i] = p.vals[i][j];
  return q;
}

GModuleHom dual_hom(const GModuleHom& f, const GModule& c) {
  GModule sd = dual_module(f.target, c); // (target)^dual is the new source
  GModule td = dual_module(f.source, c);
  long long n = c.cyclic_modulus();
  int rs = f.source.m.rank(), rt = f.target.m.rank();
  Mat out(rs, rt);
  for (int t = 0; t < rt; ++t) {
    // phi = dual basis t of target^dual; (phi o f)(e_i) = phi(f(e_i))
    for (int i = 0; i < rs; ++i) {
      Int v = f.m.at(t, i) * (n / f.target.m.moduli[t]) % n;
      if (v < 0) v += n;
      long long scale = n / f.source.m.moduli[i];
      if (v % scale != 0) fail(errc::not_realizable, "dual hom not divisible");
      out.at(i, t) = v / scale;
    }
  }
  return GModuleHom(sd, td, std::move(out));
}

GModuleHom double_dual_map(const GModule& m, const GModule& c) {
  GModule dd = dual_module(dual_module(m, c), c);
  return GModuleHom(m, dd, Mat::identity(m.m.rank()));
}

GModule submodule(const GModule& m, const SubgroupPresentation& s, GModuleHom* incl) {
  if (!(s.ambient == m.m)) fail(errc::mismatched_ambient, "submodule ambient mismatch");
  Solver sv(s.inclusion);
  GModule sub{m.g, s.carrier, {}};
  for (int g = 0; g < m.g.n; ++g) {
    Mat a(s.carrier.rank(), s.carrier.rank());
    for (int t = 0; t < s.carrier.rank(); ++t) {
      Elem moved = m.act(g, s.inclusion.apply(s.carrier.generator(t)));
      auto back = sv.solve(moved);
      if (!back) fail(errc::invalid_argument, "subgroup is not G-stable");
      for (int i = 0; i < s.carrier.rank(); ++i) a.at(i, t) = (*back)[i];
    }
    sub.action.push_back(std::move(a));
  }
  if (incl) *incl = GModuleHom(sub, m, s.inclusion.m);
  return sub;
}

GModule quotient_module(const GModule& m, const SubgroupPresentation& s, GModuleHom* proj_out) {
  auto [q, proj] = quotient(m.m, s);
  Solver sv(proj);
  GModule qm{m.g, q, {}};
  for (int g = 0; g < m.g.n; ++g) {
    Mat a(q.rank(), q.rank());
    for (int t = 0; t < q.rank(); ++t) {
      auto lift = sv.solve(q.generator(t));
      if (!lift) fail(errc::invalid_argument, "quotient projection not surjective");
      Elem moved = proj.apply(m.act(g, *lift));
      for (int i = 0; i < q.rank(); ++i) a.at(i, t) = moved[i];
    }
    qm.action.push_back(std::move(a));
  }
  // well-definedness requires S to be G-stable
  for (int g = 0; g < m.g.n; ++g) {
    AbHom lhs = AbHom(q, q, qm.action[g]).compose(proj);
    AbHom rhs = proj.compose(AbHom(m.m, m.m, m.action[g]));
    if (!(lhs == rhs)) fail(errc::invalid_argument, "subgroup is not G-stable (quotient)");
  }
  if (proj_out) *proj_out = GModuleHom(m, qm, proj.m);
  return qm;
}

GModule torsion_submodule(const GModule& m, long long k, GModuleHom* incl) {
  SubgroupPresentation ker = kernel(multiplication_by(k, m).ab());
  return submodule(m, ker, incl);
}

ModuleSum direct_sum_modules(const GModule& a, const GModule& b) {
  if (!(a.g == b.g)) fail(errc::group_mismatch, "direct sum over different groups");
  FiniteAbelianGroup total = concat_groups(a.m, b.m);
  GModule t{a.g, total, {}};
  int ra = a.m.rank(), rb = b.m.rank();
  for (int g = 0; g < a.g.n; ++g) {
    Mat m(ra + rb, ra + rb);
    for (int i = 0; i < ra; ++i)
      for (int j = 0; j < ra; ++j) m.at(i, j) = a.action[g].at(i, j);
    for (int i = 0; i < rb; ++i)
      for (int j = 0; j < rb; ++j) m.at(ra + i, ra + j) = b.action[g].at(i, j);
    t.action.push_back(std::move(m));
  }
  Mat i1(ra + rb, ra), i2(ra + rb, rb), p1(ra, ra + rb), p2(rb, ra + rb);
  for (int i = 0; i < ra; ++i) { i1.at(i, i) = 1; p1.at(i, i) = 1; }
  for (int i = 0; i < rb; ++i) { i2.at(ra + i, i) = 1; p2.at(i, ra + i) = 1; }
  ModuleSum out{t, GModuleHom(a, t, std::move(i1)), GModuleHom(b, t, std::move(i2)),
                GModuleHom(t, a, std::move(p1)), GModuleHom(t, b, std::move(p2))};
  return out;
}

GModuleHom multiplication_by(long long k, const GModule& m) {
  Mat a = Mat::identity(m.m.rank());
  for (auto& x : a.a) x *= k;
  return GModuleHom(m, m, std::move(a));
}

std::vector<GModuleHom> all_equivariant_homs(const GModule& source, const GModule& target) {
  int r = source.m.rank();
  unsigned long long tsize = target.m.order_ull();
  if (tsize > (1ULL << 20)) fail(errc::invalid_argument, "hom enumeration too large");
  // candidate images per generator: elements killed by the generator's order
  std::vector<std::vector<Elem>> cand(r);
  for (int i = 0; i < r; ++i)
    for (unsigned long long idx = 0; idx < tsize; ++idx) {
      Elem x = target.m.element_at(idx);
      if (target.m.is_zero(target.m.smul(source.m.moduli[i], x))) cand[i].push_back(x);
    }
  unsigned long long count = 1;
  for (int i = 0; i < r; ++i) {
    if (count > (1ULL << 22) / std::max<size_t>(cand[i].size(), 1))
      fail(errc::invalid_argument, "hom enumeration too large");
    count *= cand[i].empty() ? 1 : cand[i].size();
  }
  std::vector<GModuleHom> out;
  if (r == 0) {
    out.push_back(GModuleHom::zero(source, target));
    return out;
  }
  std::vector<size_t> pick(r, 0);
  while (true) {
    Mat m(target.m.rank(), r);
    for (int j = 0; j < r; ++j)
      for (int i = 0; i < target.m.rank(); ++i) m.at(i, j) = cand[j][pick[j]][i];
    GModuleHom f(source, target, std::move(m));
    if (check_equivariance(f)) out.push_back(f);
    int j = r - 1;
    while (j >= 0 && ++pick[j] == cand[j].size()) pick[j--] = 0;
    if (j < 0) break;
  }
  return out;
}

} // namespace ctpair
