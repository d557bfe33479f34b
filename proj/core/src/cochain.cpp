#include "ctpair/cochain.hpp"

#include <cmath>

namespace ctpair {

namespace {

unsigned long long ipow(unsigned long long b, int e) {
  unsigned long long r = 1;
  while (e-- > 0) {
    if (b != 0 && r > (1ULL << 62) / b) fail(errc::invalid_argument, "cochain table too large");
    r *= b;
  }
  return r;
}

void check_degree(int degree) {
  if (degree < 0 || degree > kMaxDegree) fail(errc::degree_too_high, "cochain degree out of range");
}

} // namespace

Cochain Cochain::zero(const Subgroup& h, const GModule& m, int degree) {
  check_degree(degree);
  Cochain c{h, m, degree, {}};
  c.table.assign(ipow(h.size(), degree), m.m.zero());
  return c;
}

unsigned long long Cochain::index(const std::vector<int>& locals) const {
  unsigned long long idx = 0;
  for (int s : locals) idx = idx * h.size() + static_cast<unsigned long long>(s);
  return idx;
}

std::vector<int> Cochain::tuple_at(unsigned long long idx) const {
  std::vector<int> t(degree);
  for (int k = degree - 1; k >= 0; --k) {
    t[k] = static_cast<int>(idx % h.size());
    idx /= h.size();
  }
  return t;
}

Cochain Cochain::add(const Cochain& o) const {
  if (!same_shape(o)) fail(errc::group_mismatch, "cochain shape mismatch");
  Cochain r = *this;
  for (size_t i = 0; i < table.size(); ++i) r.table[i] = m.m.add(table[i], o.table[i]);
  return r;
}

Cochain Cochain::sub(const Cochain& o) const {
  if (!same_shape(o)) fail(errc::group_mismatch, "cochain shape mismatch");
  Cochain r = *this;
  for (size_t i = 0; i < table.size(); ++i) r.table[i] = m.m.sub(table[i], o.table[i]);
  return r;
}

Cochain Cochain::neg() const {
  Cochain r = *this;
  for (auto& e : r.table) e = m.m.neg(e);
  return r;
}

Cochain Cochain::smul(long long k) const {
  Cochain r = *this;
  for (auto& e : r.table) e = m.m.smul(k, e);
  return r;
}

bool Cochain::is_zero() const {
  for (const auto& e : table)
    if (!m.m.is_zero(e)) return false;
  return true;
}

bool Cochain::same_shape(const Cochain& o) const {
  return h == o.h && m.m == o.m.m && degree == o.degree;
}

FiniteAbelianGroup cochain_space(const Subgroup& h, const GModule& m, int degree) {
  check_degree(degree);
  unsigned long long t = ipow(h.size(), degree);
  std::vector<long long> moduli;
  moduli.reserve(t * m.m.rank());
  for (unsigned long long i = 0; i < t; ++i)
    moduli.insert(moduli.end(), m.m.moduli.begin(), m.m.moduli.end());
  return FiniteAbelianGroup(moduli);
}

Elem flatten(const Cochain& c) {
  Elem out;
  out.reserve(c.table.size() * c.m.m.rank());
  for (const auto& e : c.table) out.insert(out.end(), e.begin(), e.end());
  return out;
}

Cochain unflatten(const Subgroup& h, const GModule& m, int degree, const Elem& coords) {
  Cochain c = Cochain::zero(h, m, degree);
  int r = m.m.rank();
  if (coords.size() != c.table.size() * static_cast<size_t>(r))
    fail(errc::invalid_argument, "unflatten size mismatch");
  for (size_t i = 0; i < c.table.size(); ++i)
    c.table[i] = m.m.reduce(Elem(coords.begin() + i * r, coords.begin() + (i + 1) * r));
  return c;
}

// Terms of the coboundary formula: output tuple -> (input tuple, sign, acting element or -1).
namespace {
struct BoundaryTerm {
  std::vector<int> input;
  int sign;
  int actor; // parent index acting on the value, or -1 for none
};

std::vector<BoundaryTerm> boundary_terms(const Subgroup& h, const std::vector<int>& out, int i) {
  std::vector<BoundaryTerm> terms;
  // sigma_1 f(sigma_2 .. sigma_{i+1})
  terms.push_back({std::vector<int>(out.begin() + 1, out.end()), 1, h.parent_of(out[0])});
  // middle terms
  for (int j = 1; j <= i; ++j) {
    std::vector<int> in;
    in.reserve(i);
    for (int k = 0; k < j - 1; ++k) in.push_back(out[k]);
    in.push_back(h.mul(out[j - 1], out[j]));
    for (int k = j + 1; k <= i; ++k) in.push_back(out[k]);
    terms.push_back({std::move(in), (j % 2 == 0) ? 1 : -1, -1});
  }
  // (-1)^{i+1} f(sigma_1 .. sigma_i)
  terms.push_back({std::vector<int>(out.begin(), out.begin() + i), (i % 2 == 0) ? -1 : 1, -1});
  return terms;
}
} // namespace

Cochain coboundary(const Cochain& c) {
  if (c.degree >= kMaxDegree) fail(errc::degree_too_high, "coboundary would exceed max degree");
  Cochain d = Cochain::zero(c.h, c.m, c.degree + 1);
  for (unsigned long long oi = 0; oi < d.tuples(); ++oi) {
    std::vector<int> out = d.tuple_at(oi);
    Elem acc = c.m.m.zero();
    for (const auto& t : boundary_terms(c.h, out, c.degree)) {
      Elem v = c.table[c.index(t.input)];
      if (t.actor >= 0) v = c.m.act(t.actor, v);
      acc = t.sign > 0 ? c.m.m.add(acc, v) : c.m.m.sub(acc, v);
    }
    d.table[oi] = acc;
  }
  return d;
}

AbHom coboundary_hom(const Subgroup& h, const GModule& m, int degree) {
  check_degree(degree + 1);
  FiniteAbelianGroup src = cochain_space(h, m, degree);
  FiniteAbelianGroup tgt = cochain_space(h, m, degree + 1);
  int r = m.m.rank();
  Mat mat(tgt.rank(), src.rank());
  Cochain proto = Cochain::zero(h, m, degree + 1);
  Cochain protoin = Cochain::zero(h, m, degree);
  for (unsigned long long oi = 0; oi < proto.tuples(); ++oi) {
    std::vector<int> out = proto.tuple_at(oi);
    for (const auto& t : boundary_terms(h, out, degree)) {
      unsigned long long ii = protoin.index(t.input);
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) {
          Int w = (t.actor >= 0) ? m.action[t.actor].at(a, b) : (a == b ? Int(1) : Int(0));
          if (w == 0) continue;
          mat.at(static_cast<int>(oi) * r + a, static_cast<int>(ii) * r + b) +=
              t.sign > 0 ? w : -w;
        }
    }
  }
  return AbHom(src, tgt, std::move(mat));
}

Cochain cup(const Cochain& a, const Cochain& b, const GBilinear& p) {
  if (!(a.h == b.h)) fail(errc::group_mismatch, "cup over different groups");
  if (!(a.m.m == p.left.m) || !(b.m.m == p.right.m))
    fail(errc::group_mismatch, "cup pairing modules mismatch");
  int deg = a.degree + b.degree;
  check_degree(deg);
  Cochain out = Cochain::zero(a.h, p.target, deg);
  for (unsigned long long oi = 0; oi < out.tuples(); ++oi) {
    std::vector<int> t = out.tuple_at(oi);
    std::vector<int> left(t.begin(), t.begin() + a.degree);
    std::vector<int> right(t.begin() + a.degree, t.end());
    int g = a.h.parent.identity;
    for (int s : left) g = a.h.parent.mul(g, a.h.parent_of(s));
    Elem bv = p.right.act(g, b.table[b.index(right)]);
    out.table[oi] = p.eval(a.table[a.index(left)], bv);
  }
  return out;
}

Cochain restrict_to(const Cochain& c, const Subgroup& hsub) {
  if (!hsub.is_subgroup_of(c.h)) fail(errc::not_a_subgroup, "restriction target not a subgroup");
  Cochain out = Cochain::zero(hsub, c.m, c.degree);
  for (unsigned long long oi = 0; oi < out.tuples(); ++oi) {
    std::vector<int> t = out.tuple_at(oi);
    std::vector<int> big(t.size());
    for (size_t k = 0; k < t.size(); ++k) big[k] = c.h.local_of(hsub.parent_of(t[k]));
    out.table[oi] = c.table[c.index(big)];
  }
  return out;
}

Cochain apply_pointwise(const GModuleHom& f, const Cochain& c) {
  if (!(f.source.m == c.m.m)) fail(errc::group_mismatch, "pointwise hom source mismatch");
  Cochain out = Cochain::zero(c.h, f.target, c.degree);
  for (size_t i = 0; i < c.table.size(); ++i) out.table[i] = f.apply(c.table[i]);
  return out;
}

Cochain preimage_pointwise(const GModuleHom& f, const Cochain& c) {
  Solver sv(f.ab());
  return preimage_pointwise(f, c, sv);
}

Cochain preimage_pointwise(const GModuleHom& f, const Cochain& c, const Solver& fsolver) {
  if (!(f.target.m == c.m.m)) fail(errc::group_mismatch, "pointwise preimage target mismatch");
  Cochain out = Cochain::zero(c.h, f.source, c.degree);
  for (size_t i = 0; i < c.table.size(); ++i) {
    auto x = fsolver.solve(c.table[i]);
    if (!x) fail(errc::no_solution, "cochain value not in the image");
    out.table[i] = *x;
  }
  return out;
}

SetSection make_section(const GModuleHom& pi) {
  unsigned long long ssize = pi.source.m.order_ull();
  unsigned long long tsize = pi.target.m.order_ull();
  if (ssize > (1ULL << 20)) fail(errc::invalid_argument, "section enumeration too large");
  SetSection s{pi, std::vector<Elem>(tsize)};
  std::vector<bool> seen(tsize, false);
  unsigned long long found = 0;
  for (unsigned long long i = 0; i < ssize && found < tsize; ++i) {
    Elem x = pi.source.m.element_at(i);
    unsigned long long ti = pi.target.m.index_of(pi.apply(x));
    if (!seen[ti]) {
      seen[ti] = true;
      s.lift_of[ti] = x;
      ++found;
    }
  }
  if (found < tsize) fail(errc::not_surjective, "hom admits no set-section");
  return s;
}

Elem SetSection::lift(const Elem& target_elem) const {
  return lift_of[pi.target.m.index_of(target_elem)];
}

Cochain lift_through(const SetSection& s, const Cochain& a) {
  if (!(s.pi.target.m == a.m.m)) fail(errc::group_mismatch, "lift target mismatch");
  Cochain out = Cochain::zero(a.h, s.pi.source, a.degree);
  for (size_t i = 0; i < a.table.size(); ++i) out.table[i] = s.lift(a.table[i]);
  return out;
}

CohomologyGroup cohomology(const Subgroup& h, const GModule& m, int degree) {
  if (degree > 3) fail(errc::degree_too_high, "cohomology supported up to degree 3");
  CohomologyGroup out;
  out.h = h;
  out.m = m;
  out.degree = degree;
  AbHom d = coboundary_hom(h, m, degree);
  out.cocycles = kernel(d);
  out.cocycle_solver = Solver(out.cocycles.inclusion);
  SubgroupPresentation b_in_z = [&] {
    if (degree == 0) return trivial_subgroup(out.cocycles.carrier);
    AbHom dprev = coboundary_hom(h, m, degree - 1);
    SubgroupPresentation b = image(dprev);
    std::vector<Elem> gens_in_z;
    for (const Elem& g : b.generators()) {
      auto x = out.cocycle_solver.solve(g);
      if (!x) fail(errc::invalid_argument, "coboundary is not a cocycle"); // d∘d = 0 violated
      gens_in_z.push_back(*x);
    }
    return subgroup(out.cocycles.carrier, gens_in_z);
  }();
  auto [q, proj] = quotient(out.cocycles.carrier, b_in_z);
  out.carrier = q;
  out.project = proj;
  Solver psolve(proj);
  for (int t = 0; t < q.rank(); ++t) {
    auto y = psolve.solve(q.generator(t));
    if (!y) fail(errc::invalid_argument, "projection not surjective");
    out.reps.push_back(unflatten(h, m, degree, out.cocycles.inclusion.apply(*y)));
  }
  return out;
}

bool CohomologyGroup::is_cocycle(const Cochain& z) const {
  return cocycle_solver.solvable(flatten(z));
}

Elem CohomologyGroup::reduce(const Cochain& z) const {
  auto x = cocycle_solver.solve(flatten(z));
  if (!x) fail(errc::not_a_cocycle, "reduce applied to a non-cocycle");
  return project.apply(*x);
}

Cochain CohomologyGroup::rep_of(const Elem& x) const {
  Cochain out = Cochain::zero(h, m, degree);
  for (int t = 0; t < carrier.rank(); ++t)
    if (x[t] != 0) out = out.add(reps[t].smul(x[t]));
  return out;
}

std::optional<Cochain> solve_coboundary(const Cochain& z) {
  if (z.degree < 1) fail(errc::invalid_argument, "solve_coboundary needs degree >= 1");
  Solver s(coboundary_hom(z.h, z.m, z.degree - 1));
  return solve_coboundary(z, s);
}

std::optional<Cochain> solve_coboundary(const Cochain& z, const Solver& boundary_below) {
  auto x = boundary_below.solve(flatten(z));
  if (!x) return std::nullopt;
  return unflatten(z.h, z.m, z.degree - 1, *x);
}

} // namespace ctpair
