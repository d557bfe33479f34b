#include "ctpair/abelian.hpp"

#include <algorithm>
#include <numeric>

namespace ctpair {

const char* errc_name(errc c) {
  switch (c) {
    case errc::no_solution: return "NoSolution";
    case errc::mismatched_ambient: return "MismatchedAmbient";
    case errc::not_bilinear: return "NotBilinear";
    case errc::exponent_mismatch: return "ExponentMismatch";
    case errc::degree_too_high: return "DegreeTooHigh";
    case errc::group_mismatch: return "GroupMismatch";
    case errc::not_a_subgroup: return "NotASubgroup";
    case errc::not_surjective: return "NotSurjective";
    case errc::not_a_cocycle: return "NotACocycle";
    case errc::obstruction_in_h3: return "ObstructionInH3";
    case errc::no_local_lift: return "NoLocalLift";
    case errc::not_in_selmer: return "NotInSelmer";
    case errc::incompatible_ends: return "IncompatibleEnds";
    case errc::not_commutative_ladder: return "NotCommutativeLadder";
    case errc::not_a_section: return "NotASection";
    case errc::not_realizable: return "NotRealizable";
    case errc::assumption_one_fails: return "AssumptionOneFails";
    case errc::no_homomorphic_section: return "NoHomomorphicSection";
    case errc::doubling_not_surjective: return "DoublingNotSurjective";
    case errc::bad_quadratic_refinement: return "BadQuadraticRefinement";
    case errc::not_strictly_epic: return "NotStrictlyEpic";
    case errc::parse_error: return "ParseError";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat Mat::operator*(const Mat& o) const {
  if (cols != o.rows) fail(errc::invalid_argument, "matrix product shape mismatch");
  Mat r(rows, o.cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const Int& x = at(i, k);
      if (x == 0) continue;
      for (int j = 0; j < o.cols; ++j) r.at(i, j) += x * o.at(k, j);
    }
  return r;
}

Mat Mat::transposed() const {
  Mat r(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
  return r;
}

std::vector<Int> SnfResult::diag() const {
  std::vector<Int> out;
  int n = std::min(d.rows, d.cols);
  for (int i = 0; i < n; ++i) out.push_back(d.at(i, i));
  return out;
}

namespace {

struct SnfWork {
  Mat d, u, uinv, v;

  void row_swap(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < d.cols; ++c) std::swap(d.at(i, c), d.at(j, c));
    for (int c = 0; c < u.cols; ++c) std::swap(u.at(i, c), u.at(j, c));
    for (int r = 0; r < uinv.rows; ++r) std::swap(uinv.at(r, i), uinv.at(r, j));
  }
  void col_swap(int i, int j) {
    if (i == j) return;
    for (int r = 0; r < d.rows; ++r) std::swap(d.at(r, i), d.at(r, j));
    for (int r = 0; r < v.rows; ++r) std::swap(v.at(r, i), v.at(r, j));
  }
  // row i -= q * row t
  void row_sub(int i, int t, const Int& q) {
    if (q == 0) return;
    for (int c = 0; c < d.cols; ++c) d.at(i, c) -= q * d.at(t, c);
    for (int c = 0; c < u.cols; ++c) u.at(i, c) -= q * u.at(t, c);
    for (int r = 0; r < uinv.rows; ++r) uinv.at(r, t) += q * uinv.at(r, i);
  }
  void col_sub(int j, int t, const Int& q) {
    if (q == 0) return;
    for (int r = 0; r < d.rows; ++r) d.at(r, j) -= q * d.at(r, t);
    for (int r = 0; r < v.rows; ++r) v.at(r, j) -= q * v.at(r, t);
  }
  void row_negate(int i) {
    for (int c = 0; c < d.cols; ++c) d.at(i, c) = -d.at(i, c);
    for (int c = 0; c < u.cols; ++c) u.at(i, c) = -u.at(i, c);
    for (int r = 0; r < uinv.rows; ++r) uinv.at(r, i) = -uinv.at(r, i);
  }
  void col_add_into(int t, int j) { // col t += col j
    for (int r = 0; r < d.rows; ++r) d.at(r, t) += d.at(r, j);
    for (int r = 0; r < v.rows; ++r) v.at(r, t) += v.at(r, j);
  }
};

Int ifloor_div(const Int& a, const Int& b) {
  Int q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

} // namespace

SnfResult smith_normal_form(const Mat& a) {
  SnfWork w;
  w.d = a;
  w.u = Mat::identity(a.rows);
  w.uinv = Mat::identity(a.rows);
  w.v = Mat::identity(a.cols);
  const int n = std::min(a.rows, a.cols);
  int t = 0;
  while (t < n) {
    // pivot: smallest nonzero absolute value in the trailing submatrix
    int pi = -1, pj = -1;
    Int best = 0;
    for (int i = t; i < a.rows; ++i)
      for (int j = t; j < a.cols; ++j) {
        const Int& x = w.d.at(i, j);
        if (x == 0) continue;
        Int ax = abs(x);
        if (pi < 0 || ax < best) { best = ax; pi = i; pj = j; }
      }
    if (pi < 0) break; // all zero
    w.row_swap(t, pi);
    w.col_swap(t, pj);
    bool clean = true;
    for (int i = t + 1; i < a.rows; ++i) {
      if (w.d.at(i, t) == 0) continue;
      Int q = ifloor_div(w.d.at(i, t), w.d.at(t, t));
      w.row_sub(i, t, q);
      if (w.d.at(i, t) != 0) clean = false;
    }
    for (int j = t + 1; j < a.cols; ++j) {
      if (w.d.at(t, j) == 0) continue;
      Int q = ifloor_div(w.d.at(t, j), w.d.at(t, t));
      w.col_sub(j, t, q);
      if (w.d.at(t, j) != 0) clean = false;
    }
    if (!clean) continue; // smaller remainders exist, repick pivot
    if (w.d.at(t, t) < 0) w.row_negate(t);
    // divisibility: pivot must divide the rest of the submatrix
    bool divides = true;
    for (int i = t + 1; i < a.rows && divides; ++i)
      for (int j = t + 1; j < a.cols && divides; ++j)
        if (w.d.at(i, j) % w.d.at(t, t) != 0) {
          w.col_add_into(t, j);
          divides = false;
        }
    if (!divides) continue;
    ++t;
  }
  SnfResult r;
  r.rank = t;
  r.d = std::move(w.d);
  r.u = std::move(w.u);
  r.v = std::move(w.v);
  r.uinv = std::move(w.uinv);
  return r;
}

bool is_unimodular(const Mat& a) {
  if (a.rows != a.cols) return false;
  return abs(det(a)) == 1;
}

Int det(const Mat& a) {
  if (a.rows != a.cols) fail(errc::invalid_argument, "det of non-square matrix");
  // fraction-free Gaussian elimination (Bareiss)
  Mat m = a;
  int n = a.rows;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m.at(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (m.at(i, k) != 0) { p = i; break; }
      if (p < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
      }
    prev = m.at(k, k);
  }
  return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<long long> m) : moduli(std::move(m)) {
  for (long long d : moduli)
    if (d < 2) fail(errc::invalid_argument, "group modulus must be >= 2");
}

Int FiniteAbelianGroup::order() const {
  Int o = 1;
  for (long long d : moduli) o *= d;
  return o;
}

unsigned long long FiniteAbelianGroup::order_ull() const {
  unsigned long long o = 1;
  for (long long d : moduli) {
    if (o > (1ULL << 62) / static_cast<unsigned long long>(d))
      fail(errc::invalid_argument, "group too large to enumerate");
    o *= static_cast<unsigned long long>(d);
  }
  return o;
}

long long FiniteAbelianGroup::exponent() const {
  long long e = 1;
  for (long long d : moduli) e = std::lcm(e, d);
  return e;
}

bool FiniteAbelianGroup::is_invariant_chain() const {
  for (size_t i = 0; i + 1 < moduli.size(); ++i)
    if (moduli[i + 1] % moduli[i] != 0) return false;
  return true;
}

std::vector<long long> FiniteAbelianGroup::canonical_factors() const {
  if (moduli.empty() || is_invariant_chain()) return moduli;
  int n = rank();
  Mat diag(n, n);
  for (int i = 0; i < n; ++i) diag.at(i, i) = moduli[i];
  SnfResult s = smith_normal_form(diag);
  std::vector<long long> out;
  for (const Int& d : s.diag())
    if (d > 1) out.push_back(d.convert_to<long long>());
  return out;
}

bool FiniteAbelianGroup::isomorphic(const FiniteAbelianGroup& o) const {
  return canonical_factors() == o.canonical_factors();
}

Elem FiniteAbelianGroup::reduce(Elem e) const {
  if (static_cast<int>(e.size()) != rank())
    fail(errc::invalid_argument, "element rank mismatch");
  for (int i = 0; i < rank(); ++i) {
    e[i] %= moduli[i];
    if (e[i] < 0) e[i] += moduli[i];
  }
  return e;
}

Elem FiniteAbelianGroup::add(const Elem& x, const Elem& y) const {
  Elem r(rank());
  for (int i = 0; i < rank(); ++i) r[i] = (x[i] + y[i]) % moduli[i];
  return r;
}

Elem FiniteAbelianGroup::sub(const Elem& x, const Elem& y) const {
  Elem r(rank());
  for (int i = 0; i < rank(); ++i) r[i] = ((x[i] - y[i]) % moduli[i] + moduli[i]) % moduli[i];
  return r;
}

Elem FiniteAbelianGroup::neg(const Elem& x) const {
  Elem r(rank());
  for (int i = 0; i < rank(); ++i) r[i] = (moduli[i] - x[i]) % moduli[i];
  return r;
}

Elem FiniteAbelianGroup::smul(long long k, const Elem& x) const {
  Elem r(rank());
  for (int i = 0; i < rank(); ++i) {
    long long kk = k % moduli[i];
    if (kk < 0) kk += moduli[i];
    r[i] = (kk * (x[i] % moduli[i])) % moduli[i];
  }
  return r;
}

bool FiniteAbelianGroup::is_zero(const Elem& x) const {
  for (int i = 0; i < rank(); ++i)
    if (x[i] % moduli[i] != 0) return false;
  return true;
}

long long FiniteAbelianGroup::order_of(const Elem& x) const {
  long long o = 1;
  for (int i = 0; i < rank(); ++i) {
    long long d = moduli[i] / std::gcd(moduli[i], x[i] % moduli[i]);
    o = std::lcm(o, d);
  }
  return o;
}

Elem FiniteAbelianGroup::generator(int i) const {
  Elem e = zero();
  e[i] = 1;
  return e;
}

Elem FiniteAbelianGroup::element_at(unsigned long long idx) const {
  Elem e(rank());
  for (int i = rank() - 1; i >= 0; --i) {
    e[i] = static_cast<long long>(idx % static_cast<unsigned long long>(moduli[i]));
    idx /= static_cast<unsigned long long>(moduli[i]);
  }
  return e;
}

unsigned long long FiniteAbelianGroup::index_of(const Elem& e) const {
  unsigned long long idx = 0;
  for (int i = 0; i < rank(); ++i)
    idx = idx * static_cast<unsigned long long>(moduli[i]) +
          static_cast<unsigned long long>(((e[i] % moduli[i]) + moduli[i]) % moduli[i]);
  return idx;
}

FiniteAbelianGroup trivial_group() { return FiniteAbelianGroup{}; }

FiniteAbelianGroup cyclic_group(long long n) {
  if (n == 1) return trivial_group();
  return FiniteAbelianGroup({n});
}

FiniteAbelianGroup concat_groups(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
  std::vector<long long> m = a.moduli;
  m.insert(m.end(), b.moduli.begin(), b.moduli.end());
  return FiniteAbelianGroup(std::move(m));
}

AbHom::AbHom(FiniteAbelianGroup s, FiniteAbelianGroup t, Mat mat)
    : source(std::move(s)), target(std::move(t)), m(std::move(mat)) {
  if (m.rows != target.rank() || m.cols != source.rank())
    fail(errc::invalid_argument, "hom matrix shape mismatch");
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) {
      m.at(i, j) %= target.moduli[i];
      if (m.at(i, j) < 0) m.at(i, j) += target.moduli[i];
    }
}

AbHom AbHom::zero(const FiniteAbelianGroup& s, const FiniteAbelianGroup& t) {
  return AbHom(s, t, Mat(t.rank(), s.rank()));
}

AbHom AbHom::identity(const FiniteAbelianGroup& g) {
  return AbHom(g, g, Mat::identity(g.rank()));
}

Elem AbHom::apply(const Elem& x) const {
  if (static_cast<int>(x.size()) != source.rank())
    fail(errc::invalid_argument, "hom applied to wrong-rank element");
  Elem r(target.rank(), 0);
  for (int i = 0; i < m.rows; ++i) {
    Int acc = 0;
    for (int j = 0; j < m.cols; ++j) acc += m.at(i, j) * x[j];
    acc %= target.moduli[i];
    if (acc < 0) acc += target.moduli[i];
    r[i] = acc.convert_to<long long>();
  }
  return r;
}

AbHom AbHom::compose(const AbHom& inner) const {
  if (!(inner.target == source)) fail(errc::group_mismatch, "hom composition mismatch");
  return AbHom(inner.source, target, m * inner.m);
}

AbHom AbHom::plus(const AbHom& o) const {
  if (!(o.source == source) || !(o.target == target))
    fail(errc::group_mismatch, "hom sum mismatch");
  Mat s = m;
  for (size_t i = 0; i < s.a.size(); ++i) s.a[i] += o.m.a[i];
  return AbHom(source, target, std::move(s));
}

AbHom AbHom::negated() const {
  Mat s = m;
  for (auto& x : s.a) x = -x;
  return AbHom(source, target, std::move(s));
}

bool AbHom::well_defined() const {
  for (int j = 0; j < source.rank(); ++j)
    for (int i = 0; i < target.rank(); ++i)
      if ((m.at(i, j) * source.moduli[j]) % target.moduli[i] != 0) return false;
  return true;
}

bool AbHom::is_injective() const { return kernel(*this).carrier.rank() == 0; }

bool AbHom::is_surjective() const { return image(*this).carrier.order() == target.order(); }

bool AbHom::operator==(const AbHom& o) const {
  return source == o.source && target == o.target && m == o.m;
}

std::vector<Elem> SubgroupPresentation::generators() const {
  std::vector<Elem> gens;
  for (int i = 0; i < carrier.rank(); ++i) gens.push_back(inclusion.apply(carrier.generator(i)));
  return gens;
}

namespace {

// Basis matrix (r x r) of the lattice in Z^r spanned by the given columns
// together with diag(ambient moduli).
Mat lattice_basis(const FiniteAbelianGroup& ambient, const std::vector<Elem>& gens,
                  SnfResult* snf_out = nullptr) {
  int r = ambient.rank();
  int g = static_cast<int>(gens.size());
  Mat m(r, g + r);
  for (int j = 0; j < g; ++j)
    for (int i = 0; i < r; ++i) m.at(i, j) = gens[j][i];
  for (int i = 0; i < r; ++i) m.at(i, g + i) = ambient.moduli[i];
  SnfResult s = smith_normal_form(m);
  // lattice = uinv * diag(d) * Z^r; basis columns uinv[:,j] * d_j
  Mat b(r, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < r; ++i) b.at(i, j) = s.uinv.at(i, j) * s.d.at(j, j);
  if (snf_out) *snf_out = std::move(s);
  return b;
}

} // namespace

SubgroupPresentation subgroup(const FiniteAbelianGroup& ambient, const std::vector<Elem>& gens) {
  int r = ambient.rank();
  if (r == 0)
    return SubgroupPresentation{ambient, trivial_group(), AbHom::zero(trivial_group(), ambient)};
  for (const Elem& g : gens)
    if (static_cast<int>(g.size()) != r) fail(errc::mismatched_ambient, "generator rank mismatch");
  SnfResult s1;
  Mat b = lattice_basis(ambient, gens, &s1);
  // X = b^{-1} * diag(moduli) = diag(d)^{-1} * u * diag(moduli), entrywise exact
  Mat x(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      Int num = s1.u.at(i, j) * ambient.moduli[j];
      if (num % s1.d.at(i, i) != 0) fail(errc::invalid_argument, "lattice division failure");
      x.at(i, j) = num / s1.d.at(i, i);
    }
  SnfResult s2 = smith_normal_form(x);
  Mat basis = b * s2.uinv; // columns generate the subgroup, orders e_i
  std::vector<long long> factors;
  std::vector<int> kept;
  for (int i = 0; i < r; ++i) {
    Int e = s2.d.at(i, i);
    if (e > 1) {
      factors.push_back(e.convert_to<long long>());
      kept.push_back(i);
    }
  }
  FiniteAbelianGroup carrier(factors);
  Mat incl(r, static_cast<int>(kept.size()));
  for (size_t j = 0; j < kept.size(); ++j)
    for (int i = 0; i < r; ++i) incl.at(i, static_cast<int>(j)) = basis.at(i, kept[j]);
  return SubgroupPresentation{ambient, carrier, AbHom(carrier, ambient, std::move(incl))};
}

SubgroupPresentation trivial_subgroup(const FiniteAbelianGroup& ambient) {
  return subgroup(ambient, {});
}

SubgroupPresentation full_subgroup(const FiniteAbelianGroup& ambient) {
  std::vector<Elem> gens;
  for (int i = 0; i < ambient.rank(); ++i) gens.push_back(ambient.generator(i));
  return subgroup(ambient, gens);
}

std::pair<FiniteAbelianGroup, AbHom> quotient(const FiniteAbelianGroup& ambient,
                                              const SubgroupPresentation& s) {
  if (!(s.ambient == ambient)) fail(errc::mismatched_ambient, "quotient ambient mismatch");
  int r = ambient.rank();
  if (r == 0) return {trivial_group(), AbHom::zero(ambient, trivial_group())};
  SnfResult snf;
  lattice_basis(ambient, s.generators(), &snf);
  std::vector<long long> factors;
  std::vector<int> kept;
  for (int i = 0; i < r; ++i) {
    Int d = snf.d.at(i, i);
    if (d > 1) {
      factors.push_back(d.convert_to<long long>());
      kept.push_back(i);
    }
  }
  FiniteAbelianGroup q(factors);
  Mat proj(static_cast<int>(kept.size()), r);
  for (size_t i = 0; i < kept.size(); ++i)
    for (int j = 0; j < r; ++j) proj.at(static_cast<int>(i), j) = snf.u.at(kept[i], j);
  return {q, AbHom(ambient, q, std::move(proj))};
}

Solver::Solver(AbHom f) : f_(std::move(f)) {
  int k = f_.source.rank(), m = f_.target.rank();
  Mat g(m, k + m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < k; ++j) g.at(i, j) = f_.m.at(i, j);
    g.at(i, k + i) = f_.target.moduli[i];
  }
  s_ = smith_normal_form(g);
}

std::optional<Elem> Solver::solve(const Elem& b) const {
  int k = f_.source.rank(), m = f_.target.rank();
  if (static_cast<int>(b.size()) != m) fail(errc::invalid_argument, "solve rhs rank mismatch");
  if (m == 0) return f_.source.zero();
  std::vector<Int> ub(m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) ub[i] += s_.u.at(i, j) * b[j];
  std::vector<Int> w(k + m, 0);
  for (int i = 0; i < m; ++i) {
    if (i < s_.rank) {
      if (ub[i] % s_.d.at(i, i) != 0) return std::nullopt;
      w[i] = ub[i] / s_.d.at(i, i);
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  Elem x(k, 0);
  for (int i = 0; i < k; ++i) {
    Int acc = 0;
    for (int j = 0; j < k + m; ++j) acc += s_.v.at(i, j) * w[j];
    acc %= f_.source.moduli[i];
    if (acc < 0) acc += f_.source.moduli[i];
    x[i] = acc.convert_to<long long>();
  }
  return x;
}

const SubgroupPresentation& Solver::kernel() const {
  if (!kernel_) {
    int k = f_.source.rank(), m = f_.target.rank();
    std::vector<Elem> gens;
    for (int j = s_.rank; j < k + m; ++j) {
      Elem g(k, 0);
      for (int i = 0; i < k; ++i) {
        Int val = s_.v.at(i, j) % f_.source.moduli[i];
        if (val < 0) val += f_.source.moduli[i];
        g[i] = val.convert_to<long long>();
      }
      gens.push_back(std::move(g));
    }
    kernel_ = subgroup(f_.source, gens);
  }
  return *kernel_;
}

SolveResult solve(const AbHom& f, const Elem& b) {
  Solver s(f);
  return SolveResult{s.solve(b), s.kernel()};
}

SubgroupPresentation kernel(const AbHom& f) { return Solver(f).kernel(); }

SubgroupPresentation image(const AbHom& f) {
  std::vector<Elem> gens;
  for (int j = 0; j < f.source.rank(); ++j) gens.push_back(f.apply(f.source.generator(j)));
  return subgroup(f.target, gens);
}

SubgroupPresentation image(const AbHom& f, const SubgroupPresentation& s) {
  if (!(s.ambient == f.source)) fail(errc::mismatched_ambient, "image ambient mismatch");
  std::vector<Elem> gens;
  for (const Elem& g : s.generators()) gens.push_back(f.apply(g));
  return subgroup(f.target, gens);
}

SubgroupPresentation preimage(const AbHom& f, const SubgroupPresentation& s) {
  if (!(s.ambient == f.target)) fail(errc::mismatched_ambient, "preimage ambient mismatch");
  auto [q, proj] = quotient(f.target, s);
  return kernel(proj.compose(f));
}

SubgroupPresentation intersect(const SubgroupPresentation& a, const SubgroupPresentation& b) {
  if (!(a.ambient == b.ambient)) fail(errc::mismatched_ambient, "intersect ambient mismatch");
  SubgroupPresentation t = preimage(a.inclusion, b);
  return image(a.inclusion, t);
}

SubgroupPresentation join(const SubgroupPresentation& a, const SubgroupPresentation& b) {
  if (!(a.ambient == b.ambient)) fail(errc::mismatched_ambient, "join ambient mismatch");
  std::vector<Elem> gens = a.generators();
  for (const Elem& g : b.generators()) gens.push_back(g);
  return subgroup(a.ambient, gens);
}

bool contains(const SubgroupPresentation& s, const Elem& x) {
  return Solver(s.inclusion).solvable(s.ambient.reduce(x));
}

bool subgroup_leq(const SubgroupPresentation& a, const SubgroupPresentation& b) {
  Solver sb(b.inclusion);
  for (const Elem& g : a.generators())
    if (!sb.solvable(g)) return false;
  return true;
}

bool subgroup_eq(const SubgroupPresentation& a, const SubgroupPresentation& b) {
  return a.carrier.order() == b.carrier.order() && subgroup_leq(a, b);
}

long long BilinearForm::eval(const Elem& x, const Elem& y) const {
  Int acc = 0;
  for (int i = 0; i < a.rank(); ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < b.rank(); ++j) acc += Int(x[i]) * vals.at(i, j) * y[j];
  }
  acc %= modulus;
  if (acc < 0) acc += modulus;
  return acc.convert_to<long long>();
}

bool BilinearForm::well_defined() const {
  for (int i = 0; i < a.rank(); ++i)
    for (int j = 0; j < b.rank(); ++j) {
      if ((vals.at(i, j) * a.moduli[i]) % modulus != 0) return false;
      if ((vals.at(i, j) * b.moduli[j]) % modulus != 0) return false;
    }
  return true;
}

SubgroupPresentation annihilator(const BilinearForm& p, const SubgroupPresentation& s) {
  if (!p.well_defined()) fail(errc::not_bilinear, "pairing not well defined on generators");
  if (!(s.ambient == p.a)) fail(errc::mismatched_ambient, "annihilator ambient mismatch");
  std::vector<Elem> gens = s.generators();
  int t = static_cast<int>(gens.size());
  FiniteAbelianGroup tgt(std::vector<long long>(t, p.modulus));
  Mat m(t, p.b.rank());
  for (int r = 0; r < t; ++r)
    for (int j = 0; j < p.b.rank(); ++j) {
      Int acc = 0;
      for (int i = 0; i < p.a.rank(); ++i) acc += Int(gens[r][i]) * p.vals.at(i, j);
      m.at(r, j) = acc % p.modulus;
    }
  if (t == 0) return full_subgroup(p.b);
  return kernel(AbHom(p.b, tgt, std::move(m)));
}

SubgroupPresentation annihilator_left(const BilinearForm& p, const SubgroupPresentation& t) {
  BilinearForm swapped{p.b, p.a, p.modulus, p.vals.transposed()};
  return annihilator(swapped, t);
}

SumDecomposition direct_sum(const std::vector<FiniteAbelianGroup>& parts) {
  SumDecomposition out;
  std::vector<long long> moduli;
  for (const auto& p : parts) {
    out.offsets.push_back(static_cast<int>(moduli.size()));
    moduli.insert(moduli.end(), p.moduli.begin(), p.moduli.end());
  }
  out.total = FiniteAbelianGroup(moduli);
  for (size_t p = 0; p < parts.size(); ++p) {
    int off = out.offsets[p], r = parts[p].rank(), n = out.total.rank();
    Mat inj(n, r), proj(r, n);
    for (int i = 0; i < r; ++i) {
      inj.at(off + i, i) = 1;
      proj.at(i, off + i) = 1;
    }
    out.inject.emplace_back(parts[p], out.total, std::move(inj));
    out.project.emplace_back(out.total, parts[p], std::move(proj));
  }
  return out;
}

} // namespace ctpair
