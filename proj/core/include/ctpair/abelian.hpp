#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <vector>

#include "ctpair/errors.hpp"

namespace ctpair {

using Int = boost::multiprecision::cpp_int;

// Dense integer matrix, row-major, exact arithmetic.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<Int> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
  static Mat identity(int n);

  Int& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Int& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  Mat operator*(const Mat& o) const;
  Mat transposed() const;
  bool operator==(const Mat& o) const = default;
};

// U * A * V = D with U, V unimodular, D diagonal, d1 | d2 | ..., all di >= 0.
struct SnfResult {
  Mat u, d, v;
  Mat uinv;
  int rank = 0;
  std::vector<Int> diag() const;
};
SnfResult smith_normal_form(const Mat& a);
bool is_unimodular(const Mat& a);
Int det(const Mat& a);

using Elem = std::vector<long long>;

// Finitely generated finite abelian group presented by a moduli vector:
// elements are integer vectors with coordinate i reduced mod moduli[i].
// Carriers returned by subgroup/quotient/cohomology operations are always in
// canonical invariant-factor form (d1 | d2 | ...); product groups used for
// cochain tables and local sums keep their componentwise moduli order.
struct FiniteAbelianGroup {
  std::vector<long long> moduli; // each >= 2; empty = trivial group

  FiniteAbelianGroup() = default;
  explicit FiniteAbelianGroup(std::vector<long long> m);

  int rank() const { return static_cast<int>(moduli.size()); }
  Int order() const;
  unsigned long long order_ull() const; // throws past 2^62
  long long exponent() const;
  bool is_invariant_chain() const;
  std::vector<long long> canonical_factors() const; // invariant-factor form
  bool isomorphic(const FiniteAbelianGroup& o) const;
  bool operator==(const FiniteAbelianGroup& o) const = default;

  Elem zero() const { return Elem(moduli.size(), 0); }
  Elem reduce(Elem e) const;
  Elem add(const Elem& x, const Elem& y) const;
  Elem sub(const Elem& x, const Elem& y) const;
  Elem neg(const Elem& x) const;
  Elem smul(long long k, const Elem& x) const;
  bool is_zero(const Elem& x) const;
  long long order_of(const Elem& x) const;
  Elem generator(int i) const;

  // Deterministic element enumeration (last coordinate fastest).
  Elem element_at(unsigned long long idx) const;
  unsigned long long index_of(const Elem& e) const;
};

FiniteAbelianGroup trivial_group();
FiniteAbelianGroup cyclic_group(long long n);
FiniteAbelianGroup concat_groups(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b);

// Homomorphism given by an integer matrix on generators (target.rank x source.rank).
struct AbHom {
  FiniteAbelianGroup source, target;
  Mat m;

  AbHom() = default;
  AbHom(FiniteAbelianGroup s, FiniteAbelianGroup t, Mat mat);
  static AbHom zero(const FiniteAbelianGroup& s, const FiniteAbelianGroup& t);
  static AbHom identity(const FiniteAbelianGroup& g);

  Elem apply(const Elem& x) const;
  AbHom compose(const AbHom& inner) const; // this after inner
  AbHom plus(const AbHom& o) const;
  AbHom negated() const;
  bool well_defined() const;
  bool is_injective() const;
  bool is_surjective() const;
  bool operator==(const AbHom& o) const;
};

// A subgroup carried as (carrier, inclusion); the inclusion is injective and
// the carrier is in invariant-factor form.
struct SubgroupPresentation {
  FiniteAbelianGroup ambient;
  FiniteAbelianGroup carrier;
  AbHom inclusion; // carrier -> ambient

  Int order() const { return carrier.order(); }
  std::vector<Elem> generators() const; // images in the ambient
};

// Cached SNF-based solver for f(x) = b over a fixed AbHom.
class Solver {
 public:
  Solver() = default;
  explicit Solver(AbHom f);
  const AbHom& hom() const { return f_; }
  std::optional<Elem> solve(const Elem& b) const;
  const SubgroupPresentation& kernel() const;
  bool solvable(const Elem& b) const { return solve(b).has_value(); }

 private:
  AbHom f_;
  SnfResult s_; // SNF of [F | diag(target)]
  mutable std::optional<SubgroupPresentation> kernel_;
};

struct SolveResult {
  std::optional<Elem> solution;
  SubgroupPresentation kernel;
};

SolveResult solve(const AbHom& f, const Elem& b);
SubgroupPresentation kernel(const AbHom& f);

SubgroupPresentation subgroup(const FiniteAbelianGroup& ambient, const std::vector<Elem>& gens);
SubgroupPresentation trivial_subgroup(const FiniteAbelianGroup& ambient);
SubgroupPresentation full_subgroup(const FiniteAbelianGroup& ambient);
std::pair<FiniteAbelianGroup, AbHom> quotient(const FiniteAbelianGroup& ambient,
                                              const SubgroupPresentation& s);
SubgroupPresentation image(const AbHom& f);
SubgroupPresentation image(const AbHom& f, const SubgroupPresentation& s);
SubgroupPresentation preimage(const AbHom& f, const SubgroupPresentation& s);
SubgroupPresentation intersect(const SubgroupPresentation& a, const SubgroupPresentation& b);
SubgroupPresentation join(const SubgroupPresentation& a, const SubgroupPresentation& b);
bool contains(const SubgroupPresentation& s, const Elem& x);
bool subgroup_leq(const SubgroupPresentation& a, const SubgroupPresentation& b);
bool subgroup_eq(const SubgroupPresentation& a, const SubgroupPresentation& b);

// Bilinear form A x B -> Z/modulus given by values on generator pairs.
struct BilinearForm {
  FiniteAbelianGroup a, b;
  long long modulus = 0;
  Mat vals; // a.rank x b.rank

  long long eval(const Elem& x, const Elem& y) const;
  bool well_defined() const;
};

// {y in B : P(s, y) = 0 for all s in S}, S a subgroup of A.
SubgroupPresentation annihilator(const BilinearForm& p, const SubgroupPresentation& s);
// {x in A : P(x, t) = 0 for all t in T}, T a subgroup of B.
SubgroupPresentation annihilator_left(const BilinearForm& p, const SubgroupPresentation& t);

// Componentwise direct sum with slice injections/projections.
struct SumDecomposition {
  FiniteAbelianGroup total;
  std::vector<int> offsets; // coordinate offset per part
  std::vector<AbHom> inject, project;
};
SumDecomposition direct_sum(const std::vector<FiniteAbelianGroup>& parts);

} // namespace ctpair
