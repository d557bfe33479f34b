#pragma once

#include <optional>

#include "ctpair/abelian.hpp"
#include "ctpair/group.hpp"

namespace ctpair {

// A finite group acting on a finite abelian group by automorphisms.
struct GModule {
  FiniteGroup g;
  FiniteAbelianGroup m;
  std::vector<Mat> action; // per group element, m.rank x m.rank

  Elem act(int gidx, const Elem& x) const;
  Mat action_mat(int gidx) const { return action[gidx]; }
  bool valid(std::string* why = nullptr) const;
  bool operator==(const GModule& o) const;
  bool is_cyclic() const { return m.rank() <= 1; }
  long long cyclic_modulus() const; // for rank-1 modules
};

GModule trivial_gmodule(const FiniteGroup& g, const FiniteAbelianGroup& m);
// Cyclic coefficient module Z/n with the action g -> units[g].
GModule cyclic_coefficient(const FiniteGroup& g, long long n, const std::vector<long long>& units);

struct GModuleHom {
  GModule source, target; // over the same group
  Mat m;

  GModuleHom() = default;
  GModuleHom(GModule s, GModule t, Mat mat);
  static GModuleHom identity(const GModule& g);
  static GModuleHom zero(const GModule& s, const GModule& t);

  Elem apply(const Elem& x) const { return ab().apply(x); }
  AbHom ab() const { return AbHom(source.m, target.m, m); }
  GModuleHom compose(const GModuleHom& inner) const;
  GModuleHom plus(const GModuleHom& o) const;
  GModuleHom negated() const;
  bool operator==(const GModuleHom& o) const;
};

// true iff f commutes with every group element; otherwise *witness = offending g.
bool check_equivariance(const GModuleHom& f, int* witness = nullptr);

// Bilinear G-equivariant pairing M1 x M2 -> N given on generator pairs.
struct GBilinear {
  GModule left, right, target;
  std::vector<std::vector<Elem>> vals; // left.rank x right.rank, elements of target

  Elem eval(const Elem& x, const Elem& y) const;
  bool equivariant(int* witness = nullptr) const;
  bool well_defined() const;
};

// <m, f> = f(m): pairing M x M^dual -> C.
GBilinear evaluation_pairing(const GModule& m, const GModule& c);
GBilinear swap_pairing(const GBilinear& p); // (y, x) -> p(x, y)
// As a plain bilinear form into Z/N (target must be cyclic).
BilinearForm as_form(const GBilinear& p);

// Hom(M, C) with (g.f)(m) = g(f(g^{-1} m)); requires exp(M) | N.
GModule dual_module(const GModule& m, const GModule& c);
// f^dual : target^dual -> source^dual, phi -> phi o f.
GModuleHom dual_hom(const GModuleHom& f, const GModule& c);
// beta : M -> (M^dual)^dual, the evaluation isomorphism.
GModuleHom double_dual_map(const GModule& m, const GModule& c);
// Convert an abelian hom M -> C into dual-module coordinates and back.
Elem hom_to_dual_coords(const GModule& m, const GModule& c, const Elem& values_on_gens);
Elem dual_coords_to_values(const GModule& m, const GModule& c, const Elem& dual_coords);
long long eval_dual(const GModule& m, const GModule& c, const Elem& x, const Elem& dual_coords);

// Submodule on a G-stable subgroup, with induced action.
GModule submodule(const GModule& m, const SubgroupPresentation& s, GModuleHom* incl = nullptr);
// Quotient by a G-stable subgroup, with projection.
GModule quotient_module(const GModule& m, const SubgroupPresentation& s, GModuleHom* proj = nullptr);
// M[k] = kernel of multiplication by k.
GModule torsion_submodule(const GModule& m, long long k, GModuleHom* incl = nullptr);

struct ModuleSum {
  GModule total;
  GModuleHom inj1, inj2, proj1, proj2;
};
ModuleSum direct_sum_modules(const GModule& a, const GModule& b);

GModuleHom multiplication_by(long long k, const GModule& m);
// All G-equivariant homs source -> target (exhaustive; desk scale only).
std::vector<GModuleHom> all_equivariant_homs(const GModule& source, const GModule& target);

} // namespace ctpair
