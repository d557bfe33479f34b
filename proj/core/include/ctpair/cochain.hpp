#pragma once

#include <optional>

#include "ctpair/gmodule.hpp"

namespace ctpair {

inline constexpr int kMaxDegree = 4;

// Inhomogeneous cochain: a dense table H^i -> M, indexed tuple-major
// (first argument most significant). H is a subgroup of the module's group.
struct Cochain {
  Subgroup h;
  GModule m; // module over h.parent
  int degree = 0;
  std::vector<Elem> table; // size |H|^degree

  static Cochain zero(const Subgroup& h, const GModule& m, int degree);

  unsigned long long tuples() const { return table.size(); }
  unsigned long long index(const std::vector<int>& locals) const;
  std::vector<int> tuple_at(unsigned long long idx) const;
  const Elem& at(const std::vector<int>& locals) const { return table[index(locals)]; }
  Elem& at(const std::vector<int>& locals) { return table[index(locals)]; }

  Cochain add(const Cochain& o) const;
  Cochain sub(const Cochain& o) const;
  Cochain neg() const;
  Cochain smul(long long k) const;
  bool is_zero() const;
  bool same_shape(const Cochain& o) const;
};

// The cochain group C^i(H, M) as a finite abelian group, tuple-major coordinates.
FiniteAbelianGroup cochain_space(const Subgroup& h, const GModule& m, int degree);
Elem flatten(const Cochain& c);
Cochain unflatten(const Subgroup& h, const GModule& m, int degree, const Elem& coords);

Cochain coboundary(const Cochain& c);
// Matrix of d : C^i -> C^{i+1}.
AbHom coboundary_hom(const Subgroup& h, const GModule& m, int degree);

Cochain cup(const Cochain& a, const Cochain& b, const GBilinear& p);
Cochain restrict_to(const Cochain& c, const Subgroup& hsub);
Cochain apply_pointwise(const GModuleHom& f, const Cochain& c);
// f injective: pull every value back through f (unique preimages).
Cochain preimage_pointwise(const GModuleHom& f, const Cochain& c);
Cochain preimage_pointwise(const GModuleHom& f, const Cochain& c, const Solver& fsolver);

// Deterministic set-section of a surjective module hom: the enumeration-least
// preimage of every target element.
struct SetSection {
  GModuleHom pi;
  std::vector<Elem> lift_of; // indexed by target element enumeration
  Elem lift(const Elem& target_elem) const;
};
SetSection make_section(const GModuleHom& pi);
Cochain lift_through(const SetSection& s, const Cochain& a);

struct CohomologyGroup {
  Subgroup h;
  GModule m;
  int degree = 0;
  FiniteAbelianGroup carrier;       // invariant-factor form
  std::vector<Cochain> reps;        // cocycle representative per carrier generator
  SubgroupPresentation cocycles;    // Z^i inside C^i
  Solver cocycle_solver;            // membership in Z^i
  AbHom project;                    // Z-carrier -> carrier, kills coboundaries

  Elem reduce(const Cochain& z) const; // throws NotACocycle
  Cochain rep_of(const Elem& x) const;
  bool is_cocycle(const Cochain& z) const;
};

CohomologyGroup cohomology(const Subgroup& h, const GModule& m, int degree);

std::optional<Cochain> solve_coboundary(const Cochain& z);
std::optional<Cochain> solve_coboundary(const Cochain& z, const Solver& boundary_below);

} // namespace ctpair
