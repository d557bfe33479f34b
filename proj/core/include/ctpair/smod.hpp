#pragma once

#include "ctpair/fixture.hpp"

namespace ctpair {

// An object of the category: a module decorated with a local-conditions
// subgroup of the direct sum of local H^1's.
struct SModObject {
  FixtureContext ctx;
  GModule m;
  std::shared_ptr<const LocalData> ld;
  SubgroupPresentation w;

  const FiniteAbelianGroup& total() const { return ld->sum1.total; }
};

SModObject make_object(const FixtureContext& ctx, GModule m, SubgroupPresentation w);
SModObject make_object_full(const FixtureContext& ctx, GModule m);
SModObject make_object_zero(const FixtureContext& ctx, GModule m);
SModObject make_object_unramified(const FixtureContext& ctx, GModule m);
SModObject make_object_global(const FixtureContext& ctx, GModule m); // W = localized globals
bool object_eq(const SModObject& a, const SModObject& b);

// The map induced by f on the direct sums of local H^1's.
AbHom induced_local1(const ArithmeticFixture& fx, const LocalData& src, const LocalData& tgt,
                     const GModuleHom& f);

struct SModMorphism {
  SModObject source, target;
  GModuleHom f;
  AbHom local1; // induced map total(source) -> total(target)
};

// Checks equivariance and f(W) <= W'; throws InvalidArgument with a witness otherwise.
SModMorphism make_morphism(const SModObject& src, const SModObject& tgt, const GModuleHom& f);
// Same data without the morphism condition (for strictness diagnostics).
SModMorphism make_map_unchecked(const SModObject& src, const SModObject& tgt, const GModuleHom& f);
bool is_morphism(const SModObject& src, const SModObject& tgt, const GModuleHom& f,
                 std::string* why = nullptr);

struct SES {
  SModMorphism iota, pi;

  const SModObject& first() const { return iota.source; }
  const SModObject& middle() const { return iota.target; }
  const SModObject& last() const { return pi.target; }
};

Report check_exact(const SES& e);
bool is_exact(const SES& e);

SModObject dual_object(const SModObject& o);
SES dual_sequence(const SES& e);

struct ObjectWithMap {
  SModObject object;
  SModMorphism map;
};
ObjectWithMap kernel_object(const SModMorphism& f);   // map: K -> source
ObjectWithMap cokernel_object(const SModMorphism& f); // map: target -> Q
bool is_strict_mono(const SModMorphism& f, std::string* why = nullptr);
bool is_strict_epi(const SModMorphism& f, std::string* why = nullptr);

struct ObjectSum {
  SModObject total;
  SModMorphism inj1, inj2, proj1, proj2;
};
ObjectSum direct_sum_objects(const SModObject& a, const SModObject& b);
// The split sequence 0 -> A -> A+B -> B -> 0.
SES split_sequence(const SModObject& a, const SModObject& b);

struct PulledBack {
  SES sequence;        // 0 -> M1 -> N -> N2 -> 0
  SModMorphism middle; // N -> M
};
PulledBack pullback(const SES& e, const SModMorphism& f); // f : N2 -> M2

struct PushedOut {
  SES sequence;        // 0 -> N1 -> P -> M2 -> 0
  SModMorphism middle; // M -> P
};
PushedOut pushout(const SES& e, const SModMorphism& g); // g : M1 -> N1

SES baer_sum(const SES& ea, const SES& eb);

// Exhaustive certified isomorphism-of-extensions search: an SMod isomorphism
// phi with phi o iota_a = iota_b, pi_b o phi = pi_a, phi(W_a) = W_b.
std::optional<GModuleHom> find_sequence_isomorphism(const SES& a, const SES& b);

} // namespace ctpair
