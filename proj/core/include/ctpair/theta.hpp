#pragma once

#include "ctpair/ctp.hpp"

namespace ctpair {

// A central extension of M by the cyclic coefficient C, presented by a factor
// set and an action twist. Elements are pairs (alpha, m) with
//   (a,m)(a',m') = (a + a' + c(m,m'), m + m'),
//   g.(a,m)     = (g.a + twist_g(m), g.m).
struct ThetaPresentation {
  GModule c; // cyclic
  GModule m; // same group
  std::vector<std::vector<long long>> factor; // |M| x |M|, values mod N
  std::vector<std::vector<long long>> twist;  // |G| x |M|, values mod N

  long long n() const { return c.cyclic_modulus(); }
  long long fval(const Elem& a, const Elem& b) const;
  long long tval(int g, const Elem& a) const;

  struct El {
    long long a;
    Elem m;
    bool operator==(const El&) const = default;
  };
  El one() const { return {0, m.m.zero()}; }
  El mul(const El& x, const El& y) const;
  El inverse(const El& x) const;
  El act(int g, const El& x) const;
  El power(const El& x, long long k) const;

  Report validate() const;
};

// Trivial theta data (c = 0, twist = 0).
ThetaPresentation trivial_theta(const GModule& c, const GModule& m);
// The symplectic presentation over (Z/2)^2 with values in C[2].
ThetaPresentation symplectic_theta(const GModule& c, const GModule& m);
// Pullback along an injective module map (the restricted extension H_1).
ThetaPresentation pull_back_theta(const ThetaPresentation& th, const GModuleHom& iota);
// Quotient of H x H by the diagonal copy of C, a theta group over M + M
// with factor set c(m,m') - c(n,n') and associated map (f, -f).
ThetaPresentation doubled_theta(const ThetaPresentation& th, const ModuleSum& sum);

struct CommutatorData {
  std::vector<std::vector<long long>> pairing; // commutator pairing table, |M| x |M|
  GModuleHom f;                                // associated map M -> M^dual
};
CommutatorData commutator_and_associated_map(const ThetaPresentation& th);

// db for the zero-coordinate lift b = (0, a) of a cocycle a in Z^1(H', M),
// as a C-valued 2-cochain over H'.
Cochain connecting_q_cochain(const ThetaPresentation& th, const Cochain& a);
// Its class in H^2(H', C).
Elem connecting_q_class(const ThetaPresentation& th, const CohomologyGroup& h1m,
                        const CohomologyGroup& h2c, const Elem& phi);

// sum_v inv_v(q_{H,G_v}(phi_v)) for a tuple in the direct sum of local H^1(G_v,M).
PairingValue q_loc_sum(const FixtureContext& ctx, const ThetaPresentation& th,
                       const LocalData& ld, const Elem& tuple);
// q_loc_sum vanishes on all of W (checked on generators and pairwise sums).
bool is_isotropic(const FixtureContext& ctx, const ThetaPresentation& th, const LocalData& ld,
                  const SubgroupPresentation& w);

// The three conditions of the theta assumption, plus the combined
// single-condition form and its consistency with the three.
Report check_assumptions(const SES& e, const ThetaPresentation& th);
bool assumptions_hold(const SES& e, const ThetaPresentation& th);

struct InducedMorphisms {
  GModuleHom f1; // M1 -> M2^dual
  GModuleHom f2; // M2 -> M1^dual
};
InducedMorphisms induced_morphisms(const SES& e, const ThetaPresentation& th);

struct PoonenStollClass {
  Cochain cocycle;      // in Z^1(G, M1^dual)
  Elem h1_class;        // in H^1(G, M1^dual) carrier
  std::vector<long long> section; // the solved homomorphic section t : M1 -> C
  bool in_selmer = false;         // lies in Sel(M1^dual, W1^perp)
};
PoonenStollClass poonen_stoll_class(const SES& e, const ThetaPresentation& th);

Report check_theta_main(const SES& e, const ThetaPresentation& th);

// The finite theta construction from alternating data on M[2*lambda].
struct FiniteThetaInput {
  GModule m;               // ambient module
  SubgroupPresentation m0; // G-stable submodule; lambda: M -> M/M0
  // Tables indexed by the carrier enumerations of M[2 lambda] and M[2]:
  std::vector<std::vector<long long>> p1; // antisymmetric pairing, values mod N
  std::vector<long long> e;               // quadratic refinement on M[2], values in C[2]
};
struct FiniteThetaResult {
  ThetaPresentation theta;   // over M[lambda]
  GModule mlambda, m2lambda, mtwo;
  GModuleHom incl_lambda;    // M[lambda] -> M
  GModuleHom incl_2lambda;   // M[2lambda] -> M
  GModuleHom incl_two;       // M[2] -> M[2lambda]
  GModuleHom doubling;       // M[2lambda] -> M[lambda]
  std::vector<std::vector<long long>> p1; // the input pairing on M[2lambda]
  std::vector<long long> e;               // the input refinement on M[2]
  std::vector<Elem> transversal;          // section of doubling per M[lambda] element
  std::vector<std::vector<long long>> p0; // induced pairing on M[lambda]
};
FiniteThetaResult construct_finite_theta(const GModule& c, const FiniteThetaInput& in);

Report check_quadratic_form(const FiniteThetaResult& ft, const Subgroup& hsub,
                            const GModule& c);

// Level-two isotropy criterion: if doubling (M[2l],W1) -> M[l],W0) is strictly
// epic and sum_v inv_v(phi cup_P1 phi) kills W1, then W0 is isotropic.
bool isotropy_from_level_two(const FixtureContext& ctx, const FiniteThetaResult& ft,
                             const SubgroupPresentation& w1, const SubgroupPresentation& w0);

Report cochain_lemma_suite(const SES& e, const ThetaPresentation& th, int trials,
                           std::uint64_t seed);

// Parse optional theta blocks of a fixture file against a fixture context.
struct ThetaBlock {
  std::string name;
  ThetaPresentation theta;
};
std::vector<ThetaBlock> theta_blocks_from_json(const FixtureContext& ctx,
                                               const std::string& fixture_json_text);

} // namespace ctpair
