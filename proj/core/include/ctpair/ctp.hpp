#pragma once

#include "ctpair/smod.hpp"

namespace ctpair {

// Value k/den in Q/Z, canonical representative 0 <= k < den.
struct PairingValue {
  long long num = 0;
  long long den = 1;

  static PairingValue make(long long k, long long den);
  PairingValue operator+(const PairingValue& o) const;
  PairingValue operator-(const PairingValue& o) const;
  PairingValue negated() const { return make(-num, den); }
  bool is_zero() const { return num == 0; }
  bool operator==(const PairingValue& o) const = default;
  std::string str() const;
};

struct SelmerGroup {
  SModObject obj;
  FiniteAbelianGroup carrier;
  std::vector<Cochain> reps;  // cocycles in Z^1(G, M)
  SubgroupPresentation in_h1; // as a subgroup of the H^1 carrier

  Cochain rep_of(const Elem& x) const;
  Elem h1_class(const Elem& x) const { return in_h1.inclusion.apply(x); }
  // Express an H^1 class in Selmer coordinates, if it lies in the Selmer group.
  std::optional<Elem> from_h1(const Elem& h1_elem) const;
};

SelmerGroup selmer(const SModObject& obj);
// (Sha^1, Sha^2) as subgroups of the global H^1 / H^2 carriers.
std::pair<SubgroupPresentation, SubgroupPresentation> sha(const SModObject& obj);

struct CtpOptions {
  int resample = 1;       // > 1 repeats with resampled choice tuples and asserts agreement
  std::uint64_t seed = 0; // drives the resampling
};

// The pairing attached to one exact sequence; precomputes every solver the
// cocycle manipulations need.
class CtpEngine {
 public:
  explicit CtpEngine(SES e);

  const SES& sequence() const { return e_; }
  const SelmerGroup& sel2() const { return sel2_; }
  const SelmerGroup& sel1d() const { return sel1d_; }
  const SModObject& dual_middle() const { return mdual_; }
  const SModObject& m1_dual_object() const { return m1d_; }
  long long modulus() const { return n_; }
  bool canonical() const { return v1_ok_; } // reciprocity verified; else NON-CANONICAL

  PairingValue pair(const Elem& phi, const Elem& psi, const CtpOptions& opts = {}) const;
  PairingValue pair_bis(const Elem& phi, const Elem& psi, const CtpOptions& opts = {}) const;
  // Entries pair(gen_i, gen_j) as values mod N.
  Mat matrix(const CtpOptions& opts = {}) const;

  // Deterministic local lifts (phi_{v,M})_v in W over localize(phi), as a
  // W-carrier element; used by the theta-group checks.
  Elem local_lift_in_w(const Elem& phi_sel) const;
  Cochain local_lift_cocycle(const Elem& w_carrier_elem, int place,
                             const Cochain& target_projection) const;

 private:
  struct Sample;
  PairingValue pair_once(const Elem& phi, const Elem& psi, const Sample& s) const;
  PairingValue pair_bis_once(const Elem& phi, const Elem& psi, const Sample& s) const;

  SES e_;
  long long n_ = 0;
  bool v1_ok_ = true;
  SModObject mdual_, m1d_; // (M^dual, W^perp) and (M1^dual, W1^perp)
  SelmerGroup sel2_, sel1d_;
  GBilinear ev1_, ev2_; // M1 x M1^dual -> C and M2 x M2^dual -> C
  GModuleHom iota_dual_, pi_dual_;
  SetSection sec_pi_, sec_iota_dual_;
  Solver iota_solver_, pi_dual_solver_;
  Solver d2c_;                      // d: C^2(G,C) -> C^3(G,C)
  Solver w_lift_, wperp_lift_;      // W-carrier -> total(M2), Wperp-carrier -> total(M1d)
  std::vector<Solver> d0_m2_, d0_m1d_; // per place, degree-0 coboundary solvers
  SubgroupPresentation z2c_;        // Z^2(G, C), for epsilon resampling
};

Report check_kernels(const CtpEngine& eng);
Report check_duality(const CtpEngine& eng);

struct Ladder {
  SES e, ep;
  GModuleHom f1, f, f2; // verticals M1->M1', M->M', M2->M2'
};
Report check_naturality(const Ladder& ladder);
Report check_trilinearity(const SES& ea, const SES& eb);

// Local pairing of a module-split sequence (Def. of LP): s is an equivariant
// module section of pi, not necessarily a morphism.
struct SplitLocalPairing {
  BilinearForm lp;                    // W2-carrier x W1perp-carrier -> Z/N
  SubgroupPresentation left_kernel;   // inside total(M2)
  SubgroupPresentation predicted_left_kernel; // W2 cap s^{-1}(W)
  Report report;                      // kernel + factorization checks
};
SplitLocalPairing local_split_pairing(const CtpEngine& eng, const GModuleHom& s);

struct SumConditionsResult {
  SES sequence;
  Report report; // engine-vs-explicit-formula agreement and kernel identities
  Mat engine_matrix, explicit_matrix;
};
SumConditionsResult sum_conditions_sequence(const FixtureContext& ctx, const GModule& m,
                                            const SubgroupPresentation& wa,
                                            const SubgroupPresentation& wb);

// CTP matrix values of the explicit sum-of-conditions formula
// sum_v inv_v(phi_{vb} cup psi_{va}).
PairingValue sum_conditions_explicit(const FixtureContext& ctx, const LocalData& ldm,
                                     const LocalData& ldd, const SubgroupPresentation& wa,
                                     const SubgroupPresentation& wb, const Elem& loc_phi,
                                     const Elem& loc_psi);

} // namespace ctpair
