#pragma once

#include <memory>
#include <random>

#include "ctpair/cochain.hpp"
#include "ctpair/report.hpp"

namespace ctpair {

// A place of the finite arithmetic stand-in: decomposition group, inertia
// subgroup, and an invariant map on the computed H^2(G_v, C) carrier
// (value k is read as k/N in Q/Z).
struct Place {
  std::string label;
  Subgroup gv;
  Subgroup iv;
  AbHom inv; // H2(Gv, C).carrier -> Z/N
};

struct ArithmeticFixture {
  FiniteGroup g;
  GModule c; // cyclic coefficient module over g
  std::vector<Place> places;

  long long n() const { return c.cyclic_modulus(); }
  Subgroup whole_group() const { return Subgroup::full(g); }
};

// Coefficient-module cohomology shared by everything over one fixture.
struct FixtureCohomology {
  std::vector<CohomologyGroup> h2v_c; // per place, H2(Gv, C)
  CohomologyGroup h1_global_c, h2_global_c;
  Solver d2_global_c; // d : C^2(G, C) -> C^3(G, C), for solving depsilon = z
};
FixtureCohomology make_fixture_cohomology(const ArithmeticFixture& fx);

struct FixtureContext {
  std::shared_ptr<const ArithmeticFixture> fx;
  std::shared_ptr<const FixtureCohomology> fc;
  static FixtureContext make(ArithmeticFixture f);
  long long n() const { return fx->n(); }
};

// Local and global degree-1/2 cohomology of one module over a fixture.
struct LocalData {
  GModule m;
  CohomologyGroup h1_global, h2_global;
  std::vector<CohomologyGroup> h1v, h2v; // per place
  SumDecomposition sum1, sum2;           // direct sums of local carriers
  AbHom localize1;                       // h1_global.carrier -> sum1.total
  AbHom localize2;                       // h2_global.carrier -> sum2.total

  Elem place_component(const Elem& tuple, int place) const;
  Elem tuple_from_components(const std::vector<Elem>& comps) const;
};
LocalData make_local_data(const ArithmeticFixture& fx, const GModule& m);

SubgroupPresentation unramified_subgroup(const ArithmeticFixture& fx, int place,
                                         const LocalData& ld);
SubgroupPresentation unramified_sum(const ArithmeticFixture& fx, const LocalData& ld);

// inv_v(a cup b) on H1(G_v, M) x H1(G_v, M^dual) carriers.
BilinearForm local_pairing(const FixtureContext& ctx, int place, const LocalData& ldm,
                           const LocalData& ldd);
// Sum of the local pairings on the two direct-sum totals.
BilinearForm total_pairing(const FixtureContext& ctx, const LocalData& ldm,
                           const LocalData& ldd);

// V1 reciprocity, V2 local perfectness, V3 unramified orthogonality
// (informational), V5 global duality; failures carry witnesses.
Report validate_fixture(const FixtureContext& ctx, const std::vector<GModule>& modules);

// Standard battery: C[d] for divisors d >= 2 of N (includes C itself).
std::vector<GModule> standard_module_battery(const ArithmeticFixture& fx);

ArithmeticFixture dbl4_fixture();  // G = Z/2, C = Z/4 with negation, two full places
ArithmeticFixture dbl8_fixture();  // same shape with C = Z/8
ArithmeticFixture dbl4_one_place_fixture(); // fails reciprocity, for the failure path

// JSON fixture file format (version 1).
ArithmeticFixture fixture_from_json(const std::string& text);
ArithmeticFixture load_fixture_file(const std::string& path);
std::string fixture_to_json(const ArithmeticFixture& fx);

struct SearchBounds {
  int max_group_order = 4;
  long long max_n = 8;
  int max_places = 4;
  int attempts = 400;
  bool full_places = false; // restrict to G_v = G (kills Sha in degrees 1 and 2)
};
struct SearchHit {
  ArithmeticFixture fixture;
  Report validation;
};
// Deterministic given the seed; every hit passes V1+V2+V5 on the standard battery.
std::vector<SearchHit> search_fixtures(const SearchBounds& bounds, std::uint64_t seed, int want);

// Deterministic utility randomness for searches and resampling.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  std::uint64_t u64() { return eng(); }
  long long below(long long n) { return n <= 1 ? 0 : static_cast<long long>(u64() % n); }
  std::size_t pick(std::size_t n) { return n <= 1 ? 0 : static_cast<std::size_t>(u64() % n); }
  Elem element(const FiniteAbelianGroup& g) {
    Elem e(g.rank());
    for (int i = 0; i < g.rank(); ++i) e[i] = below(g.moduli[i]);
    return e;
  }
};

} // namespace ctpair
