#include <benchmark/benchmark.h>

#include <optional>
#include <random>

#include "ctpair/ctp.hpp"
#include "ctpair/theta.hpp"

using namespace ctpair;

namespace {

Mat random_matrix(int r, int c, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  Mat m(r, c);
  for (auto& x : m.a) x = static_cast<long long>(eng() % 41) - 20;
  return m;
}

void bm_snf(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Mat a = random_matrix(n, n, 42);
  for (auto _ : state) {
    SnfResult s = smith_normal_form(a);
    benchmark::DoNotOptimize(s.rank);
  }
}
BENCHMARK(bm_snf)->Arg(8)->Arg(24)->Arg(48);

void bm_cohomology_h2(benchmark::State& state) {
  FiniteGroup g = FiniteGroup::klein_four();
  GModule m = trivial_gmodule(g, FiniteAbelianGroup({4}));
  Subgroup whole = Subgroup::full(g);
  for (auto _ : state) {
    CohomologyGroup h = cohomology(whole, m, 2);
    benchmark::DoNotOptimize(h.carrier.rank());
  }
}
BENCHMARK(bm_cohomology_h2);

void bm_validate_dbl4(benchmark::State& state) {
  ArithmeticFixture fx = dbl4_fixture();
  for (auto _ : state) {
    FixtureContext ctx = FixtureContext::make(fx);
    Report rep = validate_fixture(ctx, standard_module_battery(*ctx.fx));
    benchmark::DoNotOptimize(rep.all_required_pass());
  }
}
BENCHMARK(bm_validate_dbl4);

struct PairingSetup {
  FixtureContext ctx = FixtureContext::make(dbl4_fixture());
  std::optional<CtpEngine> eng;
  PairingSetup() {
    GModule m = trivial_gmodule(ctx.fx->g, FiniteAbelianGroup({2, 2}));
    LocalData ld = make_local_data(*ctx.fx, m);
    SubgroupPresentation wa = subgroup(ld.sum1.total, {Elem{1, 0, 0, 0}, Elem{0, 0, 0, 1}});
    SubgroupPresentation wb = subgroup(ld.sum1.total, {Elem{0, 1, 0, 0}, Elem{0, 0, 1, 0}});
    eng.emplace(sum_conditions_sequence(ctx, m, wa, wb).sequence);
  }
};

PairingSetup& pairing_setup() {
  static PairingSetup s;
  return s;
}

void bm_ctp_pair(benchmark::State& state) {
  PairingSetup& f = pairing_setup();
  Elem phi = f.eng->sel2().carrier.generator(0);
  Elem psi = f.eng->sel1d().carrier.generator(1);
  for (auto _ : state) {
    PairingValue v = f.eng->pair(phi, psi);
    benchmark::DoNotOptimize(v.num);
  }
}
BENCHMARK(bm_ctp_pair);

void bm_ctp_engine_build(benchmark::State& state) {
  PairingSetup& f = pairing_setup();
  SES e = f.eng->sequence();
  for (auto _ : state) {
    CtpEngine eng(e);
    benchmark::DoNotOptimize(eng.modulus());
  }
}
BENCHMARK(bm_ctp_engine_build);

void bm_q_loc_sum(benchmark::State& state) {
  PairingSetup& f = pairing_setup();
  GModule m = trivial_gmodule(f.ctx.fx->g, FiniteAbelianGroup({2, 2}));
  LocalData ld = make_local_data(*f.ctx.fx, m);
  ThetaPresentation th = symplectic_theta(f.ctx.fx->c, m);
  Elem tuple = ld.sum1.total.generator(0);
  for (auto _ : state) {
    PairingValue v = q_loc_sum(f.ctx, th, ld, tuple);
    benchmark::DoNotOptimize(v.num);
  }
}
BENCHMARK(bm_q_loc_sum);

} // namespace

BENCHMARK_MAIN();
