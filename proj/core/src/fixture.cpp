#include "ctpair/fixture.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <set>
#include <sstream>

namespace ctpair {

FixtureCohomology make_fixture_cohomology(const ArithmeticFixture& fx) {
  FixtureCohomology fc;
  Subgroup whole = fx.whole_group();
  for (const Place& p : fx.places) fc.h2v_c.push_back(cohomology(p.gv, fx.c, 2));
  fc.h1_global_c = cohomology(whole, fx.c, 1);
  fc.h2_global_c = cohomology(whole, fx.c, 2);
  fc.d2_global_c = Solver(coboundary_hom(whole, fx.c, 2));
  return fc;
}

FixtureContext FixtureContext::make(ArithmeticFixture f) {
  FixtureContext ctx;
  ctx.fx = std::make_shared<const ArithmeticFixture>(std::move(f));
  ctx.fc = std::make_shared<const FixtureCohomology>(make_fixture_cohomology(*ctx.fx));
  return ctx;
}

LocalData make_local_data(const ArithmeticFixture& fx, const GModule& m) {
  LocalData ld;
  ld.m = m;
  Subgroup whole = fx.whole_group();
  ld.h1_global = cohomology(whole, m, 1);
  ld.h2_global = cohomology(whole, m, 2);
  std::vector<FiniteAbelianGroup> parts1, parts2;
  for (const Place& p : fx.places) {
    ld.h1v.push_back(cohomology(p.gv, m, 1));
    ld.h2v.push_back(cohomology(p.gv, m, 2));
    parts1.push_back(ld.h1v.back().carrier);
    parts2.push_back(ld.h2v.back().carrier);
  }
  ld.sum1 = direct_sum(parts1);
  ld.sum2 = direct_sum(parts2);
  auto build_localize = [&](const CohomologyGroup& global, const std::vector<CohomologyGroup>& locals,
                            const SumDecomposition& sum) {
    Mat mat(sum.total.rank(), global.carrier.rank());
    for (int t = 0; t < global.carrier.rank(); ++t) {
      Elem col = sum.total.zero();
      for (size_t p = 0; p < fx.places.size(); ++p) {
        Elem local = locals[p].reduce(restrict_to(global.reps[t], fx.places[p].gv));
        col = sum.total.add(col, sum.inject[p].apply(local));
      }
      for (int i = 0; i < sum.total.rank(); ++i) mat.at(i, t) = col[i];
    }
    return AbHom(global.carrier, sum.total, std::move(mat));
  };
  ld.localize1 = build_localize(ld.h1_global, ld.h1v, ld.sum1);
  ld.localize2 = build_localize(ld.h2_global, ld.h2v, ld.sum2);
  return ld;
}

Elem LocalData::place_component(const Elem& tuple, int place) const {
  return sum1.project[place].apply(tuple);
}

Elem LocalData::tuple_from_components(const std::vector<Elem>& comps) const {
  Elem out = sum1.total.zero();
  for (size_t p = 0; p < comps.size(); ++p)
    out = sum1.total.add(out, sum1.inject[p].apply(comps[p]));
  return out;
}

SubgroupPresentation unramified_subgroup(const ArithmeticFixture& fx, int place,
                                         const LocalData& ld) {
  const Place& p = fx.places[place];
  CohomologyGroup h1i = cohomology(p.iv, ld.m, 1);
  const CohomologyGroup& h1v = ld.h1v[place];
  Mat mat(h1i.carrier.rank(), h1v.carrier.rank());
  for (int t = 0; t < h1v.carrier.rank(); ++t) {
    Elem r = h1i.reduce(restrict_to(h1v.reps[t], p.iv));
    for (int i = 0; i < h1i.carrier.rank(); ++i) mat.at(i, t) = r[i];
  }
  return kernel(AbHom(h1v.carrier, h1i.carrier, std::move(mat)));
}

SubgroupPresentation unramified_sum(const ArithmeticFixture& fx, const LocalData& ld) {
  std::vector<Elem> gens;
  for (size_t p = 0; p < fx.places.size(); ++p) {
    SubgroupPresentation u = unramified_subgroup(fx, static_cast<int>(p), ld);
    for (const Elem& g : u.generators()) gens.push_back(ld.sum1.inject[p].apply(g));
  }
  return subgroup(ld.sum1.total, gens);
}

BilinearForm local_pairing(const FixtureContext& ctx, int place, const LocalData& ldm,
                           const LocalData& ldd) {
  const ArithmeticFixture& fx = *ctx.fx;
  const Place& p = fx.places[place];
  const CohomologyGroup& a = ldm.h1v[place];
  const CohomologyGroup& b = ldd.h1v[place];
  GBilinear ev = evaluation_pairing(ldm.m, fx.c);
  if (!(ev.right.m == ldd.m.m))
    fail(errc::group_mismatch, "local pairing needs the dual module's local data");
  Mat vals(a.carrier.rank(), b.carrier.rank());
  const CohomologyGroup& h2c = ctx.fc->h2v_c[place];
  for (int i = 0; i < a.carrier.rank(); ++i)
    for (int j = 0; j < b.carrier.rank(); ++j) {
      Cochain z = cup(a.reps[i], b.reps[j], ev);
      Elem cls = h2c.reduce(z);
      vals.at(i, j) = p.inv.apply(cls).empty() ? 0 : p.inv.apply(cls)[0];
    }
  return BilinearForm{a.carrier, b.carrier, fx.n(), std::move(vals)};
}

BilinearForm total_pairing(const FixtureContext& ctx, const LocalData& ldm,
                           const LocalData& ldd) {
  const ArithmeticFixture& fx = *ctx.fx;
  Mat vals(ldm.sum1.total.rank(), ldd.sum1.total.rank());
  for (size_t p = 0; p < fx.places.size(); ++p) {
    BilinearForm lp = local_pairing(ctx, static_cast<int>(p), ldm, ldd);
    int oa = ldm.sum1.offsets[p], ob = ldd.sum1.offsets[p];
    for (int i = 0; i < lp.a.rank(); ++i)
      for (int j = 0; j < lp.b.rank(); ++j) vals.at(oa + i, ob + j) = lp.vals.at(i, j);
  }
  return BilinearForm{ldm.sum1.total, ldd.sum1.total, fx.n(), std::move(vals)};
}

std::vector<GModule> standard_module_battery(const ArithmeticFixture& fx) {
  std::vector<GModule> out;
  long long n = fx.n();
  for (long long d = 2; d <= n; ++d)
    if (n % d == 0) out.push_back(torsion_submodule(fx.c, d));
  return out;
}

namespace {

std::string elem_str(const Elem& e) {
  std::string s = "(";
  for (size_t i = 0; i < e.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(e[i]);
  }
  return s + ")";
}

} // namespace

Report validate_fixture(const FixtureContext& ctx, const std::vector<GModule>& modules) {
  const ArithmeticFixture& fx = *ctx.fx;
  Report rep;
  rep.title = "fixture validation";
  long long n = fx.n();

  // V1: sum of local invariants of globally-defined 2-classes vanishes
  {
    const CohomologyGroup& h2g = ctx.fc->h2_global_c;
    bool ok = true;
    std::string detail;
    for (int t = 0; t < h2g.carrier.rank() && ok; ++t) {
      long long total = 0;
      for (size_t p = 0; p < fx.places.size(); ++p) {
        Elem cls = ctx.fc->h2v_c[p].reduce(restrict_to(h2g.reps[t], fx.places[p].gv));
        Elem val = fx.places[p].inv.apply(cls);
        total = (total + (val.empty() ? 0 : val[0])) % n;
      }
      if (total != 0) {
        ok = false;
        detail = "H2(G,C) generator " + std::to_string(t) + " has invariant sum " +
                 std::to_string(total) + "/" + std::to_string(n);
      }
    }
    rep.add("V1 reciprocity", ok ? Verdict::pass : Verdict::fail, detail);
  }

  for (size_t mi = 0; mi < modules.size(); ++mi) {
    const GModule& m = modules[mi];
    std::string mtag = "module " + std::to_string(mi);
    if (n % std::max<long long>(m.m.exponent(), 1) != 0) {
      rep.fail_item("V2 local perfectness [" + mtag + "]", "module exponent does not divide N");
      continue;
    }
    GModule md = dual_module(m, fx.c);
    LocalData ldm = make_local_data(fx, m);
    LocalData ldd = make_local_data(fx, md);
    for (size_t p = 0; p < fx.places.size(); ++p) {
      BilinearForm lp = local_pairing(ctx, static_cast<int>(p), ldm, ldd);
      bool sizes = lp.a.order() == lp.b.order();
      SubgroupPresentation lk = annihilator_left(lp, full_subgroup(lp.b));
      SubgroupPresentation rk = annihilator(lp, full_subgroup(lp.a));
      bool ok = sizes && lk.carrier.rank() == 0 && rk.carrier.rank() == 0;
      std::string detail;
      if (!ok) {
        detail = !sizes ? "carrier sizes differ"
                        : (lk.carrier.rank() ? "left kernel witness " + elem_str(lk.generators()[0])
                                             : "right kernel witness " + elem_str(rk.generators()[0]));
      }
      rep.add("V2 local perfectness [" + mtag + ", " + fx.places[p].label + "]",
              ok ? Verdict::pass : Verdict::fail, detail);

      SubgroupPresentation um = unramified_subgroup(fx, static_cast<int>(p), ldm);
      SubgroupPresentation ud = unramified_subgroup(fx, static_cast<int>(p), ldd);
      bool v3 = subgroup_eq(annihilator(lp, um), ud);
      rep.add("V3 unramified orthogonality [" + mtag + ", " + fx.places[p].label + "]",
              v3 ? Verdict::pass : Verdict::fail, v3 ? "" : "complement differs", false);
    }
    // V5: global images are exact orthogonal complements
    {
      BilinearForm tp = total_pairing(ctx, ldm, ldd);
      SubgroupPresentation wg = image(ldm.localize1);
      SubgroupPresentation wgd = image(ldd.localize1);
      bool ok = subgroup_eq(annihilator(tp, wg), wgd);
      rep.add("V5 global duality [" + mtag + "]", ok ? Verdict::pass : Verdict::fail,
              ok ? "" : "localized-global complement differs");
    }
  }
  return rep;
}

ArithmeticFixture dbl4_fixture() {
  FiniteGroup g = FiniteGroup::cyclic(2);
  GModule c = cyclic_coefficient(g, 4, {1, 3});
  ArithmeticFixture fx{g, c, {}};
  Subgroup whole = Subgroup::full(g);
  CohomologyGroup h2 = cohomology(whole, c, 2);
  Mat inv(1, h2.carrier.rank());
  for (int j = 0; j < h2.carrier.rank(); ++j) inv.at(0, j) = 2;
  AbHom invmap(h2.carrier, cyclic_group(4), inv);
  fx.places.push_back(Place{"v1", whole, whole, invmap});
  fx.places.push_back(Place{"v2", whole, whole, invmap});
  return fx;
}

ArithmeticFixture dbl8_fixture() {
  FiniteGroup g = FiniteGroup::cyclic(2);
  GModule c = cyclic_coefficient(g, 8, {1, 7});
  ArithmeticFixture fx{g, c, {}};
  Subgroup whole = Subgroup::full(g);
  CohomologyGroup h2 = cohomology(whole, c, 2);
  Mat inv(1, h2.carrier.rank());
  for (int j = 0; j < h2.carrier.rank(); ++j) inv.at(0, j) = 4;
  AbHom invmap(h2.carrier, cyclic_group(8), inv);
  fx.places.push_back(Place{"v1", whole, whole, invmap});
  fx.places.push_back(Place{"v2", whole, whole, invmap});
  return fx;
}

ArithmeticFixture dbl4_one_place_fixture() {
  ArithmeticFixture fx = dbl4_fixture();
  fx.places.pop_back();
  return fx;
}

namespace {

Subgroup subgroup_from_members(const FiniteGroup& g, std::vector<int> members,
                               const std::string& what) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (int x : members)
    if (x < 0 || x >= g.n) fail(errc::parse_error, what + ": element index out of range");
  Subgroup s = Subgroup::generated(g, members);
  if (s.members != members)
    fail(errc::parse_error, what + ": member list is not closed under the group law");
  return s;
}

} // namespace

ArithmeticFixture fixture_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(errc::parse_error, std::string("bad JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("version") || j["version"] != 1)
    fail(errc::parse_error, "fixture file must have version 1");
  if (!j.contains("group") || !j["group"].is_array())
    fail(errc::parse_error, "missing group table");
  std::vector<std::vector<int>> rows;
  for (const auto& r : j["group"]) rows.push_back(r.get<std::vector<int>>());
  FiniteGroup g;
  try {
    g = FiniteGroup::from_table(std::move(rows));
  } catch (const error& e) {
    fail(errc::parse_error, std::string("group: ") + e.what());
  }
  if (!j.contains("coefficient")) fail(errc::parse_error, "missing coefficient block");
  const auto& cj = j["coefficient"];
  long long n = cj.at("N").get<long long>();
  if (n < 2) fail(errc::parse_error, "coefficient N must be >= 2");
  std::vector<long long> units = cj.at("action").get<std::vector<long long>>();
  GModule c;
  try {
    c = cyclic_coefficient(g, n, units);
  } catch (const error& e) {
    fail(errc::parse_error, std::string("coefficient: ") + e.what());
  }
  ArithmeticFixture fx{g, c, {}};
  if (!j.contains("places") || !j["places"].is_array() || j["places"].empty())
    fail(errc::parse_error, "at least one place required");
  for (const auto& pj : j["places"]) {
    Place p;
    p.label = pj.at("label").get<std::string>();
    p.gv = subgroup_from_members(g, pj.at("decomposition").get<std::vector<int>>(),
                                 "place " + p.label + " decomposition");
    p.iv = subgroup_from_members(g, pj.at("inertia").get<std::vector<int>>(),
                                 "place " + p.label + " inertia");
    if (!p.iv.is_subgroup_of(p.gv))
      fail(errc::parse_error, "place " + p.label + ": inertia not inside decomposition");
    CohomologyGroup h2 = cohomology(p.gv, c, 2);
    const auto& im = pj.at("invariant");
    if (!im.is_array() || im.size() != 1)
      fail(errc::parse_error, "place " + p.label + ": invariant must be a 1-row matrix");
    std::vector<long long> row = im[0].get<std::vector<long long>>();
    if (static_cast<int>(row.size()) != h2.carrier.rank())
      fail(errc::parse_error, "place " + p.label + ": invariant matrix has wrong dimensions (H2 carrier rank " +
                              std::to_string(h2.carrier.rank()) + ")");
    Mat inv(1, h2.carrier.rank());
    for (int k = 0; k < h2.carrier.rank(); ++k) inv.at(0, k) = row[k];
    AbHom invmap(h2.carrier, cyclic_group(n), inv);
    if (!invmap.well_defined())
      fail(errc::parse_error, "place " + p.label + ": invariant matrix is not a homomorphism");
    p.inv = invmap;
    fx.places.push_back(std::move(p));
  }
  return fx;
}

ArithmeticFixture load_fixture_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::parse_error, "cannot open fixture file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return fixture_from_json(ss.str());
}

std::string fixture_to_json(const ArithmeticFixture& fx) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  auto& gt = j["group"] = nlohmann::ordered_json::array();
  for (int i = 0; i < fx.g.n; ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int k = 0; k < fx.g.n; ++k) row.push_back(fx.g.mul(i, k));
    gt.push_back(std::move(row));
  }
  j["coefficient"]["N"] = fx.n();
  nlohmann::ordered_json units = nlohmann::ordered_json::array();
  for (int i = 0; i < fx.g.n; ++i)
    units.push_back(fx.c.action[i].at(0, 0).convert_to<long long>());
  j["coefficient"]["action"] = std::move(units);
  auto& pl = j["places"] = nlohmann::ordered_json::array();
  for (const Place& p : fx.places) {
    nlohmann::ordered_json pj;
    pj["label"] = p.label;
    pj["decomposition"] = p.gv.members;
    pj["inertia"] = p.iv.members;
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int k = 0; k < p.inv.m.cols; ++k) row.push_back(p.inv.m.at(0, k).convert_to<long long>());
    pj["invariant"] = nlohmann::ordered_json::array({std::move(row)});
    pl.push_back(std::move(pj));
  }
  return j.dump(2);
}

std::vector<SearchHit> search_fixtures(const SearchBounds& bounds, std::uint64_t seed, int want) {
  Rng rng(seed);
  std::vector<SearchHit> hits;
  std::set<std::string> seen;

  std::vector<FiniteGroup> groups;
  for (int k = 1; k <= bounds.max_group_order && k <= 4; ++k) groups.push_back(FiniteGroup::cyclic(k));
  if (bounds.max_group_order >= 4) groups.push_back(FiniteGroup::klein_four());

  std::vector<long long> ns;
  for (long long n = 2; n <= bounds.max_n; ++n) ns.push_back(n);

  for (int attempt = 0; attempt < bounds.attempts && static_cast<int>(hits.size()) < want;
       ++attempt) {
    const FiniteGroup& g = groups[rng.pick(groups.size())];
    long long n = ns[rng.pick(ns.size())];
    // all homomorphisms G -> (Z/n)^x, chosen among unit assignments
    std::vector<long long> units;
    for (long long u = 1; u < n; ++u)
      if (std::gcd(u, n) == 1) units.push_back(u);
    std::vector<std::vector<long long>> homs;
    std::vector<size_t> pick(g.n, 0);
    while (true) {
      std::vector<long long> cand(g.n);
      for (int i = 0; i < g.n; ++i) cand[i] = units[pick[i]];
      bool ok = cand[g.identity] == 1;
      for (int a = 0; a < g.n && ok; ++a)
        for (int b = 0; b < g.n && ok; ++b)
          if (cand[g.mul(a, b)] != cand[a] * cand[b] % n) ok = false;
      if (ok) homs.push_back(cand);
      int i = g.n - 1;
      while (i >= 0 && ++pick[i] == units.size()) pick[i--] = 0;
      if (i < 0) break;
    }
    if (homs.empty()) continue;
    GModule c = cyclic_coefficient(g, n, homs[rng.pick(homs.size())]);
    ArithmeticFixture fx{g, c, {}};
    std::vector<Subgroup> subs = all_subgroups(g);
    int nplaces = 1 + static_cast<int>(rng.below(bounds.max_places));
    for (int p = 0; p < nplaces; ++p) {
      Subgroup gv = bounds.full_places ? Subgroup::full(g) : subs[rng.pick(subs.size())];
      std::vector<Subgroup> inner;
      for (const Subgroup& s : subs)
        if (s.is_subgroup_of(gv)) inner.push_back(s);
      Subgroup iv = inner[rng.pick(inner.size())];
      CohomologyGroup h2 = cohomology(gv, c, 2);
      Mat inv(1, h2.carrier.rank());
      for (int k = 0; k < h2.carrier.rank(); ++k) {
        long long d = h2.carrier.moduli[k];
        inv.at(0, k) = (n / d) * rng.below(d);
      }
      fx.places.push_back(Place{"v" + std::to_string(p + 1), gv, iv,
                                AbHom(h2.carrier, cyclic_group(n), inv)});
    }
    std::string key = fixture_to_json(fx);
    if (seen.count(key)) continue;
    seen.insert(key);
    FixtureContext ctx = FixtureContext::make(fx);
    Report rep = validate_fixture(ctx, standard_module_battery(fx));
    if (rep.all_required_pass()) hits.push_back(SearchHit{*ctx.fx, std::move(rep)});
  }
  return hits;
}

} // namespace ctpair
