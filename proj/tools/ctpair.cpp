// Command-line front end: fixture validation, Selmer groups, the pairing and
// its theorem suites, theta checks, and fixture search.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "ctpair/ctp.hpp"
#include "ctpair/theta.hpp"

using namespace ctpair;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::parse_error, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string resolve_fixture_path(const std::string& arg) {
  namespace fs = std::filesystem;
  if (fs::exists(arg)) return arg;
  if (const char* dir = std::getenv("CTPAIR_FIXTURE_DIR")) {
    fs::path p = fs::path(dir) / arg;
    if (fs::exists(p)) return p.string();
    p = fs::path(dir) / (arg + ".json");
    if (fs::exists(p)) return p.string();
  }
  fail(errc::parse_error, "fixture file not found: " + arg);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    std::ofstream out(out_path);
    out << text;
  }
}

GModule parse_module(const FixtureContext& ctx, const std::string& desc) {
  if (desc == "C") return ctx.fx->c;
  if (desc.starts_with("C[") && desc.back() == ']') {
    long long k = std::stoll(desc.substr(2, desc.size() - 3));
    return torsion_submodule(ctx.fx->c, k);
  }
  if (desc.starts_with("triv[") && desc.back() == ']') {
    auto inner = nlohmann::json::parse("[" + desc.substr(5, desc.size() - 6) + "]");
    return trivial_gmodule(ctx.fx->g, FiniteAbelianGroup(inner.get<std::vector<long long>>()));
  }
  fail(errc::parse_error, "unknown module descriptor: " + desc);
}

SubgroupPresentation parse_conditions(const FixtureContext& ctx, const GModule&,
                                      const LocalData& ld, const std::string& desc) {
  if (desc == "full") return full_subgroup(ld.sum1.total);
  if (desc == "zero") return trivial_subgroup(ld.sum1.total);
  if (desc == "ur") return unramified_sum(*ctx.fx, ld);
  if (desc == "global") return image(ld.localize1);
  if (desc.starts_with("gens[")) {
    auto arr = nlohmann::json::parse(desc.substr(4));
    std::vector<Elem> gens;
    for (const auto& g : arr) gens.push_back(g.get<Elem>());
    return subgroup(ld.sum1.total, gens);
  }
  fail(errc::parse_error, "unknown conditions descriptor: " + desc);
}

// Split a sequence descriptor at top-level colons (colons inside [] are kept).
std::vector<std::string> split_descriptor(const std::string& s) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ':' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

// Kummer-type sequence 0 -> C[m] -> C[mk] -> C[k] -> 0 with prescribed middle
// conditions; endpoint conditions are induced, making the sequence exact.
SES build_mu_sequence(const FixtureContext& ctx, long long mtor, long long ktor,
                      const std::string& cond) {
  long long n = ctx.n();
  if (n % (mtor * ktor) != 0) fail(errc::parse_error, "mu sequence needs m*k | N");
  GModuleHom incl_big;
  GModule big = torsion_submodule(ctx.fx->c, mtor * ktor, &incl_big);
  GModuleHom incl_small;
  GModule small = torsion_submodule(ctx.fx->c, mtor, &incl_small);
  GModuleHom incl_quot;
  GModule quot = torsion_submodule(ctx.fx->c, ktor, &incl_quot);
  // iota: C[m] -> C[mk] through the ambient C; pi = multiplication by m
  Solver big_solver(incl_big.ab());
  Mat im(big.m.rank(), small.m.rank());
  for (int t = 0; t < small.m.rank(); ++t) {
    auto x = big_solver.solve(incl_small.apply(small.m.generator(t)));
    if (!x) fail(errc::parse_error, "C[m] does not embed into C[mk]");
    for (int i = 0; i < big.m.rank(); ++i) im.at(i, t) = (*x)[i];
  }
  GModuleHom iota(small, big, std::move(im));
  Solver quot_solver(incl_quot.ab());
  Mat pm(quot.m.rank(), big.m.rank());
  for (int t = 0; t < big.m.rank(); ++t) {
    Elem v = ctx.fx->c.m.smul(mtor, incl_big.apply(big.m.generator(t)));
    auto x = quot_solver.solve(v);
    if (!x) fail(errc::parse_error, "m * C[mk] escapes C[k]");
    for (int i = 0; i < quot.m.rank(); ++i) pm.at(i, t) = (*x)[i];
  }
  GModuleHom pi(big, quot, std::move(pm));
  SModObject mid = [&] {
    SModObject o;
    o.ctx = ctx;
    o.ld = std::make_shared<const LocalData>(make_local_data(*ctx.fx, big));
    o.m = big;
    o.w = parse_conditions(ctx, big, *o.ld, cond);
    return o;
  }();
  LocalData ld_small = make_local_data(*ctx.fx, small);
  LocalData ld_quot = make_local_data(*ctx.fx, quot);
  AbHom iota_loc = induced_local1(*ctx.fx, ld_small, *mid.ld, iota);
  AbHom pi_loc = induced_local1(*ctx.fx, *mid.ld, ld_quot, pi);
  SModObject first = make_object(ctx, small, preimage(iota_loc, mid.w));
  SModObject last = make_object(ctx, quot, image(pi_loc, mid.w));
  return SES{make_morphism(first, mid, iota), make_morphism(mid, last, pi)};
}

struct ParsedSequence {
  SES sequence;
  std::optional<SumConditionsResult> sum; // set for sum-of-conditions descriptors
};

ParsedSequence parse_sequence(const FixtureContext& ctx, const std::string& desc) {
  std::vector<std::string> parts = split_descriptor(desc);
  if (parts.empty()) fail(errc::parse_error, "empty sequence descriptor");
  if (parts[0] == "mu") {
    if (parts.size() < 2) fail(errc::parse_error, "mu descriptor needs m,k");
    auto comma = parts[1].find(',');
    if (comma == std::string::npos) fail(errc::parse_error, "mu descriptor needs m,k");
    long long m = std::stoll(parts[1].substr(0, comma));
    long long k = std::stoll(parts[1].substr(comma + 1));
    std::string cond = parts.size() > 2 ? parts[2] : "global";
    return ParsedSequence{build_mu_sequence(ctx, m, k, cond), std::nullopt};
  }
  if (parts[0] == "sum") {
    if (parts.size() != 4) fail(errc::parse_error, "sum descriptor: sum:MODULE:WA:WB");
    GModule m = parse_module(ctx, parts[1]);
    LocalData ld = make_local_data(*ctx.fx, m);
    SubgroupPresentation wa = parse_conditions(ctx, m, ld, parts[2]);
    SubgroupPresentation wb = parse_conditions(ctx, m, ld, parts[3]);
    SumConditionsResult sc = sum_conditions_sequence(ctx, m, wa, wb);
    SES seq = sc.sequence;
    return ParsedSequence{seq, std::move(sc)};
  }
  if (parts[0] == "split") {
    if (parts.size() != 5) fail(errc::parse_error, "split descriptor: split:M1:COND1:M2:COND2");
    GModule m1 = parse_module(ctx, parts[1]);
    GModule m2 = parse_module(ctx, parts[3]);
    auto make = [&](const GModule& m, const std::string& cond) {
      SModObject o;
      o.ctx = ctx;
      o.ld = std::make_shared<const LocalData>(make_local_data(*ctx.fx, m));
      o.m = m;
      o.w = parse_conditions(ctx, m, *o.ld, cond);
      return o;
    };
    return ParsedSequence{split_sequence(make(m1, parts[2]), make(m2, parts[4])), std::nullopt};
  }
  fail(errc::parse_error, "unknown sequence descriptor: " + desc);
}

nlohmann::ordered_json matrix_json(const Mat& m, long long n) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int i = 0; i < m.rows; ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int j = 0; j < m.cols; ++j)
      row.push_back(std::to_string(m.at(i, j).convert_to<long long>()) + "/" +
                    std::to_string(n));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string matrix_csv(const Mat& m, long long n) {
  std::string out;
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      if (j) out += ",";
      out += std::to_string(m.at(i, j).convert_to<long long>()) + "/" + std::to_string(n);
    }
    out += "\n";
  }
  return out;
}

nlohmann::ordered_json report_json(const Report& rep) {
  return nlohmann::ordered_json::parse(rep.to_json_string());
}

struct CommonOpts {
  std::string fixture, format = "text", out;
  std::uint64_t seed = 0;
  int resample = 1;
};

int run_validate(const CommonOpts& opts) {
  FixtureContext ctx = FixtureContext::make(load_fixture_file(resolve_fixture_path(opts.fixture)));
  Report rep = validate_fixture(ctx, standard_module_battery(*ctx.fx));
  bool gate = true; // exit gate: V1 + V2 only
  for (const auto& it : rep.items)
    if ((it.name.starts_with("V1") || it.name.starts_with("V2")) && it.verdict == Verdict::fail)
      gate = false;
  if (opts.format == "json")
    emit(report_json(rep).dump(2), opts.out);
  else
    emit(rep.to_text(), opts.out);
  return gate ? kExitPass : kExitCheckFailure;
}

int run_selmer(const CommonOpts& opts, const std::string& module_desc,
               const std::string& cond_desc) {
  FixtureContext ctx = FixtureContext::make(load_fixture_file(resolve_fixture_path(opts.fixture)));
  GModule m = parse_module(ctx, module_desc);
  SModObject obj;
  obj.ctx = ctx;
  obj.ld = std::make_shared<const LocalData>(make_local_data(*ctx.fx, m));
  obj.m = m;
  obj.w = parse_conditions(ctx, m, *obj.ld, cond_desc);
  SelmerGroup sel = selmer(obj);
  auto [sha1, sha2] = sha(obj);
  if (opts.format == "json") {
    nlohmann::ordered_json j;
    j["fixture"] = opts.fixture;
    j["module"] = module_desc;
    j["conditions"] = cond_desc;
    j["h1_global"] = obj.ld->h1_global.carrier.moduli;
    j["selmer"] = sel.carrier.moduli;
    j["sha1"] = sha1.carrier.moduli;
    j["sha2"] = sha2.carrier.moduli;
    emit(j.dump(2), opts.out);
  } else {
    auto fmt = [](const std::vector<long long>& v) {
      std::string s = "[";
      for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
      return s + "]";
    };
    std::string text = "selmer report\n";
    text += "  H1(G,M) invariants: " + fmt(obj.ld->h1_global.carrier.moduli) + "\n";
    text += "  Sel invariants:     " + fmt(sel.carrier.moduli) + "\n";
    text += "  Sha1 invariants:    " + fmt(sha1.carrier.moduli) + "\n";
    text += "  Sha2 invariants:    " + fmt(sha2.carrier.moduli) + "\n";
    emit(text, opts.out);
  }
  return kExitPass;
}

int run_ctp(const CommonOpts& opts, const std::string& seq_desc, const std::string& checks) {
  FixtureContext ctx = FixtureContext::make(load_fixture_file(resolve_fixture_path(opts.fixture)));
  ParsedSequence ps = parse_sequence(ctx, seq_desc);
  CtpEngine eng(ps.sequence);
  CtpOptions copts;
  copts.resample = opts.resample;
  copts.seed = opts.seed;
  Mat mx = eng.matrix(copts);
  bool all_ok = true;
  nlohmann::ordered_json j;
  j["fixture"] = opts.fixture;
  j["sequence"] = seq_desc;
  j["canonical"] = eng.canonical();
  if (!eng.canonical()) j["stamp"] = "NON-CANONICAL";
  j["sel_m2"] = eng.sel2().carrier.moduli;
  j["sel_m1_dual"] = eng.sel1d().carrier.moduli;
  j["matrix"] = matrix_json(mx, eng.modulus());
  nlohmann::ordered_json checks_json = nlohmann::ordered_json::array();
  auto want = [&](const char* name) {
    return checks == "all" || checks.find(name) != std::string::npos;
  };
  std::string text;
  text += "cassels-tate pairing report\n";
  if (!eng.canonical()) text += "  [NON-CANONICAL] fixture fails reciprocity\n";
  text += "  Sel(M2) invariants:";
  for (long long v : eng.sel2().carrier.moduli) text += " " + std::to_string(v);
  text += "\n  Sel(M1^dual) invariants:";
  for (long long v : eng.sel1d().carrier.moduli) text += " " + std::to_string(v);
  text += "\n  matrix (entries k/" + std::to_string(eng.modulus()) + "):\n";
  for (int i = 0; i < mx.rows; ++i) {
    text += "   ";
    for (int jj = 0; jj < mx.cols; ++jj) text += " " + mx.at(i, jj).convert_to<std::string>();
    text += "\n";
  }
  auto add_report = [&](const Report& rep) {
    checks_json.push_back(report_json(rep));
    text += rep.to_text();
    if (!rep.all_required_pass()) all_ok = false;
  };
  if (checks != "none") {
    if (want("kernels")) add_report(check_kernels(eng));
    if (want("duality")) add_report(check_duality(eng));
    if (ps.sum && want("explicit")) add_report(ps.sum->report);
  }
  j["checks"] = std::move(checks_json);
  j["ok"] = all_ok;
  if (opts.format == "json")
    emit(j.dump(2), opts.out);
  else if (opts.format == "csv")
    emit(matrix_csv(mx, eng.modulus()), opts.out);
  else
    emit(text, opts.out);
  return all_ok ? kExitPass : kExitCheckFailure;
}

int run_theta(const CommonOpts& opts, const std::string& theta_name,
              const std::string& seq_desc, int trials) {
  std::string path = resolve_fixture_path(opts.fixture);
  std::string raw = slurp(path);
  FixtureContext ctx = FixtureContext::make(fixture_from_json(raw));
  ParsedSequence ps = parse_sequence(ctx, seq_desc);
  const SES& e = ps.sequence;
  ThetaPresentation th;
  if (theta_name == "trivial") {
    th = trivial_theta(ctx.fx->c, e.middle().m);
  } else if (theta_name == "symplectic") {
    th = symplectic_theta(ctx.fx->c, e.middle().m);
  } else if (theta_name == "symplectic-doubled") {
    GModule half = parse_module(ctx, "triv[2,2]");
    ModuleSum ms = direct_sum_modules(half, half);
    if (!(ms.total.m == e.middle().m.m))
      fail(errc::parse_error, "symplectic-doubled expects a sum sequence over triv[2,2]");
    th = doubled_theta(symplectic_theta(ctx.fx->c, half), ms);
  } else {
    bool found = false;
    for (const ThetaBlock& block : theta_blocks_from_json(ctx, raw)) {
      if (block.name != theta_name) continue;
      found = true;
      if (block.theta.m.m == e.middle().m.m) {
        th = block.theta;
      } else {
        ModuleSum ms = direct_sum_modules(block.theta.m, block.theta.m);
        if (!(ms.total.m == e.middle().m.m))
          fail(errc::parse_error,
               "theta block '" + theta_name + "' does not match the sequence's middle module");
        th = doubled_theta(block.theta, ms);
      }
    }
    if (!found) fail(errc::parse_error, "no theta block named " + theta_name);
  }
  bool all_ok = true;
  std::string text = "theta suite report\n";
  nlohmann::ordered_json j;
  j["fixture"] = opts.fixture;
  j["theta"] = theta_name;
  j["sequence"] = seq_desc;
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  auto add_report = [&](const Report& rep) {
    items.push_back(report_json(rep));
    text += rep.to_text();
    if (!rep.all_required_pass()) all_ok = false;
  };
  add_report(th.validate());
  add_report(check_assumptions(e, th));
  if (assumptions_hold(e, th)) {
    PoonenStollClass psc = poonen_stoll_class(e, th);
    Report psr;
    psr.title = "Poonen-Stoll class";
    psr.add("lies in Sel(M1^dual)", psc.in_selmer ? Verdict::pass : Verdict::fail);
    add_report(psr);
    add_report(check_theta_main(e, th));
    add_report(cochain_lemma_suite(e, th, trials, opts.seed));
  }
  j["checks"] = std::move(items);
  j["ok"] = all_ok;
  if (opts.format == "json")
    emit(j.dump(2), opts.out);
  else
    emit(text, opts.out);
  return all_ok ? kExitPass : kExitCheckFailure;
}

int run_search(const CommonOpts& opts, const SearchBounds& bounds, int want,
               const std::string& out_dir) {
  auto hits = search_fixtures(bounds, opts.seed, want);
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  namespace fs = std::filesystem;
  if (!out_dir.empty()) fs::create_directories(out_dir);
  int idx = 0;
  for (const auto& hit : hits) {
    std::string name = "fixture_" + std::to_string(opts.seed) + "_" + std::to_string(idx++);
    nlohmann::ordered_json entry;
    entry["name"] = name;
    entry["group_order"] = hit.fixture.g.n;
    entry["n"] = hit.fixture.n();
    entry["places"] = static_cast<int>(hit.fixture.places.size());
    entry["validation_ok"] = hit.validation.all_required_pass();
    if (!out_dir.empty()) {
      std::string fpath = (fs::path(out_dir) / (name + ".json")).string();
      std::ofstream f(fpath);
      f << fixture_to_json(hit.fixture);
      entry["path"] = fpath;
    }
    j.push_back(std::move(entry));
  }
  if (opts.format == "json") {
    emit(j.dump(2), opts.out);
  } else {
    std::string text = "found " + std::to_string(hits.size()) + " validated fixtures\n";
    for (const auto& entry : j)
      text += "  " + entry["name"].get<std::string>() +
              ": |G|=" + std::to_string(entry["group_order"].get<int>()) +
              " N=" + std::to_string(entry["n"].get<long long>()) +
              " places=" + std::to_string(entry["places"].get<int>()) + "\n";
    emit(text, opts.out);
  }
  return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact Selmer-group and Cassels-Tate pairing engine over finite arithmetic fixtures"};
  app.require_subcommand(1);
  CommonOpts opts;

  auto add_common = [&](CLI::App* cmd, bool needs_fixture = true) {
    if (needs_fixture)
      cmd->add_option("--fixture", opts.fixture,
                      "fixture file (or a name under CTPAIR_FIXTURE_DIR)")
          ->required();
    cmd->add_option("--format", opts.format, "json|csv|text")->default_val("text");
    cmd->add_option("--out", opts.out, "write the report to a file");
    cmd->add_option("--seed", opts.seed, "seed for randomized trials")->default_val("0");
    cmd->add_option("--resample", opts.resample, "choice-tuple resamples per pairing value")
        ->default_val("1")
        ->check(CLI::Range(1, 100000));
  };

  CLI::App* validate = app.add_subcommand("validate", "run the fixture axiom validators");
  add_common(validate);

  CLI::App* selmer_cmd = app.add_subcommand("selmer", "compute a Selmer group");
  add_common(selmer_cmd);
  std::string module_desc = "C", cond_desc = "global";
  selmer_cmd->add_option("--module", module_desc, "C | C[k] | triv[d1,d2,...]");
  selmer_cmd->add_option("--conditions", cond_desc, "full|zero|ur|global|gens[[..],..]");

  CLI::App* ctp_cmd = app.add_subcommand("ctp", "compute the pairing matrix and theorem checks");
  add_common(ctp_cmd);
  std::string seq_desc, checks = "all";
  ctp_cmd->add_option("--sequence", seq_desc,
                      "mu:m,k[:COND] | sum:MOD:WA:WB | split:M1:W1:M2:W2")
      ->required();
  ctp_cmd->add_option("--checks", checks, "all | none | comma list of kernels,duality,explicit");

  CLI::App* theta_cmd = app.add_subcommand("theta", "run the theta-group suites");
  add_common(theta_cmd);
  std::string theta_name = "trivial";
  int trials = 20;
  theta_cmd->add_option("--theta", theta_name, "trivial|symplectic|symplectic-doubled|<block>");
  theta_cmd->add_option("--sequence", seq_desc, "sequence descriptor")->required();
  theta_cmd->add_option("--trials", trials, "cochain lemma trials")->default_val("20");

  CLI::App* search_cmd = app.add_subcommand("search", "search for validated fixtures");
  add_common(search_cmd, false);
  SearchBounds bounds;
  int want = 5;
  std::string out_dir;
  search_cmd->add_option("--max-group", bounds.max_group_order)->default_val("4");
  search_cmd->add_option("--max-n", bounds.max_n)->default_val("8");
  search_cmd->add_option("--max-places", bounds.max_places)->default_val("4");
  search_cmd->add_option("--attempts", bounds.attempts)->default_val("400");
  search_cmd->add_option("--want", want, "number of fixtures to emit")->default_val("5");
  search_cmd->add_option("--out-dir", out_dir, "directory for emitted fixture files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (validate->parsed()) return run_validate(opts);
    if (selmer_cmd->parsed()) return run_selmer(opts, module_desc, cond_desc);
    if (ctp_cmd->parsed()) return run_ctp(opts, seq_desc, checks);
    if (theta_cmd->parsed()) return run_theta(opts, theta_name, seq_desc, trials);
    if (search_cmd->parsed()) return run_search(opts, bounds, want, out_dir);
  } catch (const error& e) {
    nlohmann::ordered_json j;
    j["error"] = errc_name(e.code);
    j["message"] = e.what();
    std::cerr << j.dump(2) << "\n";
    return e.code == errc::parse_error ? kExitUsage : kExitCheckFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  return kExitUsage;
}
