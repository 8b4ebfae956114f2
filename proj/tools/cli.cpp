#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>

#include <CLI11.hpp>

#include "exmono/adjoint_modl.hpp"
#include "exmono/chevalley.hpp"
#include "exmono/curve_forge.hpp"
#include "exmono/principal_sl2.hpp"
#include "exmono/root_data.hpp"
#include "exmono/selmer_ledger.hpp"
#include "exmono/serialize.hpp"

namespace exmono::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string group;
  std::optional<i64> ell;
  std::uint64_t seed = 0;
  std::string out;
};

RootSystem parse_group(const std::string& label) {
  const auto t = parse_cartan_type(label);
  if (!t || !is_exceptional(*t)) throw UsageError("unsupported group '" + label + "' (expected G2, F4, E6, E7 or E8)");
  return build_root_system(*t);
}

i64 resolve_ell(const RootSystem& system, const std::optional<i64>& ell) {
  if (!ell) return smallest_admissible_prime(system);
  if (!is_prime(*ell)) throw UsageError("--ell must be prime, got " + std::to_string(*ell));
  return *ell;
}

/// --out wins; otherwise $EXMONO_OUTPUT_DIR/<name>; otherwise nothing.
std::optional<std::filesystem::path> output_path(const std::string& out, const std::string& default_name) {
  if (!out.empty()) return std::filesystem::path(out);
  if (const char* dir = std::getenv("EXMONO_OUTPUT_DIR"); dir && *dir) return std::filesystem::path(dir) / default_name;
  return std::nullopt;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

void emit(const Json& report, const std::optional<std::filesystem::path>& path, std::ostream& out) {
  const std::string text = dump_canonical(report);
  out << text;
  if (path) write_file(*path, text);
}

Json list(const std::vector<int>& xs) {
  Json a = Json::array();
  for (int x : xs) a.push_back(std::to_string(x));
  return a;
}

int verify_lie(const Common& c, std::size_t trials, std::ostream& out, std::ostream& err) {
  const RootSystem system = parse_group(c.group);
  const i64 ell = resolve_ell(system, c.ell);
  const ChevalleyAlgebra g(system);
  const int h = system.coxeter_number();
  Json suites;
  std::vector<std::string> failed;
  auto suite = [&](const std::string& name, bool ok, Json detail) {
    detail["ok"] = ok;
    suites[name] = std::move(detail);
    if (!ok) failed.push_back(name);
  };

  const JacobiReport jacobi = verify_jacobi(g);
  suite("jacobi", jacobi.ok(), to_json(jacobi));

  const PrincipalTriple t = build_principal_triple(g);
  const bool hx = bracket(g, t.H, t.X) == AdElement{[&] {
    Vec v = t.X.coords;
    for (i64& x : v) x *= 2;
    return v;
  }(), std::nullopt};
  const bool hy = bracket(g, t.H, t.Y) == AdElement{[&] {
    Vec v = t.Y.coords;
    for (i64& x : v) x *= -2;
    return v;
  }(), std::nullopt};
  const bool xy = bracket(g, t.X, t.Y) == t.H;
  suite("triple", hx && hy && xy, {{"h_x", hx}, {"h_y", hy}, {"x_y", xy}, {"r", [&] {
                                     Json a = Json::array();
                                     for (i64 x : t.r) a.push_back(std::to_string(x));
                                     return a;
                                   }()}});

  const StringDecomposition over_q = decompose_adjoint(g, t);
  const StringDecomposition mod_ell = decompose_adjoint(g, t, ell);
  std::vector<int> heights(static_cast<std::size_t>(h), 0);
  for (const Root& r : system.positive_roots()) ++heights[static_cast<std::size_t>(system.height(r))];
  // The exponent m occurs (#roots of height m) - (#roots of height m+1) times.
  std::vector<int> expected;
  for (int m = 1; m < h; ++m) {
    const int next = m + 1 < h ? heights[static_cast<std::size_t>(m + 1)] : 0;
    for (int k = 0; k < heights[static_cast<std::size_t>(m)] - next; ++k) expected.push_back(m);
  }
  const bool exps_ok = over_q.exponents() == expected && mod_ell.exponents() == expected &&
                       over_q.total_dimension() == g.dim() && mod_ell.total_dimension() == g.dim();
  suite("exponents", exps_ok,
        {{"rational", to_json(over_q)}, {"mod_ell", to_json(mod_ell)}, {"height_count", list(expected)}});

  const std::optional<int> theta = nilpotency_index(g, basis_element(g, system.rank() + system.num_positive() - 1));
  const std::optional<int> principal = nilpotency_index(g, t.X);
  const bool nil_ok = theta == 3 && principal == 2 * h - 1;
  suite("nilpotency", nil_ok,
        {{"ad_x_theta", theta ? Json(std::to_string(*theta)) : Json(nullptr)},
         {"ad_x_principal", principal ? Json(std::to_string(*principal)) : Json(nullptr)},
         {"expected_principal", std::to_string(2 * h - 1)}});

  const RegReport reg = verify_reg_surjectivity(g, ell);
  suite("reg", reg.ok(), to_json(reg));

  const NoSectionReport theta_lifts =
      verify_no_section_expansion(g, ell, 1, trials, NoSectionVariant::HighestRoot, c.seed);
  const NoSectionReport principal_lifts =
      verify_no_section_expansion(g, ell, 1, trials, NoSectionVariant::Principal, c.seed);
  suite("no_section", theta_lifts.ok() && principal_lifts.ok(),
        {{"highest_root", to_json(theta_lifts)}, {"principal", to_json(principal_lifts)}});

  Json report{{"schema_version", std::to_string(kSchemaVersion)},
              {"command", "verify-lie"},
              {"group", std::string(system.label())},
              {"rank", std::to_string(system.rank())},
              {"dimension", std::to_string(g.dim())},
              {"coxeter_number", std::to_string(h)},
              {"floor_prime", std::to_string(ell)},
              {"exponents", list(over_q.exponents())},
              {"suites", suites},
              {"ok", failed.empty()}};
  emit(report, output_path(c.out, "verify-lie-" + std::string(system.label()) + ".json"), out);
  for (const auto& f : failed) err << "check failed: " << f << "\n";
  return failed.empty() ? kOk : kCheckFailed;
}

int seed_curve(const Common& c, i64 trace, i64 sample_bound, std::ostream& out, std::ostream& err) {
  const RootSystem system = parse_group(c.group);
  const i64 ell = resolve_ell(system, c.ell);
  SeedCertificate cert;
  try {
    cert = forge_seed(system, ell, {c.seed, trace, sample_bound});
  } catch (const InadmissiblePrime& e) {
    err << "rejected: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const SearchExhausted& e) {
    err << "search exhausted: " << e.what() << "\n";
    return kCheckFailed;
  }
  const std::string name =
      "seed-" + std::string(system.label()) + "-" + std::to_string(ell) + "-" + std::to_string(c.seed) + ".json";
  emit(to_json(cert), output_path(c.out, name), out);
  if (const CheckRecord* f = cert.first_failure()) {
    err << "check failed: " << f->name << " (" << f->value << ")\n";
    return kCheckFailed;
  }
  return kOk;
}

int check_hypotheses(const Common& c, std::ostream& out, std::ostream& err) {
  const RootSystem system = parse_group(c.group);
  const i64 ell = resolve_ell(system, c.ell);
  const AdmissibilityReport adm = check_admissibility(system, ell);
  std::vector<std::string> failed;
  if (!adm.admissible()) failed.push_back("admissible");

  const ChevalleyAlgebra g(system);
  const std::vector<int> exps = decompose_adjoint(g, build_principal_triple(g)).exponents();
  Json sym = Json::array();
  bool sym_ok = true;
  for (int m : std::set<int>(exps.begin(), exps.end())) {
    for (unsigned f : {2u, 3u}) {
      const bool ok = sym_minimal_field_check(2 * m, ell, f);
      sym_ok = sym_ok && ok;
      sym.push_back({{"r", std::to_string(2 * m)}, {"f", std::to_string(f)}, {"moved", ok}});
    }
  }
  if (!sym_ok) failed.push_back("sym_minimal_field");
  Json adjoint = Json::array();
  bool adj_ok = true;
  for (unsigned f : {2u, 3u}) {
    const bool ok = adjoint_eigenvalue_field_check(system, ell, f);
    adj_ok = adj_ok && ok;
    adjoint.push_back({{"f", std::to_string(f)}, {"moved", ok}});
  }
  if (!adj_ok) failed.push_back("adjoint_minimal_field");
  // r_i = 1 + i (ell - 1): positive, distinct and 1 mod ell - 1.
  Vec hodge_r(system.rank());
  for (std::size_t i = 0; i < hodge_r.size(); ++i) hodge_r[i] = 1 + static_cast<i64>(i) * (ell - 1);
  const bool hodge = validate_hodge_cocharacter(system, ell, hodge_r);
  if (!hodge) failed.push_back("hodge_cocharacter");

  Json report{{"schema_version", std::to_string(kSchemaVersion)},
              {"command", "check-hypotheses"},
              {"group", std::string(system.label())},
              {"coxeter_number", std::to_string(system.coxeter_number())},
              {"center_order", std::to_string(system.center_order())},
              {"floor_prime", std::to_string(admissible_prime_floor(system))},
              {"smallest_admissible", std::to_string(smallest_admissible_prime(system))},
              {"admissibility", to_json(adm)},
              {"sym_minimal_field", sym},
              {"adjoint_minimal_field", adjoint},
              {"hodge_cocharacter", {{"r", [&] {
                                        Json a = Json::array();
                                        for (i64 x : hodge_r) a.push_back(std::to_string(x));
                                        return a;
                                      }()},
                                      {"ok", hodge}}}};
  if (adm.admissible()) {
    const RegReport reg = verify_reg_surjectivity(g, ell);
    report["reg"] = to_json(reg);
    if (!reg.ok()) failed.push_back("reg");
  } else {
    report["reg"] = nullptr;
  }
  report["ok"] = failed.empty();
  emit(report, output_path(c.out, "hypotheses-" + std::string(system.label()) + "-" + std::to_string(ell) + ".json"),
       out);
  for (const auto& f : failed) err << "check failed: " << f << "\n";
  return failed.empty() ? kOk : kCheckFailed;
}

int selmer_sim(i64 p, std::size_t dims, std::size_t trials, bool exhaustive, const Common& c, std::ostream& out,
               std::ostream& err) {
  if (p != 2 && p != 3 && p != 5) throw UsageError("--field must be 2, 3 or 5");
  if (dims > 12) throw UsageError("--dims above 12 refused (budget guard)");
  if (exhaustive && p != 2) throw UsageError("--exhaustive needs --field 2");
  if (!exhaustive && dims < 6) throw UsageError("--dims must be at least 6 for random campaigns");
  const CampaignReport report = run_selmer_campaign(p, dims, trials, exhaustive, c.seed);
  const std::string name = "selmer-" + std::to_string(p) + "-" + std::to_string(dims) + "-" +
                           (exhaustive ? std::string("exhaustive") : std::to_string(trials) + "-" + std::to_string(c.seed)) +
                           ".json";
  auto path = output_path(c.out, name);
  if (!report.ok() && !path) path = std::filesystem::path(name);
  emit(to_json(report), path, out);
  if (!report.ok()) {
    err << "check failed: " << report.counterexamples.front().check << "; counterexamples written to "
        << path->string() << "\n";
    return kCheckFailed;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exceptional monodromy seed curves and verification suites", "exmono"};
  app.require_subcommand(1);
  Common c;
  std::size_t lie_trials = 0, selmer_trials = 500;
  i64 trace = 2, sample_bound = 1000, field = 2;
  std::size_t dims = 8;
  bool exhaustive = false;

  auto add_group = [&](CLI::App* s) { s->add_option("--group", c.group, "G2, F4, E6, E7 or E8")->required(); };
  auto add_common = [&](CLI::App* s) {
    s->add_option("--seed", c.seed, "RNG seed");
    s->add_option("--out", c.out, "Output file (default: $EXMONO_OUTPUT_DIR/<name> when set)");
  };
  auto add_ell = [&](CLI::App* s) {
    s->add_option_function<i64>("--ell", [&](const i64& v) { c.ell = v; }, "Prime (default: smallest admissible)");
  };

  CLI::App* lie = app.add_subcommand("verify-lie", "Lie algebra, triple, (REG) and no-section suites");
  add_group(lie);
  add_ell(lie);
  add_common(lie);
  lie->add_option("--trials", lie_trials, "Random lifts per no-section variant (default 10, 3 for E8)");

  CLI::App* seed = app.add_subcommand("seed-curve", "Forge and certify a seed elliptic curve");
  add_group(seed);
  add_ell(seed);
  add_common(seed);
  seed->add_option("--trace", trace, "Trace of Frobenius at ell");
  seed->add_option("--sample-bound", sample_bound, "Largest prime sampled for image evidence");

  CLI::App* hyp = app.add_subcommand("check-hypotheses", "Admissibility and minimal-field checks");
  add_group(hyp);
  add_ell(hyp);
  add_common(hyp);

  CLI::App* sel = app.add_subcommand("selmer-sim", "Selmer ledger property campaign");
  sel->add_option("--field", field, "Field size: 2, 3 or 5");
  sel->add_option("--dims", dims, "Largest total local dimension (at most 12)");
  sel->add_option("--trials", selmer_trials, "Random instances");
  sel->add_flag("--exhaustive", exhaustive, "Enumerate every global subspace (F_2 only)");
  add_common(sel);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (lie->parsed()) {
      if (lie_trials == 0) lie_trials = c.group == "E8" ? 3 : 10;
      return verify_lie(c, lie_trials, out, err);
    }
    if (seed->parsed()) return seed_curve(c, trace, sample_bound, out, err);
    if (hyp->parsed()) return check_hypotheses(c, out, err);
    return selmer_sim(field, dims, selmer_trials, exhaustive, c, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
}

}  // namespace exmono::cli
