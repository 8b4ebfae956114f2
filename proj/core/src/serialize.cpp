#include "exmono/serialize.hpp"

namespace exmono {

namespace {

template <class T>
std::string num(T x) {
  return std::to_string(x);
}

std::string num(const mpz_class& x) { return x.get_str(); }

Json vec(const Vec& v) {
  Json a = Json::array();
  for (i64 x : v) a.push_back(num(x));
  return a;
}

Json vectors(const std::vector<Vec>& vs) {
  Json a = Json::array();
  for (const Vec& v : vs) a.push_back(vec(v));
  return a;
}

Json matrix(const IntMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    a.push_back(vec(Vec(row.begin(), row.end())));
  }
  return a;
}

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument("malformed JSON: " + what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field ") + key);
  return j.at(key);
}

i64 get_i64(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) bad(std::string(key) + " is not a decimal string");
  std::size_t used = 0;
  i64 x = 0;
  try {
    x = std::stoll(v.get<std::string>(), &used);
  } catch (const std::exception&) {
    bad(std::string(key) + " is not an integer");
  }
  if (used != v.get<std::string>().size()) bad(std::string(key) + " has trailing characters");
  return x;
}

i64 as_i64(const Json& v) {
  if (!v.is_string()) bad("integer entry is not a decimal string");
  try {
    return std::stoll(v.get<std::string>());
  } catch (const std::exception&) {
    bad("integer entry is not an integer");
  }
}

Vec get_vec(const Json& a) {
  if (!a.is_array()) bad("expected an array");
  Vec v;
  for (const Json& x : a) v.push_back(as_i64(x));
  return v;
}

std::vector<Vec> get_vectors(const Json& a) {
  if (!a.is_array()) bad("expected an array of vectors");
  std::vector<Vec> vs;
  for (const Json& x : a) vs.push_back(get_vec(x));
  return vs;
}

IntMatrix get_matrix(const Json& a, std::size_t cols) {
  return from_rows(get_vectors(a), cols);
}

std::size_t get_size(const Json& j, const char* key) {
  const i64 x = get_i64(j, key);
  if (x < 0) bad(std::string(key) + " is negative");
  return static_cast<std::size_t>(x);
}

Json optional_index(const std::optional<std::size_t>& i) { return i ? Json(num(*i)) : Json(nullptr); }

std::optional<std::size_t> get_optional_index(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_size(j, key);
}

Json flags(const CandidateFlags& f) { return {{"ram_type_prev", f.ram_type_prev}, {"ram_type_now", f.ram_type_now}}; }

CandidateFlags get_flags(const Json& j) {
  return {field(j, "ram_type_prev").get<bool>(), field(j, "ram_type_now").get<bool>()};
}

}  // namespace

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const WeierstrassEquation& e) {
  return {{"a1", num(e.a1())}, {"a2", num(e.a2())}, {"a3", num(e.a3())}, {"a4", num(e.a4())}, {"a6", num(e.a6())}};
}

WeierstrassEquation equation_from_json(const Json& j) {
  auto z = [&](const char* k) {
    const Json& v = field(j, k);
    if (!v.is_string()) bad(std::string(k) + " is not a decimal string");
    mpz_class x;
    if (x.set_str(v.get<std::string>(), 10) != 0) bad(std::string(k) + " is not an integer");
    return x;
  };
  return {z("a1"), z("a2"), z("a3"), z("a4"), z("a6")};
}

Json to_json(const SeedCertificate& c) {
  Json checks = Json::array();
  for (const CheckRecord& r : c.checks) checks.push_back({{"name", r.name}, {"passed", r.passed}, {"value", r.value}});
  Json samples = Json::array();
  for (const TraceSample& s : c.evidence.samples) samples.push_back({{"p", num(s.p)}, {"ap_mod_ell", num(s.ap_mod_ell)}});
  return {{"schema_version", num(kSchemaVersion)},
          {"type_label", c.type_label},
          {"ell", num(c.ell)},
          {"h", num(c.h)},
          {"a_ell", num(c.a_ell)},
          {"p0", num(c.p0)},
          {"p1", num(c.p1)},
          {"seed", num(c.seed)},
          {"equation", to_json(c.equation)},
          {"accepted", c.accepted()},
          {"checks", checks},
          {"evidence",
           {{"samples", samples},
            {"bad_primes", vec(c.evidence.bad_primes)},
            {"characters_tested", num(c.evidence.characters_tested)},
            {"character_scope_truncated", c.evidence.character_scope_truncated},
            {"borel_pair_found", c.evidence.borel_pair_found}}}};
}

SeedCertificate certificate_from_json(const Json& j) {
  if (get_i64(j, "schema_version") != kSchemaVersion) bad("unsupported schema_version");
  SeedCertificate c;
  c.type_label = field(j, "type_label").get<std::string>();
  c.ell = get_i64(j, "ell");
  c.h = get_i64(j, "h");
  c.a_ell = get_i64(j, "a_ell");
  c.p0 = get_i64(j, "p0");
  c.p1 = get_i64(j, "p1");
  c.seed = static_cast<std::uint64_t>(std::stoull(field(j, "seed").get<std::string>()));
  c.equation = equation_from_json(field(j, "equation"));
  for (const Json& r : field(j, "checks"))
    c.checks.push_back({field(r, "name").get<std::string>(), field(r, "passed").get<bool>(),
                        field(r, "value").get<std::string>()});
  const Json& ev = field(j, "evidence");
  for (const Json& s : field(ev, "samples")) c.evidence.samples.push_back({get_i64(s, "p"), get_i64(s, "ap_mod_ell")});
  c.evidence.bad_primes = get_vec(field(ev, "bad_primes"));
  c.evidence.characters_tested = get_size(ev, "characters_tested");
  c.evidence.character_scope_truncated = field(ev, "character_scope_truncated").get<bool>();
  c.evidence.borel_pair_found = field(ev, "borel_pair_found").get<bool>();
  return c;
}

Json to_json(const SelmerInstance& inst) {
  Json places = Json::array();
  for (const LocalPlace& v : inst.places)
    places.push_back({{"name", v.name},
                      {"role", v.role == PlaceRole::Sigma ? "sigma" : "auxiliary"},
                      {"dim", num(v.dim)},
                      {"pairing", matrix(v.pairing)},
                      {"fixed", vectors(v.fixed)},
                      {"unramified", vectors(v.unramified)},
                      {"ramakrishna", vectors(v.ramakrishna)},
                      {"h0_term", num(v.h0_term)}});
  Json q_ram = Json::array(), q_unr = Json::array();
  for (std::size_t i : inst.q_ram) q_ram.push_back(num(i));
  for (std::size_t i : inst.q_unr) q_unr.push_back(num(i));
  return {{"schema_version", num(kSchemaVersion)},
          {"p", num(inst.p)},
          {"places", places},
          {"global_dim", num(inst.global_dim())},
          {"restriction", matrix(inst.restriction)},
          {"declared_global_term", num(inst.declared_global_term)},
          {"q_ram", q_ram},
          {"q_unr", q_unr},
          {"q", optional_index(inst.q)},
          {"q1", optional_index(inst.q1)},
          {"q2", optional_index(inst.q2)},
          {"q1_flags", flags(inst.q1_flags)},
          {"q2_flags", flags(inst.q2_flags)}};
}

SelmerInstance instance_from_json(const Json& j) {
  if (get_i64(j, "schema_version") != kSchemaVersion) bad("unsupported schema_version");
  SelmerInstance inst;
  inst.p = get_i64(j, "p");
  for (const Json& v : field(j, "places")) {
    LocalPlace place;
    place.name = field(v, "name").get<std::string>();
    const std::string role = field(v, "role").get<std::string>();
    if (role != "sigma" && role != "auxiliary") bad("unknown place role " + role);
    place.role = role == "sigma" ? PlaceRole::Sigma : PlaceRole::Auxiliary;
    place.dim = get_size(v, "dim");
    place.pairing = get_matrix(field(v, "pairing"), place.dim);
    place.fixed = get_vectors(field(v, "fixed"));
    place.unramified = get_vectors(field(v, "unramified"));
    place.ramakrishna = get_vectors(field(v, "ramakrishna"));
    place.h0_term = get_i64(v, "h0_term");
    inst.places.push_back(std::move(place));
  }
  inst.restriction = get_matrix(field(j, "restriction"), get_size(j, "global_dim"));
  inst.declared_global_term = get_i64(j, "declared_global_term");
  for (const Json& i : field(j, "q_ram")) inst.q_ram.push_back(static_cast<std::size_t>(as_i64(i)));
  for (const Json& i : field(j, "q_unr")) inst.q_unr.push_back(static_cast<std::size_t>(as_i64(i)));
  inst.q = get_optional_index(j, "q");
  inst.q1 = get_optional_index(j, "q1");
  inst.q2 = get_optional_index(j, "q2");
  inst.q1_flags = get_flags(field(j, "q1_flags"));
  inst.q2_flags = get_flags(field(j, "q2_flags"));
  return inst;
}

Json to_json(const AdmissibilityReport& r) {
  return {{"ell", num(r.ell)},
          {"prime", r.prime},
          {"coxeter_bound", num(r.coxeter_bound)},
          {"above_coxeter_bound", r.above_coxeter_bound},
          {"excluded", r.excluded},
          {"center_bound", num(r.center_bound)},
          {"above_center_bound", r.above_center_bound},
          {"admissible", r.admissible()}};
}

Json to_json(const JacobiReport& r) {
  return {{"triples_checked", num(r.triples_checked)}, {"failures", num(r.failures)}, {"ok", r.failures == 0}};
}

Json to_json(const StringDecomposition& d) {
  Json strings = Json::array();
  for (const SlString& s : d.strings)
    strings.push_back({{"exponent", num(s.exponent)}, {"length", num(s.length)}, {"twist", num(s.twist)}});
  return {{"modulus", d.modulus ? Json(num(*d.modulus)) : Json(nullptr)},
          {"end", d.end == StringEnd::Lowest ? "lowest" : "highest"},
          {"strings", strings},
          {"total_dimension", num(d.total_dimension())}};
}

Json to_json(const NoSectionReport& r) {
  return {{"variant", r.variant == NoSectionVariant::HighestRoot ? "highest_root" : "principal"},
          {"ell", num(r.ell)},
          {"n", num(r.n)},
          {"seed", num(r.seed)},
          {"trials", num(r.trials)},
          {"congruence_failures", num(r.congruence_failures)},
          {"bracket_failures", num(r.bracket_failures)},
          {"trivial_powers", num(r.trivial_powers)},
          {"witness_trial", optional_index(r.witness_trial)},
          {"witness", r.witness},
          {"ok", r.ok()}};
}

Json to_json(const RegReport& r) {
  return {{"ell", num(r.ell)},
          {"image_dimension", num(r.image_dimension)},
          {"expected_image", num(r.expected_image)},
          {"image_in_nilradical", r.image_in_nilradical},
          {"kernel_dimension", num(r.kernel_dimension)},
          {"expected_kernel", num(r.expected_kernel)},
          {"kernel_in_nilradical", r.kernel_in_nilradical},
          {"ok", r.ok()}};
}

Json to_json(const CampaignReport& r) {
  Json cex = Json::array();
  for (const Counterexample& c : r.counterexamples) cex.push_back({{"check", c.check}, {"instance", to_json(c.instance)}});
  return {{"schema_version", num(kSchemaVersion)},
          {"p", num(r.p)},
          {"max_dim", num(r.max_dim)},
          {"exhaustive", r.exhaustive},
          {"seed", num(r.seed)},
          {"instances", num(r.instances)},
          {"wiles_checked", num(r.wiles_checked)},
          {"chase_checked", num(r.chase_checked)},
          {"hyp1_instances", num(r.hyp1_instances)},
          {"lemma_checked", num(r.lemma_checked)},
          {"forcing_checked", num(r.forcing_checked)},
          {"forcing_forced", num(r.forcing_forced)},
          {"forcing_agree", num(r.forcing_agree)},
          {"hyp2_instances", num(r.hyp2_instances)},
          {"hyp2_forced", num(r.hyp2_forced)},
          {"unobstructed_checked", num(r.unobstructed_checked)},
          {"counterexamples", cex},
          {"ok", r.ok()}};
}

}  // namespace exmono
