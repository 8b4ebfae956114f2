#include "exmono/curve_forge.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

namespace exmono {

WeierstrassEquation::WeierstrassEquation(mpz_class a1, mpz_class a2, mpz_class a3, mpz_class a4, mpz_class a6)
    : a_{std::move(a1), std::move(a2), std::move(a3), std::move(a4), std::move(a6)} {
  const auto& [x1, x2, x3, x4, x6] = std::tie(a_[0], a_[1], a_[2], a_[3], a_[4]);
  b2_ = x1 * x1 + 4 * x2;
  b4_ = 2 * x4 + x1 * x3;
  b6_ = x3 * x3 + 4 * x6;
  b8_ = x1 * x1 * x6 + 4 * x2 * x6 - x1 * x3 * x4 + x2 * x3 * x3 - x4 * x4;
  c4_ = b2_ * b2_ - 24 * b4_;
  c6_ = -b2_ * b2_ * b2_ + 36 * b2_ * b4_ - 216 * b6_;
  disc_ = -b2_ * b2_ * b8_ - 8 * b4_ * b4_ * b4_ - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;
  if (1728 * disc_ != c4_ * c4_ * c4_ - c6_ * c6_) throw std::logic_error("Weierstrass invariants are inconsistent");
}

mpq_class WeierstrassEquation::j_invariant() const {
  if (singular()) throw std::domain_error("j-invariant of a singular equation");
  mpq_class j(c4_ * c4_ * c4_, disc_);
  j.canonicalize();
  return j;
}

namespace {

mpz_class residue(const mpz_class& x, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

i64 residue(const mpz_class& x, i64 m) { return residue(x, mpz_class(static_cast<long>(m))).get_si(); }

std::string str(i64 x) { return std::to_string(x); }

}  // namespace

WeierstrassEquation WeierstrassEquation::reduce(const mpz_class& m) const {
  return {residue(a_[0], m), residue(a_[1], m), residue(a_[2], m), residue(a_[3], m), residue(a_[4], m)};
}

int valuation(const mpz_class& x, i64 p) {
  if (x == 0) throw std::domain_error("valuation of zero");
  if (p < 2) throw std::invalid_argument("valuation: bad prime");
  mpz_class y = x;
  const mpz_class pp(static_cast<long>(p));
  int v = 0;
  while (mpz_divisible_p(y.get_mpz_t(), pp.get_mpz_t())) {
    y /= pp;
    ++v;
  }
  return v;
}

int valuation(const mpq_class& x, i64 p) {
  if (x == 0) throw std::domain_error("valuation of zero");
  return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

i64 count_points_fp(const WeierstrassEquation& e, i64 p) {
  if (!is_prime(p)) throw std::invalid_argument("count_points_fp: p must be prime");
  if (residue(e.discriminant(), p) == 0) throw BadReduction("count_points_fp: bad reduction at " + std::to_string(p));
  if (p == 2) {
    i64 a[5];
    for (int i = 0; i < 5; ++i) a[i] = residue(e.coefficients()[i], p);
    i64 count = 1;
    for (i64 x = 0; x < 2; ++x)
      for (i64 y = 0; y < 2; ++y)
        if (mod_reduce(y * y + a[0] * x * y + a[2] * y - (x * x * x + a[1] * x * x + a[3] * x + a[4]), 2) == 0) ++count;
    return count;
  }
  // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
  const i64 c2 = residue(e.b2(), p);
  const i64 c1 = residue(2 * e.b4(), p);
  const i64 c0 = residue(e.b6(), p);
  std::vector<signed char> chi(static_cast<std::size_t>(p), -1);
  chi[0] = 0;
  for (i64 y = 1; y <= p / 2; ++y) chi[static_cast<std::size_t>(mul_mod(y, y, p))] = 1;
  i64 sum = 0;
  for (i64 x = 0; x < p; ++x) {
    // Horner with 4x^3 + c2 x^2 + c1 x + c0
    i64 v = mod_reduce(4, p);
    v = mod_reduce(mul_mod(v, x, p) + c2, p);
    v = mod_reduce(mul_mod(v, x, p) + c1, p);
    v = mod_reduce(mul_mod(v, x, p) + c0, p);
    sum += chi[static_cast<std::size_t>(v)];
  }
  const i64 count = p + 1 + sum;
  const i64 a = p + 1 - count;
  if (static_cast<__int128>(a) * a > static_cast<__int128>(4) * p) throw std::logic_error("Hasse bound violated");
  return count;
}

i64 trace_of_frobenius(const WeierstrassEquation& e, i64 p) { return p + 1 - count_points_fp(e, p); }

WeierstrassEquation find_trace_curve(i64 ell, i64 a, std::uint64_t seed, std::size_t budget) {
  if (!is_prime(ell) || ell <= 3) throw std::invalid_argument("find_trace_curve: ell must be a prime > 3");
  if (gcd(a, ell) != 1) throw std::invalid_argument("find_trace_curve: trace must be prime to ell");
  if (static_cast<__int128>(a) * a >= static_cast<__int128>(4) * ell)
    throw std::invalid_argument("find_trace_curve: trace violates the Hasse bound");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<i64> coef(0, ell - 1);
  for (std::size_t attempt = 0; attempt < budget; ++attempt) {
    const i64 A = coef(rng);
    const i64 B = coef(rng);
    const i64 disc = mod_reduce(4 * mul_mod(mul_mod(A, A, ell), A, ell) + 27 * mul_mod(B, B, ell), ell);
    if (disc == 0) continue;
    const auto e = WeierstrassEquation::short_form(static_cast<long>(A), static_cast<long>(B));
    if (trace_of_frobenius(e, ell) == a) return e;
  }
  throw SearchExhausted("find_trace_curve: no curve with trace " + std::to_string(a) + " mod " + std::to_string(ell) +
                        " within budget");
}

Auxiliaries choose_auxiliaries(i64 ell, i64 h) {
  if (!is_prime(ell)) throw std::invalid_argument("choose_auxiliaries: ell must be prime");
  if (ell - 1 < h) throw std::invalid_argument("choose_auxiliaries: no unit mod ell has order >= h");
  Auxiliaries aux;
  for (i64 p = 3;; p = next_prime_above(p)) {
    if (p != ell && multiplicative_order(p % ell, ell) >= h) {
      aux.p0 = p;
      break;
    }
  }
  for (i64 p = 5;; p = next_prime_above(p)) {
    if (p % 3 == 2 && p != ell && p != aux.p0) {
      aux.p1 = p;
      break;
    }
  }
  return aux;
}

WeierstrassEquation exact_p0_model(i64 p0) {
  return {1, 0, 0, mpz_class(static_cast<long>(-5 * p0)), mpz_class(static_cast<long>(-p0))};
}

WeierstrassEquation exact_p1_model(i64 p1) {
  return WeierstrassEquation::short_form(static_cast<long>(-3 * p1), static_cast<long>(-2 * p1));
}

std::pair<WeierstrassEquation, WeierstrassEquation> local_models(i64 p0, i64 p1) {
  const mpz_class m0(static_cast<long>(p0 * p0));
  const mpz_class m1(static_cast<long>(p1 * p1));
  return {exact_p0_model(p0).reduce(m0), exact_p1_model(p1).reduce(m1)};
}

WeierstrassEquation crt_lift(const WeierstrassEquation& at_ell, i64 ell, const WeierstrassEquation& at_p0, i64 p0,
                             const WeierstrassEquation& at_p1, i64 p1) {
  const std::vector<mpz_class> moduli{static_cast<long>(ell), static_cast<long>(p0 * p0), static_cast<long>(p1 * p1)};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) {
      mpz_class d;
      mpz_gcd(d.get_mpz_t(), moduli[i].get_mpz_t(), moduli[j].get_mpz_t());
      if (d != 1) throw std::invalid_argument("crt_lift: moduli are not pairwise coprime");
    }
  const mpz_class M = moduli[0] * moduli[1] * moduli[2];
  std::vector<mpz_class> lifted(5);
  for (std::size_t c = 0; c < 5; ++c) {
    mpz_class x = 0;
    const mpz_class parts[3] = {at_ell.coefficients()[c], at_p0.coefficients()[c], at_p1.coefficients()[c]};
    for (std::size_t i = 0; i < 3; ++i) {
      const mpz_class n = M / moduli[i];
      mpz_class inv;
      mpz_invert(inv.get_mpz_t(), n.get_mpz_t(), moduli[i].get_mpz_t());
      x += residue(parts[i], moduli[i]) * inv * n;
    }
    lifted[c] = residue(x, M);
  }
  WeierstrassEquation e(lifted[0], lifted[1], lifted[2], lifted[3], lifted[4]);
  while (e.singular()) {
    lifted[4] += M;
    e = WeierstrassEquation(lifted[0], lifted[1], lifted[2], lifted[3], lifted[4]);
  }
  return e;
}

bool SeedCertificate::accepted() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.passed; });
}

const CheckRecord* SeedCertificate::first_failure() const {
  for (const auto& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

SeedCertificate verify_certificate(const RootSystem& system, const WeierstrassEquation& e, i64 ell, i64 p0, i64 p1,
                                   i64 a) {
  SeedCertificate cert;
  cert.type_label = std::string(system.label());
  cert.ell = ell;
  cert.h = system.coxeter_number();
  cert.a_ell = a;
  cert.p0 = p0;
  cert.p1 = p1;
  cert.equation = e;
  auto add = [&](std::string name, bool passed, std::string value) {
    cert.checks.push_back({std::move(name), passed, std::move(value)});
  };

  const AdmissibilityReport adm = check_admissibility(system, ell);
  {
    std::ostringstream os;
    os << "prime=" << adm.prime << ";bound_4h-1=" << adm.coxeter_bound << ";excluded=" << adm.excluded
       << ";center_bound=" << adm.center_bound;
    add("admissible", adm.admissible(), os.str());
  }
  const bool ell_ok = adm.prime && ell > 3;
  const bool singular = e.singular();
  const mpz_class& disc = e.discriminant();

  const bool good_ell = ell_ok && !singular && residue(disc, ell) != 0;
  add("good_reduction_ell", good_ell, good_ell ? "v=0" : "bad");
  if (good_ell) {
    const i64 count = count_points_fp(e, ell);
    add("point_count_ell", count == ell + 1 - a, str(count));
  } else {
    add("point_count_ell", false, "bad reduction");
  }
  const i64 am = ell_ok ? mod_reduce(a, ell) : 0;
  add("trace_nonzero", ell_ok && am != 0, str(am));
  add("trace_pm1", ell_ok && am != 1 && am != ell - 1, str(am));
  add("trace_sq_ne_1", ell_ok && mul_mod(a, a, ell) != 1, str(ell_ok ? mul_mod(a, a, ell) : 0));
  add("hasse", static_cast<__int128>(a) * a < static_cast<__int128>(4) * ell, str(a));

  const bool p0_ok = is_prime(p0) && p0 != 2 && p0 != ell && ell_ok;
  const i64 order = p0_ok ? multiplicative_order(p0 % ell, ell) : 0;
  add("p0_order", p0_ok && order >= cert.h, str(order));
  if (p0_ok && !singular) {
    const int vd = valuation(disc, p0);
    add("p0_disc_val", vd == 1, str(static_cast<i64>(vd)));
    const bool c4_unit = residue(e.c4(), p0) != 0;
    add("p0_c4_val", c4_unit, c4_unit ? "0" : ">=1");
    const i64 minus_c6 = residue(-e.c6(), p0);
    add("p0_split", minus_c6 != 0 && legendre(minus_c6, p0) == 1, str(minus_c6));
  } else {
    add("p0_disc_val", false, "n/a");
    add("p0_c4_val", false, "n/a");
    add("p0_split", false, "n/a");
  }

  const bool p1_ok = is_prime(p1) && p1 >= 5 && p1 != ell && p1 != p0;
  add("p1_mod3", p1_ok && p1 % 3 == 2, str(p1 % 3));
  if (p1_ok && !singular) {
    const bool c4_div = residue(e.c4(), p1) == 0;
    add("p1_c4_val", c4_div, c4_div ? ">=1" : "0");
    const int vd = valuation(disc, p1);
    add("p1_disc_val", vd == 2, str(static_cast<i64>(vd)));
    const mpq_class j = e.j_invariant();
    if (j == 0) {
      add("p1_j_val", false, "j=0");
    } else {
      const int vj = valuation(j, p1);
      add("p1_j_val", vj == 1, str(static_cast<i64>(vj)));
    }
    const mpq_class j1728 = j - 1728;
    if (j1728 == 0) {
      add("p1_j1728_val", false, "j=1728");
    } else {
      const int v = valuation(j1728, p1);
      add("p1_j1728_val", v == 0, str(static_cast<i64>(v)));
    }
  } else {
    for (const char* n : {"p1_c4_val", "p1_disc_val", "p1_j_val", "p1_j1728_val"}) add(n, false, "n/a");
  }

  if (p0_ok && p1_ok) {
    const auto [m0, m1] = local_models(p0, p1);
    add("p0_model", e.reduce(p0 * p0) == m0, "mod " + str(p0 * p0));
    add("p1_model", e.reduce(p1 * p1) == m1, "mod " + str(p1 * p1));
  } else {
    add("p0_model", false, "n/a");
    add("p1_model", false, "n/a");
  }
  return cert;
}

ImageEvidence sample_image_evidence(const WeierstrassEquation& e, i64 ell, i64 bound, std::size_t character_cap) {
  if (!is_prime(ell)) throw std::invalid_argument("sample_image_evidence: ell must be prime");
  ImageEvidence ev;
  for (i64 p : primes_up_to(bound)) {
    if (residue(e.discriminant(), p) == 0) {
      ev.bad_primes.push_back(p);
      continue;
    }
    const i64 ap = trace_of_frobenius(e, p);
    ev.samples.push_back({p, mod_reduce(ap, ell)});
  }

  std::vector<TraceSample> test;
  for (const auto& s : ev.samples)
    if (s.p != ell) test.push_back(s);
  if (test.empty()) {
    ev.borel_pair_found = true;  // nothing rules a reducible image out
    return ev;
  }

  // Tame characters of (Z/q)^x with values in F_ell^x: psi_q(g_q) = z^(j (ell-1)/d_q).
  const i64 z = primitive_root(ell);
  struct Factor {
    i64 q;
    i64 d;                   // gcd(q - 1, ell - 1)
    std::vector<i64> dlog;   // discrete log base a primitive root of q
  };
  std::vector<Factor> factors;
  for (i64 q : ev.bad_primes) {
    if (q == 2) continue;
    Factor f{q, gcd(q - 1, ell - 1), std::vector<i64>(static_cast<std::size_t>(q), 0)};
    if (f.d == 1) continue;
    const i64 g = primitive_root(q);
    i64 x = 1;
    for (i64 k = 0; k < q - 1; ++k) {
      f.dlog[static_cast<std::size_t>(x)] = k;
      x = mul_mod(x, g, q);
    }
    factors.push_back(std::move(f));
  }
  std::size_t total = 1;
  for (const auto& f : factors) {
    if (total > character_cap / static_cast<std::size_t>(f.d) + 1) {
      total = character_cap + 1;
      break;
    }
    total *= static_cast<std::size_t>(f.d);
  }
  const std::size_t n_psi = std::min(total, character_cap);
  ev.character_scope_truncated = total > character_cap;

  const i64 order = ell - 1;
  std::vector<i64> psi_exp(test.size());
  std::vector<i64> digits(factors.size(), 0);
  for (std::size_t idx = 0; idx < n_psi; ++idx) {
    // exponent of psi(p) in base z
    for (std::size_t s = 0; s < test.size(); ++s) {
      i64 ex = 0;
      for (std::size_t k = 0; k < factors.size(); ++k) {
        const auto& f = factors[k];
        const i64 step = order / f.d * digits[k] % order;
        ex = (ex + mul_mod(step, f.dlog[static_cast<std::size_t>(test[s].p % f.q)], order)) % order;
      }
      psi_exp[s] = ex;
    }
    for (i64 k = 0; k < order && !ev.borel_pair_found; ++k) {
      ++ev.characters_tested;
      bool all = true;
      for (std::size_t s = 0; s < test.size() && all; ++s) {
        const i64 p = test[s].p % ell;
        const i64 e1 = mul_mod(pow_mod(z, static_cast<u64>(psi_exp[s]), ell), pow_mod(p, static_cast<u64>(k), ell), ell);
        const i64 e2 = mul_mod(p, *inverse_mod(e1, ell), ell);
        all = mod_reduce(e1 + e2, ell) == test[s].ap_mod_ell;
      }
      if (all) ev.borel_pair_found = true;
    }
    if (ev.borel_pair_found) break;
    for (std::size_t k = 0; k < digits.size(); ++k) {
      if (++digits[k] < factors[k].d) break;
      digits[k] = 0;
    }
  }
  return ev;
}

bool validate_hodge_cocharacter(const RootSystem& system, i64 ell, const std::vector<i64>& r_values) {
  if (r_values.size() != system.rank())
    throw std::invalid_argument("validate_hodge_cocharacter: need one value per simple root");
  if (ell < 3) throw std::invalid_argument("validate_hodge_cocharacter: ell must be an odd prime");
  for (i64 r : r_values)
    if (r <= 0 || mod_reduce(r, ell - 1) != 1 % (ell - 1)) return false;
  if (system.type() == CartanType::E6) {
    std::vector<i64> sorted = r_values;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  }
  return true;
}

SeedCertificate forge_seed(const RootSystem& system, i64 ell, const ForgeOptions& options) {
  const AdmissibilityReport adm = check_admissibility(system, ell);
  if (!adm.admissible()) {
    std::vector<std::string> why;
    if (!adm.prime) why.push_back("not prime");
    if (!adm.above_coxeter_bound) why.push_back("need ell > 4h - 1 = " + std::to_string(adm.coxeter_bound));
    if (adm.excluded) why.push_back("excluded prime (E8 excludes 229, 269, 367)");
    if (!adm.above_center_bound) why.push_back("need ell - 1 > " + std::to_string(adm.center_bound));
    std::ostringstream os;
    os << "ell = " << ell << " is not admissible for " << system.label() << ": ";
    for (std::size_t i = 0; i < why.size(); ++i) os << (i ? "; " : "") << why[i];
    throw InadmissiblePrime(os.str());
  }
  const WeierstrassEquation at_ell = find_trace_curve(ell, options.trace, options.seed);
  const Auxiliaries aux = choose_auxiliaries(ell, system.coxeter_number());
  const auto [m0, m1] = local_models(aux.p0, aux.p1);
  const WeierstrassEquation lifted = crt_lift(at_ell, ell, m0, aux.p0, m1, aux.p1);
  SeedCertificate cert = verify_certificate(system, lifted, ell, aux.p0, aux.p1, options.trace);
  cert.seed = options.seed;
  cert.checks.push_back({"ell_model", lifted.reduce(ell) == at_ell.reduce(ell), "mod " + str(ell)});
  cert.evidence = sample_image_evidence(lifted, ell, options.sample_bound);
  return cert;
}

}  // namespace exmono
