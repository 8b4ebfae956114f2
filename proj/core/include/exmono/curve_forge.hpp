#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "exmono/root_data.hpp"

namespace exmono {

/// Integral Weierstrass equation y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
/// with its standard invariants.
class WeierstrassEquation {
 public:
  WeierstrassEquation(mpz_class a1, mpz_class a2, mpz_class a3, mpz_class a4, mpz_class a6);
  static WeierstrassEquation short_form(mpz_class a4, mpz_class a6) { return {0, 0, 0, std::move(a4), std::move(a6)}; }

  const mpz_class& a1() const { return a_[0]; }
  const mpz_class& a2() const { return a_[1]; }
  const mpz_class& a3() const { return a_[2]; }
  const mpz_class& a4() const { return a_[3]; }
  const mpz_class& a6() const { return a_[4]; }
  /// (a1, a2, a3, a4, a6)
  const std::vector<mpz_class>& coefficients() const { return a_; }

  const mpz_class& b2() const { return b2_; }
  const mpz_class& b4() const { return b4_; }
  const mpz_class& b6() const { return b6_; }
  const mpz_class& b8() const { return b8_; }
  const mpz_class& c4() const { return c4_; }
  const mpz_class& c6() const { return c6_; }
  const mpz_class& discriminant() const { return disc_; }
  bool singular() const { return disc_ == 0; }
  /// c4^3 / disc in lowest terms. Throws when singular.
  mpq_class j_invariant() const;

  /// Coefficients reduced to least non-negative residues mod m.
  WeierstrassEquation reduce(const mpz_class& m) const;

  friend bool operator==(const WeierstrassEquation& a, const WeierstrassEquation& b) { return a.a_ == b.a_; }

 private:
  std::vector<mpz_class> a_;
  mpz_class b2_, b4_, b6_, b8_, c4_, c6_, disc_;
};

class BadReduction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InadmissiblePrime : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// p-adic valuation; throws on zero.
int valuation(const mpz_class& x, i64 p);
/// Valuation of a nonzero rational: v(num) - v(den).
int valuation(const mpq_class& x, i64 p);

/// |E(F_p)| including the point at infinity. Throws BadReduction when p
/// divides the discriminant.
i64 count_points_fp(const WeierstrassEquation& e, i64 p);
/// Trace of Frobenius p + 1 - |E(F_p)|.
i64 trace_of_frobenius(const WeierstrassEquation& e, i64 p);

/// Short Weierstrass equation over F_ell with trace a, found by a seeded
/// random search. Requires gcd(a, ell) = 1 and a^2 < 4 ell.
WeierstrassEquation find_trace_curve(i64 ell, i64 a, std::uint64_t seed = 0, std::size_t budget = 1'000'000);

struct Auxiliaries {
  i64 p0 = 0;  // odd, order mod ell at least h
  i64 p1 = 0;  // >= 5, congruent to 2 mod 3
};
Auxiliaries choose_auxiliaries(i64 ell, i64 h);

/// Tate-curve model y^2 + xy = x^3 - 5 p0 x - p0 (mod p0^2) and additive
/// model y^2 = x^3 - 3 p1 x - 2 p1 (mod p1^2), coefficients reduced.
std::pair<WeierstrassEquation, WeierstrassEquation> local_models(i64 p0, i64 p1);
/// The same models with exact integer coefficients.
WeierstrassEquation exact_p0_model(i64 p0);
WeierstrassEquation exact_p1_model(i64 p1);

/// Coefficientwise CRT with least residues mod ell * p0^2 * p1^2.
WeierstrassEquation crt_lift(const WeierstrassEquation& at_ell, i64 ell, const WeierstrassEquation& at_p0, i64 p0,
                             const WeierstrassEquation& at_p1, i64 p1);

struct CheckRecord {
  std::string name;
  bool passed = false;
  std::string value;  // computed quantity backing the verdict
};

struct TraceSample {
  i64 p = 0;
  i64 ap_mod_ell = 0;
};

struct ImageEvidence {
  std::vector<TraceSample> samples;
  std::vector<i64> bad_primes;         // bad primes met while sampling
  std::size_t characters_tested = 0;   // (psi, k) pairs examined
  bool character_scope_truncated = false;
  bool borel_pair_found = false;
};

struct SeedCertificate {
  static constexpr int kSchemaVersion = 1;

  std::string type_label;
  i64 ell = 0;
  i64 h = 0;
  i64 a_ell = 0;
  i64 p0 = 0;
  i64 p1 = 0;
  std::uint64_t seed = 0;
  WeierstrassEquation equation{0, 0, 0, 0, 1};
  std::vector<CheckRecord> checks;
  ImageEvidence evidence;

  bool accepted() const;
  /// First failing check, if any.
  const CheckRecord* first_failure() const;
};

/// Recomputes every local and global condition from the equation alone.
SeedCertificate verify_certificate(const RootSystem& system, const WeierstrassEquation& e, i64 ell, i64 p0, i64 p1,
                                   i64 a);

/// Traces a_p mod ell at good primes p <= bound, and whether some pair of
/// characters psi * w^k, w * (psi * w^k)^-1 (w the mod-ell cyclotomic
/// character, psi tame of conductor dividing the bad primes seen) explains
/// them all.
ImageEvidence sample_image_evidence(const WeierstrassEquation& e, i64 ell, i64 bound, std::size_t character_cap = 4096);

/// All r > 0 and r = 1 mod (ell - 1); pairwise distinct for E6.
bool validate_hodge_cocharacter(const RootSystem& system, i64 ell, const std::vector<i64>& r_values);

struct ForgeOptions {
  std::uint64_t seed = 0;
  i64 trace = 2;
  i64 sample_bound = 1000;
};

/// Full pipeline: trace curve mod ell, auxiliaries, local models, CRT lift,
/// verification and image sampling. Throws InadmissiblePrime for a prime
/// outside the admissible range and std::invalid_argument for a bad trace.
SeedCertificate forge_seed(const RootSystem& system, i64 ell, const ForgeOptions& options = {});

}  // namespace exmono
