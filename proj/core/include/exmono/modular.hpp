#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace exmono {

using i64 = std::int64_t;
using u64 = std::uint64_t;

/// Thrown when a machine-width computation would overflow.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Least non-negative residue of a modulo m (m > 0).
inline i64 mod_reduce(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 mul_mod(i64 a, i64 b, i64 m) {
  return static_cast<i64>(static_cast<__int128>(mod_reduce(a, m)) * mod_reduce(b, m) % m);
}

i64 checked_add(i64 a, i64 b);
i64 checked_mul(i64 a, i64 b);
/// b^e over the integers, throwing OverflowError past 64 bits.
i64 checked_pow(i64 b, unsigned e);

i64 pow_mod(i64 base, u64 exp, i64 m);
std::optional<i64> inverse_mod(i64 a, i64 m);
i64 gcd(i64 a, i64 b);

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(i64 n);
/// Smallest prime strictly greater than n.
i64 next_prime_above(i64 n);
std::vector<i64> primes_up_to(i64 bound);
/// Distinct prime divisors in increasing order.
std::vector<i64> prime_factors(i64 n);

/// Multiplicative order of a modulo the prime p; a must be a unit.
i64 multiplicative_order(i64 a, i64 p);
/// Smallest primitive root modulo the prime p.
i64 primitive_root(i64 p);
/// Legendre symbol (a/p) for an odd prime p: 0, 1 or -1.
int legendre(i64 a, i64 p);

}  // namespace exmono
