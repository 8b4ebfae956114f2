#include "exmono/modular.hpp"

#include <numeric>

namespace exmono {

i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer addition overflow");
  return r;
}

i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer multiplication overflow");
  return r;
}

i64 checked_pow(i64 b, unsigned e) {
  i64 r = 1;
  for (unsigned i = 0; i < e; ++i) r = checked_mul(r, b);
  return r;
}

i64 pow_mod(i64 base, u64 exp, i64 m) {
  if (m == 1) return 0;
  i64 result = 1;
  i64 b = mod_reduce(base, m);
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, b, m);
    b = mul_mod(b, b, m);
    exp >>= 1U;
  }
  return result;
}

i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

std::optional<i64> inverse_mod(i64 a, i64 m) {
  i64 old_r = mod_reduce(a, m), r = m;
  i64 old_s = 1, s = 0;
  while (r != 0) {
    i64 q = old_r / r;
    i64 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) return std::nullopt;
  return mod_reduce(old_s, m);
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  i64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (i64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    i64 x = pow_mod(a, static_cast<u64>(d), n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

i64 next_prime_above(i64 n) {
  i64 c = n + 1;
  while (!is_prime(c)) ++c;
  return c;
}

std::vector<i64> primes_up_to(i64 bound) {
  std::vector<i64> out;
  if (bound < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
  for (i64 i = 2; i <= bound; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    out.push_back(i);
    for (i64 j = i * i; j <= bound; j += i) composite[static_cast<std::size_t>(j)] = true;
  }
  return out;
}

std::vector<i64> prime_factors(i64 n) {
  std::vector<i64> out;
  if (n < 0) n = -n;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

i64 multiplicative_order(i64 a, i64 p) {
  if (mod_reduce(a, p) == 0) throw std::invalid_argument("multiplicative_order: not a unit");
  i64 order = p - 1;
  for (i64 q : prime_factors(p - 1)) {
    while (order % q == 0 && pow_mod(a, static_cast<u64>(order / q), p) == 1) order /= q;
  }
  return order;
}

i64 primitive_root(i64 p) {
  if (p == 2) return 1;
  for (i64 g = 2; g < p; ++g) {
    if (multiplicative_order(g, p) == p - 1) return g;
  }
  throw std::invalid_argument("primitive_root: modulus is not prime");
}

int legendre(i64 a, i64 p) {
  i64 r = pow_mod(a, static_cast<u64>((p - 1) / 2), p);
  if (r == 0) return 0;
  return r == 1 ? 1 : -1;
}

}  // namespace exmono
