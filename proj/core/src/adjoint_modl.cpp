#include "exmono/adjoint_modl.hpp"

#include <functional>
#include <random>
#include <unordered_map>

namespace exmono {

GroupElementModLn identity_element(const ChevalleyAlgebra& g, i64 ell, unsigned n) {
  return {IntMatrix::identity(g.dim()), ell, n, "1"};
}

GroupElementModLn torus_element(const ChevalleyAlgebra& g, const Vec& cocharacter, i64 t, i64 ell, unsigned n) {
  const RootSystem& sys = g.system();
  if (cocharacter.size() != sys.rank()) throw std::invalid_argument("torus_element: cocharacter has wrong length");
  const i64 m = checked_pow(ell, n);
  const auto t_inv = inverse_mod(t, m);
  if (!t_inv) throw std::invalid_argument("torus_element: t is not a unit");
  GroupElementModLn out = identity_element(g, ell, n);
  for (std::size_t a = 0; a < sys.roots().size(); ++a) {
    i64 e = 0;
    for (std::size_t i = 0; i < sys.rank(); ++i) e += cocharacter[i] * sys.simple_pairing(sys.roots()[a], i);
    const std::size_t b = g.root_basis(a);
    out.matrix(b, b) = e >= 0 ? pow_mod(t, static_cast<u64>(e), m) : pow_mod(*t_inv, static_cast<u64>(-e), m);
  }
  out.provenance = "torus(t=" + std::to_string(mod_reduce(t, m)) + ")";
  return out;
}

GroupElementModLn unipotent_element(const ChevalleyAlgebra& g, const AdElement& a, i64 ell, unsigned n,
                                    std::string provenance) {
  return {exp_nilpotent_ad(g, a, ell, n), ell, n, std::move(provenance)};
}

GroupElementModLn compose(const GroupElementModLn& a, const GroupElementModLn& b) {
  if (a.ell != b.ell || a.n != b.n) throw std::invalid_argument("compose: moduli differ");
  return {multiply_mod(a.matrix, b.matrix, a.modulus()), a.ell, a.n, a.provenance + "*" + b.provenance};
}

bool is_invertible(const GroupElementModLn& a) {
  // A unit mod ell^n iff its reduction mod ell is.
  return rank_mod_p(a.matrix, a.ell) == a.matrix.rows();
}

namespace {

struct MatrixHash {
  std::size_t operator()(const IntMatrix& m) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (i64 x : m.data()) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ULL;
    return h;
  }
};

}  // namespace

std::optional<u64> element_order(const GroupElementModLn& a, u64 cap) {
  if (cap == 0) return std::nullopt;
  const i64 m = a.modulus();
  const IntMatrix base = reduce_mod(a.matrix, m);
  const IntMatrix id = reduce_mod(IntMatrix::identity(base.rows()), m);
  // Baby steps A^j for 0 <= j < s; a repeat among them is the order.
  u64 s = 1;
  while (s * s < cap) ++s;
  std::unordered_map<IntMatrix, u64, MatrixHash> baby;
  IntMatrix cur = id;
  for (u64 j = 0; j < s; ++j) {
    if (j > 0 && cur == id) return j;
    baby.emplace(cur, j);
    cur = multiply_mod(cur, base, m);
  }
  // cur = A^s. Giant steps A^(is); the first hit A^(is) = A^j gives the
  // order is - j.
  const IntMatrix giant = cur;
  for (u64 i = 1; i * s <= cap + s; ++i) {
    if (auto it = baby.find(cur); it != baby.end()) {
      const u64 order = i * s - it->second;
      return order <= cap ? std::optional<u64>(order) : std::nullopt;
    }
    cur = multiply_mod(cur, giant, m);
  }
  return std::nullopt;
}

namespace {

GroupElementModLn perturb_lift(const ChevalleyAlgebra& g, const IntMatrix& exp_x, i64 ell, unsigned n,
                               std::uint64_t seed, std::size_t trial) {
  const i64 m = checked_pow(ell, n + 1);
  const i64 ln = checked_pow(ell, n);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<i64> coord(0, ell - 1);
  AdElement r = zero_element(g);
  for (i64& c : r.coords) c = coord(rng);
  // exp(ell^n ad R) = 1 + ell^n ad R mod ell^(n+1).
  IntMatrix perturb = scale_mod(ad_matrix(g, r), ln, m);
  for (std::size_t i = 0; i < g.dim(); ++i) perturb(i, i) = mod_reduce(perturb(i, i) + 1, m);
  return {multiply_mod(perturb, exp_x, m), ell, n + 1, "lift#" + std::to_string(trial)};
}

}  // namespace

GroupElementModLn random_lift(const ChevalleyAlgebra& g, const AdElement& x, i64 ell, unsigned n,
                              std::uint64_t seed, std::size_t trial) {
  return perturb_lift(g, exp_nilpotent_ad(g, x, ell, n + 1), ell, n, seed, trial);
}

NoSectionReport verify_no_section_expansion(const ChevalleyAlgebra& g, i64 ell, unsigned n, std::size_t trials,
                                            NoSectionVariant variant, std::uint64_t seed) {
  if (!is_prime(ell)) throw std::invalid_argument("verify_no_section_expansion: ell must be prime");
  if (n == 0) throw std::invalid_argument("verify_no_section_expansion: n must be positive");
  const i64 h = g.system().coxeter_number();
  AdElement x = zero_element(g);
  if (variant == NoSectionVariant::HighestRoot) {
    if (ell <= 5) throw PrimeTooSmall("verify_no_section_expansion: the highest-root variant needs ell > 5");
    x.coords[g.highest_root_basis()] = 1;
  } else {
    if (ell <= 4 * h - 3)
      throw PrimeTooSmall("verify_no_section_expansion: the principal variant needs ell > 4h - 3 = " +
                          std::to_string(4 * h - 3));
    for (std::size_t i = 0; i < g.rank(); ++i)
      x.coords[g.root_basis(*g.system().index_of(g.system().simple_roots()[i]))] = 1;
  }

  NoSectionReport rep;
  rep.variant = variant;
  rep.ell = ell;
  rep.n = n;
  rep.seed = seed;
  rep.trials = trials;
  const i64 m = checked_pow(ell, n + 1);
  const i64 ln = checked_pow(ell, n);

  IntMatrix expected;
  u64 power = 0;
  if (variant == NoSectionVariant::HighestRoot) {
    expected = scale_mod(ad_matrix(g, x), ln, m);
    for (std::size_t i = 0; i < g.dim(); ++i) expected(i, i) = mod_reduce(expected(i, i) + 1, m);
    power = static_cast<u64>(ln);
  } else {
    AdElement lx = x;
    for (i64& c : lx.coords) c *= ell;
    expected = exp_nilpotent_ad(g, lx, ell, n + 1);
    power = static_cast<u64>(ell);
  }
  const bool expected_trivial = expected.is_identity();
  const IntMatrix exp_x = exp_nilpotent_ad(g, x, ell, n + 1);

  for (std::size_t t = 0; t < trials; ++t) {
    const GroupElementModLn u = perturb_lift(g, exp_x, ell, n, seed, t);
    auto record = [&](const std::string& what) {
      if (!rep.witness_trial) {
        rep.witness_trial = t;
        rep.witness = what;
      }
    };
    if (!preserves_bracket_on_generators(g, u.matrix, m)) {
      ++rep.bracket_failures;
      record("lift does not preserve the bracket");
    }
    const IntMatrix p = power_mod(u.matrix, power, m);
    if (p != expected) {
      ++rep.congruence_failures;
      record("power of the lift differs from the predicted matrix");
    }
    if (p.is_identity() || expected_trivial) {
      ++rep.trivial_powers;
      record("power of the lift is the identity");
    }
  }
  return rep;
}

RegReport verify_reg_surjectivity(const ChevalleyAlgebra& g, i64 ell) {
  if (!is_prime(ell)) throw std::invalid_argument("verify_reg_surjectivity: ell must be prime");
  const RootSystem& sys = g.system();
  if (ell <= sys.coxeter_number())
    throw PrimeTooSmall("verify_reg_surjectivity: ell must exceed h = " + std::to_string(sys.coxeter_number()));
  AdElement x = zero_element(g);
  for (std::size_t i = 0; i < g.rank(); ++i) x.coords[g.root_basis(*sys.index_of(sys.simple_roots()[i]))] = 1;
  const IntMatrix gamma = exp_nilpotent_ad(g, x, ell, 1);

  // 1 - Ad(gamma)
  IntMatrix d(g.dim(), g.dim());
  for (std::size_t r = 0; r < g.dim(); ++r)
    for (std::size_t c = 0; c < g.dim(); ++c) d(r, c) = mod_reduce((r == c ? 1 : 0) - gamma(r, c), ell);

  RegReport rep;
  rep.ell = ell;
  rep.expected_image = sys.num_positive();
  rep.expected_kernel = sys.rank();

  const std::size_t nb = g.rank() + sys.num_positive();
  IntMatrix on_borel(g.dim(), nb);
  for (std::size_t r = 0; r < g.dim(); ++r)
    for (std::size_t c = 0; c < nb; ++c) on_borel(r, c) = d(r, c);
  rep.image_dimension = rank_mod_p(on_borel, ell);
  rep.image_in_nilradical = true;
  for (std::size_t r = 0; r < g.dim(); ++r) {
    if (g.in_nilradical(r)) continue;
    for (std::size_t c = 0; c < nb; ++c)
      if (on_borel(r, c) != 0) rep.image_in_nilradical = false;
  }

  const auto kernel = nullspace_mod_p(d, ell);
  rep.kernel_dimension = kernel.size();
  rep.kernel_in_nilradical = true;
  for (const Vec& v : kernel)
    for (std::size_t b = 0; b < g.dim(); ++b)
      if (v[b] != 0 && !g.in_nilradical(b)) rep.kernel_in_nilradical = false;
  return rep;
}

}  // namespace exmono
