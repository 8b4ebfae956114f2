#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exmono/chevalley.hpp"

namespace exmono {

/// Element of the adjoint group acting on g over Z/ell^n, stored as its
/// matrix in the Chevalley basis.
struct GroupElementModLn {
  IntMatrix matrix;
  i64 ell = 0;
  unsigned n = 1;
  std::string provenance;

  i64 modulus() const { return checked_pow(ell, n); }
};

/// Acts on X_b by t^<b, c> where c = sum c_i a_i^vee, trivially on the
/// Cartan subalgebra. Throws if t is not a unit mod ell^n.
GroupElementModLn torus_element(const ChevalleyAlgebra& g, const Vec& cocharacter, i64 t, i64 ell, unsigned n = 1);
/// exp(ad a) over Z/ell^n.
GroupElementModLn unipotent_element(const ChevalleyAlgebra& g, const AdElement& a, i64 ell, unsigned n = 1,
                                    std::string provenance = "exp");
GroupElementModLn identity_element(const ChevalleyAlgebra& g, i64 ell, unsigned n = 1);
GroupElementModLn compose(const GroupElementModLn& a, const GroupElementModLn& b);
bool is_invertible(const GroupElementModLn& a);

/// Multiplicative order if it is at most cap, nullopt otherwise.
std::optional<u64> element_order(const GroupElementModLn& a, u64 cap);

enum class NoSectionVariant { HighestRoot, Principal };

struct NoSectionReport {
  NoSectionVariant variant = NoSectionVariant::HighestRoot;
  i64 ell = 0;
  unsigned n = 1;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t congruence_failures = 0;
  std::size_t bracket_failures = 0;
  std::size_t trivial_powers = 0;   // lifts whose relevant power is the identity
  std::optional<std::size_t> witness_trial;
  std::string witness;
  bool ok() const { return congruence_failures == 0 && bracket_failures == 0 && trivial_powers == 0; }
};

/// Random lifts u = (1 + ell^n ad R) exp(ad X) to Z/ell^(n+1).
///  HighestRoot: X = X_theta, checks Ad(u)^(ell^n) == 1 + ell^n ad(X_theta).
///  Principal:   X = sum of simple root vectors, checks
///               Ad(u)^ell == exp(ad(ell X)) != 1.
/// Preconditions: ell > 5 (HighestRoot), ell > 4h - 3 (Principal).
NoSectionReport verify_no_section_expansion(const ChevalleyAlgebra& g, i64 ell, unsigned n, std::size_t trials,
                                            NoSectionVariant variant, std::uint64_t seed = 0);

/// The i-th random lift used by verify_no_section_expansion.
GroupElementModLn random_lift(const ChevalleyAlgebra& g, const AdElement& x, i64 ell, unsigned n,
                              std::uint64_t seed, std::size_t trial);

struct RegReport {
  i64 ell = 0;
  std::size_t image_dimension = 0;     // rank of 1 - Ad(gamma) on b
  std::size_t expected_image = 0;      // number of positive roots
  bool image_in_nilradical = false;
  std::size_t kernel_dimension = 0;    // on all of g
  std::size_t expected_kernel = 0;     // rank
  bool kernel_in_nilradical = false;
  bool ok() const {
    return image_dimension == expected_image && image_in_nilradical && kernel_dimension == expected_kernel &&
           kernel_in_nilradical;
  }
};

/// gamma = exp(ad X) for the principal nilpotent X over F_ell. Requires
/// ell > h; the exponential additionally needs ell > 2h - 1.
RegReport verify_reg_surjectivity(const ChevalleyAlgebra& g, i64 ell);

}  // namespace exmono
