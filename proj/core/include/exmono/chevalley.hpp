#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exmono/linalg.hpp"
#include "exmono/root_data.hpp"

namespace exmono {

struct Term {
  std::uint32_t index;
  i64 coeff;
};

/// Integral Chevalley basis {H_i} u {X_a} of the simple Lie algebra of a
/// root system.
///
/// Basis order: H_1..H_r (simple coroots), then X_a in the order of
/// RootSystem::roots() (positive roots by height, then negatives). With
/// this order the Borel subalgebra is spanned by the first
/// r + |positive roots| basis vectors and its nilradical by the positive
/// root vectors.
///
/// Signs of the structure constants are fixed by declaring N_{a,b} > 0
/// on every extraspecial pair (a simple, a + b = c, a minimal) and
/// propagating through the standard relations between the N's.
class ChevalleyAlgebra {
 public:
  explicit ChevalleyAlgebra(RootSystem system);

  const RootSystem& system() const noexcept { return system_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return system_.rank(); }

  std::size_t cartan_basis(std::size_t i) const noexcept { return i; }
  std::size_t root_basis(std::size_t root) const noexcept { return rank() + root; }
  bool is_cartan(std::size_t b) const noexcept { return b < rank(); }
  /// Root index of a root-vector basis element.
  std::size_t root_of(std::size_t b) const noexcept { return b - rank(); }
  std::size_t highest_root_basis() const { return root_basis(system_.num_positive() - 1); }

  /// Height grading: 0 on the Cartan subalgebra, ht(a) on X_a.
  i64 grade(std::size_t b) const;
  bool in_borel(std::size_t b) const noexcept { return b < rank() + system_.num_positive(); }
  bool in_nilradical(std::size_t b) const noexcept { return !is_cartan(b) && in_borel(b); }

  /// [e_a, e_b] as a sparse combination of basis vectors.
  std::span<const Term> bracket_basis(std::size_t a, std::size_t b) const;
  /// N_{a,b} for root indices, 0 when a + b is not a root.
  i64 structure_constant(std::size_t a, std::size_t b) const;

  std::string basis_label(std::size_t b) const;
  /// Deterministic text listing of every nonzero [e_i, e_j] with i < j.
  std::string dump_bracket_table() const;

 private:
  void compute_structure_constants();
  void build_table();

  RootSystem system_;
  std::size_t dim_;
  std::vector<i64> n_;  // num_roots x num_roots
  std::vector<std::size_t> offsets_;
  std::vector<Term> terms_;
};

/// Element of the algebra in Chevalley coordinates, optionally over Z/m.
struct AdElement {
  Vec coords;
  std::optional<i64> modulus;

  friend bool operator==(const AdElement&, const AdElement&) = default;
};

AdElement zero_element(const ChevalleyAlgebra& g, std::optional<i64> modulus = std::nullopt);
AdElement basis_element(const ChevalleyAlgebra& g, std::size_t b, std::optional<i64> modulus = std::nullopt);
AdElement reduce(AdElement a, i64 modulus);

/// Bilinear extension of the bracket table. Throws on modulus mismatch.
AdElement bracket(const ChevalleyAlgebra& g, const AdElement& a, const AdElement& b);
/// Matrix of ad(a); column j holds [a, e_j]. Reduced when a has a modulus.
IntMatrix ad_matrix(const ChevalleyAlgebra& g, const AdElement& a);

/// Smallest k >= 1 with ad(a)^k = 0 over the integers, computed exactly;
/// nullopt when ad(a) is not nilpotent.
std::optional<int> nilpotency_index(const ChevalleyAlgebra& g, const AdElement& a);

/// Thrown when a prime is too small for the divided powers needed.
class PrimeTooSmall : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// sum_k ad(a)^k / k! over Z/ell^n. Requires ad(a) nilpotent and ell
/// strictly greater than its nilpotency index.
IntMatrix exp_nilpotent_ad(const ChevalleyAlgebra& g, const AdElement& a, i64 ell, unsigned n = 1);

/// M[e_i, e_j] == [M e_i, M e_j] mod m for every basis pair.
bool preserves_bracket(const ChevalleyAlgebra& g, const IntMatrix& m, i64 modulus);
/// Same test restricted to pairs (X_{+-a_i}, e_j). Equivalent, since the
/// simple root vectors and their negatives generate g.
bool preserves_bracket_on_generators(const ChevalleyAlgebra& g, const IntMatrix& m, i64 modulus);

struct JacobiReport {
  std::size_t triples_checked = 0;
  std::size_t failures = 0;
  std::optional<std::array<std::size_t, 3>> first_failure;
  bool ok() const noexcept { return failures == 0; }
};

/// Exhaustive Jacobi identity over all dim^3 basis triples.
JacobiReport verify_jacobi(const ChevalleyAlgebra& g);

}  // namespace exmono
