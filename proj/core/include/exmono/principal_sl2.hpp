#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "exmono/chevalley.hpp"

namespace exmono {

/// Principal sl2 triple (X, H, Y) with X = sum of simple root vectors,
/// H = 2 rho^vee = sum r_i H_i and Y = sum r_i X_{-a_i}.
struct PrincipalTriple {
  AdElement X;
  AdElement H;
  AdElement Y;
  Vec r;
};

PrincipalTriple build_principal_triple(const ChevalleyAlgebra& g);

/// Raised when a modular decomposition is requested below 2h - 1.
class ModularDegeneration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class StringEnd { Lowest, Highest };

struct SlString {
  int exponent = 0;        // m: the string is Sym^{2m}, of length 2m + 1
  std::size_t length = 0;  // measured by iterating ad(X) (or ad(Y))
  int twist = 0;           // det^{-m} character twist, kept as metadata
  BigVec end_vector;       // lowest (or highest) weight vector
};

struct StringDecomposition {
  std::optional<i64> modulus;
  StringEnd end = StringEnd::Lowest;
  std::vector<SlString> strings;  // sorted by exponent

  std::vector<int> exponents() const;
  std::vector<std::size_t> lengths() const;
  std::size_t total_dimension() const;
};

/// Splits g into sl2 strings under the principal triple. Over Q when
/// ell is nullopt, otherwise over F_ell with ell prime and ell >= 2h - 1.
StringDecomposition decompose_adjoint(const ChevalleyAlgebra& g, const PrincipalTriple& triple,
                                      std::optional<i64> ell = std::nullopt, StringEnd end = StringEnd::Lowest);

/// Whether the eigenvalues {b^r, b^(r-2), ..., b^(-r)} of a generator b of
/// F_q^x (q = ell^f) are moved by x -> x^(ell^(f-1)). True when f = 1.
bool sym_minimal_field_check(i64 r, i64 ell, unsigned f);

/// Whether some coroot torus element a^vee(b) has its eigenvalue multiset
/// on g moved by x -> x^(ell^(f-1)). True when f = 1.
bool adjoint_eigenvalue_field_check(const RootSystem& system, i64 ell, unsigned f);

}  // namespace exmono
