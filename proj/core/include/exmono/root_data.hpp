#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exmono/linalg.hpp"

namespace exmono {

enum class CartanType { A1, A2, G2, F4, E6, E7, E8 };

std::string_view to_string(CartanType t);
/// Parses "G2", "E8", ...; returns nullopt for anything unsupported.
std::optional<CartanType> parse_cartan_type(std::string_view label);
bool is_exceptional(CartanType t);

/// A root expressed in simple-root coordinates.
using Root = std::vector<i64>;

/// Exact root data for a simple root system in Bourbaki numbering.
///
/// Simple roots are ordered as in Bourbaki's plates:
///   G2: a1 short, a2 long.
///   F4: a1, a2 long; a3, a4 short.
///   E6/E7/E8: a1 - a3 - a4 - a5 - ... chain with a2 attached to a4.
///
/// The Cartan matrix entry cartan(i, j) is <a_i^vee, a_j>, so the simple
/// reflection s_i sends b to b - <a_i^vee, b> a_i.
///
/// Roots are ordered: positive roots by increasing height (ties broken
/// lexicographically), then their negatives in the same order.
class RootSystem {
 public:
  explicit RootSystem(CartanType type);

  CartanType type() const noexcept { return type_; }
  std::string_view label() const noexcept { return to_string(type_); }
  std::size_t rank() const noexcept { return rank_; }
  const IntMatrix& cartan_matrix() const noexcept { return cartan_; }

  const std::vector<Root>& roots() const noexcept { return roots_; }
  std::size_t num_positive() const noexcept { return roots_.size() / 2; }
  /// The positive roots are the first num_positive() entries of roots().
  std::vector<Root> positive_roots() const;
  std::vector<Root> simple_roots() const;
  const Root& highest_root() const noexcept { return roots_[num_positive() - 1]; }

  int coxeter_number() const noexcept { return coxeter_; }
  /// Order of the centre of the simply-connected group, det(cartan).
  i64 center_order() const noexcept { return center_order_; }
  bool minus_one_in_weyl() const noexcept { return minus_one_in_weyl_; }

  std::optional<std::size_t> index_of(const Root& r) const;
  bool is_root(const Root& r) const { return index_of(r).has_value(); }
  /// Index of -roots()[i].
  std::size_t negative_index(std::size_t i) const;
  i64 height(const Root& r) const;

  /// <b, a_i^vee> for simple coroot i.
  i64 simple_pairing(const Root& b, std::size_t i) const;
  Root reflect(const Root& b, std::size_t i) const;

  /// Symmetric invariant form, normalised so the shortest roots have
  /// squared length 2.
  i64 inner_product(const Root& a, const Root& b) const;
  i64 norm(const Root& a) const { return inner_product(a, a); }
  /// Coordinates of the coroot a^vee in the basis of simple coroots.
  Root coroot(const Root& a) const;
  /// <b, a^vee> = 2(a,b)/(a,a).
  i64 pairing(const Root& b, const Root& a) const;

 private:
  CartanType type_;
  std::size_t rank_;
  IntMatrix cartan_;
  std::vector<i64> half_norms_;  // (a_i, a_i) / 2 for each simple root
  std::vector<Root> roots_;
  std::map<Root, std::size_t> index_;
  int coxeter_;
  i64 center_order_;
  bool minus_one_in_weyl_;
};

RootSystem build_root_system(CartanType type);

/// Smallest prime l with l > 4h - 1.
i64 admissible_prime_floor(const RootSystem& system);

struct AdmissibilityReport {
  i64 ell = 0;
  bool prime = false;
  i64 coxeter_bound = 0;        // 4h - 1; need ell > coxeter_bound
  bool above_coxeter_bound = false;
  bool excluded = false;        // E8 exceptions 229, 269, 367
  i64 center_bound = 0;         // need ell - 1 > center_bound
  bool above_center_bound = false;
  bool admissible() const {
    return prime && above_coxeter_bound && !excluded && above_center_bound;
  }
};

/// Bound B with the requirement l - 1 > B: max of 8 #Z and (h-1)#Z for
/// even #Z, (2h-2)#Z for odd #Z.
i64 center_hypothesis_bound(const RootSystem& system);
AdmissibilityReport check_admissibility(const RootSystem& system, i64 ell);
bool is_admissible(const RootSystem& system, i64 ell);
/// Smallest admissible prime for the type.
i64 smallest_admissible_prime(const RootSystem& system);

}  // namespace exmono
