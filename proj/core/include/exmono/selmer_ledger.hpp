#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "exmono/linalg.hpp"

namespace exmono {

/// Subspace of F_p^n kept in reduced row echelon form together with a
/// constraint matrix C such that x is in the subspace iff C x = 0.
class Subspace {
 public:
  Subspace() = default;
  Subspace(i64 p, std::size_t n, const std::vector<Vec>& generators);

  i64 prime() const noexcept { return p_; }
  std::size_t ambient_dim() const noexcept { return n_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  const std::vector<Vec>& basis() const noexcept { return basis_; }
  const std::vector<Vec>& constraints() const noexcept { return constraints_; }
  bool contains(const Vec& v) const;

  Subspace operator+(const Subspace& other) const;
  Subspace intersect(const Subspace& other) const;
  friend bool operator==(const Subspace& a, const Subspace& b) { return a.basis_ == b.basis_ && a.n_ == b.n_; }

 private:
  i64 p_ = 2;
  std::size_t n_ = 0;
  std::vector<Vec> basis_;        // RREF rows
  std::vector<Vec> constraints_;  // rows of C
};

/// {y : x^T B y = 0 for every x in s}.
Subspace annihilator(const Subspace& s, const IntMatrix& pairing);

/// Every vector of the span of a subspace (p^dim of them, in a fixed order).
std::vector<Vec> span_elements(const Subspace& s);

enum class Condition { Fixed, Unramified, Ramakrishna, Meet, Join, Full, Zero };
std::string_view to_string(Condition c);

enum class PlaceRole { Sigma, Auxiliary };

/// A place with local space F_p^dim, a dual local space of the same
/// dimension and a nondegenerate pairing x^T B y between them.
struct LocalPlace {
  std::string name;
  PlaceRole role = PlaceRole::Auxiliary;
  std::size_t dim = 0;
  IntMatrix pairing;
  std::vector<Vec> fixed;        // Sigma places: the fixed condition
  std::vector<Vec> unramified;   // auxiliary places: L^un
  std::vector<Vec> ramakrishna;  // auxiliary places: L^Ram
  i64 h0_term = 0;               // declared local term of the Wiles ledger
};

/// Subspace of the local space cut out by a condition.
Subspace local_condition(const LocalPlace& v, Condition c, i64 p);
/// The annihilator of local_condition under the pairing.
Subspace dual_condition(const LocalPlace& v, Condition c, i64 p);
/// Declared dimension of a condition, read off the place data without
/// any rank computation.
i64 declared_dimension(const LocalPlace& v, Condition c);

/// Abstract flags for an auxiliary candidate (whether the level n-1 and
/// level n reductions of the current lift are of Ramakrishna type there).
struct CandidateFlags {
  bool ram_type_prev = true;
  bool ram_type_now = false;
};

/// Synthetic Selmer model: a global space F_p^g embedded in W = sum of the
/// local spaces by an injective restriction map R (D x g). The dual global
/// space is the annihilator of R(F_p^g) in the dual of W under the sum of
/// the local pairings.
struct SelmerInstance {
  i64 p = 2;
  std::vector<LocalPlace> places;
  IntMatrix restriction;  // D x g
  i64 declared_global_term = 0;
  std::vector<std::size_t> q_ram;
  std::vector<std::size_t> q_unr;
  std::optional<std::size_t> q;   // the chosen element of q_unr
  std::optional<std::size_t> q1;
  std::optional<std::size_t> q2;
  CandidateFlags q1_flags;
  CandidateFlags q2_flags;

  std::size_t global_dim() const { return restriction.cols(); }
  std::size_t local_total() const { return restriction.rows(); }
  std::size_t offset(std::size_t place) const;
  /// Basis (as columns) of the dual global space inside W*.
  IntMatrix dual_global_basis() const;
};

class MalformedInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PreconditionViolated : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotApplicable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Checks pairings, injectivity of R, the Ramakrishna pair shape at every
/// auxiliary place and the bookkeeping of Q, q, q1, q2.
void validate(const SelmerInstance& inst);

using ConditionMap = std::vector<Condition>;

/// Q at Ramakrishna, every other auxiliary place unramified.
ConditionMap state_q(const SelmerInstance& inst);
/// As state_q with the chosen q unramified.
ConditionMap state_q0(const SelmerInstance& inst);
/// Every auxiliary place unramified.
ConditionMap state_base(const SelmerInstance& inst);

/// Selmer space in global coordinates.
Subspace selmer(const SelmerInstance& inst, const ConditionMap& conds);
/// Dual Selmer space in the coordinates of dual_global_basis().
Subspace dual_selmer(const SelmerInstance& inst, const ConditionMap& conds);
Vec restrict_global(const SelmerInstance& inst, const Vec& x, std::size_t place);
Vec restrict_dual(const SelmerInstance& inst, const Vec& y, std::size_t place);

/// Ledger value of h1 - h1_dual from the declared data alone.
i64 wiles_delta(const SelmerInstance& inst, const ConditionMap& conds);

struct WilesCheck {
  i64 declared = 0;
  i64 h1 = 0;
  i64 h1_dual = 0;
  bool ok() const { return declared == h1 - h1_dual; }
};
WilesCheck check_wiles(const SelmerInstance& inst, const ConditionMap& conds);

struct ChaseResult {
  std::size_t h1 = 0;
  std::size_t h1_dual = 0;
};

/// Removes q from the auxiliary set Q. Requires h1 = h1_dual = 0 for Q,
/// q in Q_unr and a nonzero dual Selmer space once q is removed.
ChaseResult chase_removal(const SelmerInstance& inst, std::size_t q);

/// Generators psi, phi of the one-dimensional Selmer and dual Selmer
/// spaces of the Q0 state.
struct Distinguished {
  Vec psi;
  Vec phi;
};
Distinguished distinguished(const SelmerInstance& inst);

struct Hyp1Result {
  bool psi_in_meet = false;
  bool phi_outside_ram_perp = false;
  bool flags_ok = false;
  bool holds() const { return psi_in_meet && phi_outside_ram_perp && flags_ok; }
  bool linear_part() const { return psi_in_meet && phi_outside_ram_perp; }
};

/// The three bullets at q1 from local data alone.
Hyp1Result check_hyp1_local(const LocalPlace& q1, i64 p, const Vec& psi_res, const Vec& phi_res,
                            const CandidateFlags& flags);
Hyp1Result check_hyp1(const SelmerInstance& inst);

struct LemmaReport {
  std::size_t dim_join = 0;
  std::size_t dim_plain = 0;
  std::size_t dim_meet = 0;
  bool all_equal_psi = false;
  std::size_t dual_dim = 0;   // dual Selmer of Q0 + q1
  Vec phi_tilde;
  bool independent = false;   // phi, phi_tilde independent in the meet-dual space
  bool ok() const { return all_equal_psi && dual_dim == 1 && independent; }
};

/// Requires the first two bullets of check_hyp1.
LemmaReport lemma_consequences(const SelmerInstance& inst);

struct Hyp2Result {
  bool psi_outside_meet = false;
  bool phi_outside_join_perp = false;
  bool phi_tilde_outside_join_perp = false;
  bool flag_prev = false;
  bool holds() const { return psi_outside_meet && phi_outside_join_perp && phi_tilde_outside_join_perp && flag_prev; }
};
Hyp2Result check_hyp2(const SelmerInstance& inst, const Vec& phi_tilde);
Hyp2Result check_hyp2(const SelmerInstance& inst);

struct ForcingVerdict {
  Hyp2Result hyp2;
  bool auxiliary = false;            // Q0 + {q1, q2} has vanishing Selmer and dual Selmer
  bool forced_scenario[2] = {false, false};
  bool forced = false;               // ramification forced at q1 and at q2
  std::optional<Vec> witness;        // global class escaping the argument
  std::string witness_kind;
};

/// Replays the forcing argument. Throws NotApplicable without q, q1, q2
/// and PreconditionViolated when check_hyp1 fails.
ForcingVerdict simulate_forcing(const SelmerInstance& inst);

/// Independent replay by enumerating every global and dual global vector.
ForcingVerdict brute_force_forcing(const SelmerInstance& inst);

enum class UnobstructedVerdict { SelmerNonzero, Done, Contradiction, CandidateUnsuitable };
std::string_view to_string(UnobstructedVerdict v);

struct UnobstructedCandidate {
  std::size_t q = 0;
  bool lift_ramified_at_q = false;      // the lift of type P + Ram_q is ramified at q
  bool base_ram_type_mod_l2 = true;     // the lift of type P is Ramakrishna type mod l^2 at q
};

struct UnobstructedReport {
  std::size_t h1_base = 0;
  std::size_t h1_with_q = 0;
  std::size_t h1_dual_with_q = 0;
  UnobstructedVerdict verdict = UnobstructedVerdict::CandidateUnsuitable;
};

/// Requires h1 = 0 in the state with every auxiliary place unramified.
UnobstructedReport unobstructed_step(const SelmerInstance& inst, const UnobstructedCandidate& cand);

// Generators.

/// L^un = span(e_1..e_s), L^Ram = span(e_1..e_{s-1}, e_{s+1}) in F_p^dim.
LocalPlace ramakrishna_place(std::string name, std::size_t dim, std::size_t s, IntMatrix pairing);
IntMatrix random_invertible(i64 p, std::size_t n, std::mt19937_64& rng);

struct LayoutPlace {
  std::string name;
  PlaceRole role = PlaceRole::Auxiliary;
  std::size_t dim = 2;
  std::size_t s = 1;  // auxiliary: dim L^un; Sigma: dim of the fixed condition
};

/// Places in order; auxiliary ones are assigned by name: "r*" to Q_ram,
/// "q" to Q_unr, "q1", "q2" to the candidates.
struct Layout {
  std::vector<LayoutPlace> places;
  std::size_t local_total() const;
  /// g making the Wiles ledger of the Q state vanish.
  std::size_t balanced_global_dim() const;
};

/// Instance for a layout with a given restriction map. The local data are
/// fixed by the seed; each place gets a random pairing and a random change
/// of coordinates.
SelmerInstance instance_from_layout(const Layout& layout, i64 p, const IntMatrix& restriction, std::uint64_t seed,
                                    CandidateFlags q1_flags = {}, CandidateFlags q2_flags = {});

/// Calls f on every g-dimensional subspace of F_p^n, as an n x g basis
/// matrix. Returns the number of subspaces.
std::size_t enumerate_subspaces(i64 p, std::size_t n, std::size_t g, const std::function<void(const IntMatrix&)>& f);

/// Layouts used by the exhaustive campaign with total local dimension at
/// most max_dim.
std::vector<Layout> exhaustive_layouts(std::size_t max_dim);
/// A random layout with total local dimension at most max_dim.
Layout random_layout(std::size_t max_dim, std::mt19937_64& rng);
/// Random instance over F_p on a random layout.
SelmerInstance random_instance(i64 p, std::size_t max_dim, std::mt19937_64& rng);

struct Counterexample {
  std::string check;
  SelmerInstance instance;
};

struct CampaignReport {
  i64 p = 2;
  std::size_t max_dim = 0;
  bool exhaustive = false;
  std::uint64_t seed = 0;
  std::size_t instances = 0;
  std::size_t wiles_checked = 0;
  std::size_t chase_checked = 0;
  std::size_t hyp1_instances = 0;
  std::size_t lemma_checked = 0;
  std::size_t forcing_checked = 0;
  std::size_t forcing_forced = 0;
  std::size_t forcing_agree = 0;
  std::size_t unobstructed_checked = 0;
  std::size_t hyp2_instances = 0;   // hyp1 and hyp2 both hold
  std::size_t hyp2_forced = 0;      // ... and the replay forces ramification
  std::vector<Counterexample> counterexamples;
  bool ok() const { return counterexamples.empty(); }
};

/// Runs every check on one instance, appending counterexamples.
void audit_instance(const SelmerInstance& inst, CampaignReport& report);

/// Exhaustive over F_2 layouts (trials ignored) or random over F_p.
CampaignReport run_selmer_campaign(i64 p, std::size_t max_dim, std::size_t trials, bool exhaustive,
                                   std::uint64_t seed);

}  // namespace exmono
