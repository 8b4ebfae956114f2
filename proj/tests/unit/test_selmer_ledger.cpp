#include <gtest/gtest.h>

#include <functional>

#include "exmono/selmer_ledger.hpp"
#include "unit/oracles.hpp"

using namespace exmono;

namespace {

// Number of x in F_p^g whose restriction at every place lies in the local
// condition, by enumeration of the whole global space.
std::size_t brute_selmer_size(const SelmerInstance& inst, const ConditionMap& conds) {
  const std::size_t g = inst.global_dim();
  std::vector<Subspace> local;
  for (std::size_t v = 0; v < inst.places.size(); ++v) local.push_back(local_condition(inst.places[v], conds[v], inst.p));
  std::size_t count = 0;
  Vec x(g, 0);
  for (;;) {
    bool in = true;
    for (std::size_t v = 0; v < inst.places.size() && in; ++v) in = local[v].contains(restrict_global(inst, x, v));
    count += in;
    std::size_t i = 0;
    while (i < g && ++x[i] == inst.p) x[i++] = 0;
    if (i == g) break;
  }
  return count;
}

std::size_t power(i64 p, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < k; ++i) r *= static_cast<std::size_t>(p);
  return r;
}

SelmerInstance find_instance(i64 p, std::size_t dims, std::uint64_t seed,
                             const std::function<bool(const SelmerInstance&)>& pred) {
  std::mt19937_64 rng(seed);
  for (int t = 0; t < 100000; ++t) {
    SelmerInstance inst = random_instance(p, dims, rng);
    if (pred(inst)) return inst;
  }
  throw std::runtime_error("no instance found");
}

bool chase_ready(const SelmerInstance& inst) {
  if (!inst.q) return false;
  const ConditionMap full = state_q(inst);
  return selmer(inst, full).dim() == 0 && dual_selmer(inst, full).dim() == 0 &&
         dual_selmer(inst, state_q0(inst)).dim() != 0;
}

bool hyp1_holds(const SelmerInstance& inst) { return chase_ready(inst) && check_hyp1(inst).holds(); }

IntMatrix identity(std::size_t n) { return IntMatrix::identity(n); }

}  // namespace

TEST(Subspace, SumIntersectionAndMembership) {
  const Subspace a(3, 3, {{1, 0, 0}, {0, 1, 0}});
  const Subspace b(3, 3, {{0, 1, 0}, {0, 0, 1}});
  EXPECT_EQ((a + b).dim(), 3u);
  EXPECT_EQ(a.intersect(b), Subspace(3, 3, {{0, 2, 0}}));
  EXPECT_TRUE(a.contains({2, 1, 0}));
  EXPECT_FALSE(a.contains({0, 0, 1}));
  EXPECT_EQ(Subspace(3, 3, {{1, 1, 1}, {2, 2, 2}}).dim(), 1u);
  EXPECT_EQ(span_elements(a).size(), 9u);
}

TEST(Subspace, AnnihilatorIsAnInvolution) {
  auto rng = oracle::rng(30);
  for (i64 p : {2, 3, 5}) {
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 2 + rng() % 4;
      const IntMatrix b = random_invertible(p, n, rng);
      IntMatrix bt(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) bt(i, j) = b(j, i);
      std::vector<Vec> gens(rng() % (n + 1), Vec(n));
      for (Vec& v : gens)
        for (i64& x : v) x = static_cast<i64>(rng() % static_cast<u64>(p));
      const Subspace s(p, n, gens);
      const Subspace perp = annihilator(s, b);
      EXPECT_EQ(s.dim() + perp.dim(), n);
      // The left annihilator of perp (pairing transposed) gives s back.
      EXPECT_EQ(annihilator(perp, bt), s);
      for (const Vec& x : s.basis())
        for (const Vec& y : perp.basis()) {
          i64 v = 0;
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) v += x[i] * b(i, j) * y[j];
          EXPECT_EQ(oracle::mod(v, p), 0);
        }
    }
  }
}

TEST(LocalConditions, RamakrishnaPairIdentity) {
  const LocalPlace v = ramakrishna_place("q", 4, 2, identity(4));
  const Subspace un = local_condition(v, Condition::Unramified, 3);
  const Subspace ram = local_condition(v, Condition::Ramakrishna, 3);
  EXPECT_EQ((un + ram).dim() - un.dim(), 1u);
  EXPECT_EQ(local_condition(v, Condition::Meet, 3).dim(), 1u);
  EXPECT_EQ(local_condition(v, Condition::Join, 3).dim(), 3u);
  EXPECT_EQ(declared_dimension(v, Condition::Join), 3);
  EXPECT_EQ(declared_dimension(v, Condition::Meet), 1);
  EXPECT_THROW(local_condition(v, Condition::Fixed, 3), std::invalid_argument);
  EXPECT_THROW(ramakrishna_place("q", 2, 2, identity(2)), std::invalid_argument);
}

TEST(Validation, RejectsMalformedInstances) {
  Layout layout{{{"q", PlaceRole::Auxiliary, 2, 1}, {"q1", PlaceRole::Auxiliary, 2, 1}}};
  IntMatrix r(4, 2);
  r(0, 0) = r(1, 1) = 1;
  SelmerInstance inst = instance_from_layout(layout, 3, r, 1);
  EXPECT_NO_THROW(validate(inst));
  SelmerInstance bad = inst;
  bad.places[0].ramakrishna = bad.places[0].unramified;
  EXPECT_THROW(validate(bad), MalformedInstance);
  bad = inst;
  bad.restriction(1, 1) = 0;
  EXPECT_THROW(validate(bad), MalformedInstance);
  bad = inst;
  bad.places[1].pairing = IntMatrix(2, 2);
  EXPECT_THROW(validate(bad), MalformedInstance);
  bad = inst;
  bad.q1 = 0;
  EXPECT_THROW(validate(bad), MalformedInstance);
}

TEST(Wiles, FullAndZeroToyInstance) {
  Layout layout{{{"s0", PlaceRole::Sigma, 3, 1}}};
  IntMatrix r(3, 2);
  r(0, 0) = r(1, 1) = 1;
  const SelmerInstance inst = instance_from_layout(layout, 5, r, 2);
  for (Condition c : {Condition::Full, Condition::Zero, Condition::Fixed}) {
    const WilesCheck w = check_wiles(inst, {c});
    EXPECT_TRUE(w.ok());
    EXPECT_EQ(power(5, static_cast<std::size_t>(w.h1)), brute_selmer_size(inst, {c}));
  }
  EXPECT_EQ(check_wiles(inst, {Condition::Full}).h1, 2);
  EXPECT_EQ(check_wiles(inst, {Condition::Zero}).h1_dual, 1);
}

TEST(Wiles, RamakrishnaSwapsAndJoin) {
  const SelmerInstance inst = find_instance(3, 9, 31, [](const SelmerInstance&) { return true; });
  const ConditionMap base = state_base(inst);
  for (std::size_t v = 0; v < inst.places.size(); ++v) {
    if (inst.places[v].role != PlaceRole::Auxiliary) continue;
    ConditionMap ram = base, join = base;
    ram[v] = Condition::Ramakrishna;
    join[v] = Condition::Join;
    EXPECT_EQ(wiles_delta(inst, ram), wiles_delta(inst, base));
    EXPECT_EQ(wiles_delta(inst, join), wiles_delta(inst, base) + 1);
  }
}

TEST(Wiles, LedgerHoldsOnRandomInstances) {
  std::mt19937_64 rng(oracle::kSeed);
  for (i64 p : {2, 3, 5}) {
    for (int t = 0; t < 100; ++t) {
      const SelmerInstance inst = random_instance(p, 10, rng);
      for (const ConditionMap& c : {state_base(inst), state_q(inst)}) {
        const WilesCheck w = check_wiles(inst, c);
        EXPECT_TRUE(w.ok()) << w.declared << " " << w.h1 << " " << w.h1_dual;
      }
    }
  }
}

TEST(Selmer, DimensionsAgreeWithEnumeration) {
  std::mt19937_64 rng(oracle::kSeed + 1);
  for (i64 p : {2, 3}) {
    for (int t = 0; t < 40; ++t) {
      const SelmerInstance inst = random_instance(p, 9, rng);
      for (const ConditionMap& c : {state_base(inst), state_q(inst)})
        EXPECT_EQ(brute_selmer_size(inst, c), power(p, selmer(inst, c).dim()));
    }
  }
}

TEST(Selmer, EnlargingAConditionNeverShrinksH1) {
  std::mt19937_64 rng(oracle::kSeed + 2);
  for (int t = 0; t < 200; ++t) {
    const SelmerInstance inst = random_instance(3, 10, rng);
    const ConditionMap base = state_base(inst);
    for (std::size_t v = 0; v < inst.places.size(); ++v) {
      if (inst.places[v].role != PlaceRole::Auxiliary) continue;
      ConditionMap meet = base, join = base, full = base;
      meet[v] = Condition::Meet;
      join[v] = Condition::Join;
      full[v] = Condition::Full;
      EXPECT_LE(selmer(inst, meet).dim(), selmer(inst, base).dim());
      EXPECT_LE(selmer(inst, base).dim(), selmer(inst, join).dim());
      EXPECT_LE(selmer(inst, join).dim(), selmer(inst, full).dim());
    }
  }
}

TEST(Chase, RemovalGivesOneOne) {
  for (i64 p : {2, 3, 5}) {
    const SelmerInstance inst = find_instance(p, 10, 40 + static_cast<std::uint64_t>(p), chase_ready);
    const ChaseResult r = chase_removal(inst, *inst.q);
    EXPECT_EQ(r.h1, 1u);
    EXPECT_EQ(r.h1_dual, 1u);
  }
}

TEST(Chase, PreconditionsEnforced) {
  const SelmerInstance inst = find_instance(3, 10, 41, [](const SelmerInstance& i) {
    return i.q && selmer(i, state_q(i)).dim() != 0;
  });
  EXPECT_THROW(chase_removal(inst, *inst.q), PreconditionViolated);
  EXPECT_THROW(chase_removal(inst, *inst.q1), PreconditionViolated);
}

TEST(Hyp1, LocalExamples) {
  const LocalPlace q1 = ramakrishna_place("q1", 2, 1, identity(2));
  // Ram = <e2>, so Ram-perp under the identity pairing is <e1>.
  EXPECT_TRUE(check_hyp1_local(q1, 3, {0, 0}, {0, 1}, {true, false}).holds());
  EXPECT_FALSE(check_hyp1_local(q1, 3, {0, 0}, {1, 0}, {true, false}).holds());
  EXPECT_FALSE(check_hyp1_local(q1, 3, {0, 0}, {0, 1}, {true, true}).holds());
  EXPECT_FALSE(check_hyp1_local(q1, 3, {1, 0}, {0, 1}, {true, false}).holds());
}

TEST(Lemma, ConsequencesFollowFromHypothesisOne) {
  std::mt19937_64 rng(oracle::kSeed + 3);
  int checked = 0;
  for (int t = 0; t < 4000 && checked < 200; ++t) {
    const SelmerInstance inst = random_instance(t % 2 ? 3 : 5, 10, rng);
    if (!chase_ready(inst) || !check_hyp1(inst).linear_part()) continue;
    ++checked;
    const LemmaReport r = lemma_consequences(inst);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.dim_join, 1u);
    EXPECT_EQ(r.dim_plain, 1u);
    EXPECT_EQ(r.dim_meet, 1u);
  }
  EXPECT_GE(checked, 100);
}

TEST(Lemma, RefusesWhenPsiLeavesTheMeet) {
  const SelmerInstance inst = find_instance(3, 10, 50, [](const SelmerInstance& i) {
    return chase_ready(i) && i.q1 && !check_hyp1(i).psi_in_meet;
  });
  EXPECT_THROW(lemma_consequences(inst), PreconditionViolated);
}

TEST(Forcing, ForcedWhenBothHypothesesHold) {
  const SelmerInstance inst =
      find_instance(3, 10, 60, [](const SelmerInstance& i) { return hyp1_holds(i) && check_hyp2(i).holds(); });
  const ForcingVerdict v = simulate_forcing(inst);
  EXPECT_TRUE(v.forced);
  EXPECT_TRUE(v.auxiliary);
  EXPECT_TRUE(v.forced_scenario[0]);
  EXPECT_TRUE(v.forced_scenario[1]);
  EXPECT_FALSE(v.witness);
}

TEST(Forcing, EscapeWhenPsiMeetsAtQ2) {
  const SelmerInstance inst = find_instance(3, 10, 61, [](const SelmerInstance& i) {
    return hyp1_holds(i) && !check_hyp2(i).psi_outside_meet;
  });
  const ForcingVerdict v = simulate_forcing(inst);
  EXPECT_FALSE(v.forced);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(v.witness_kind, "auxiliarity");
  // The witness is a nonzero class satisfying every local condition of
  // the state where q1 and q2 are added as Ramakrishna primes.
  ConditionMap c = state_q0(inst);
  c[*inst.q1] = c[*inst.q2] = Condition::Ramakrishna;
  bool nonzero = false;
  for (i64 x : *v.witness) nonzero = nonzero || x != 0;
  EXPECT_TRUE(nonzero);
  for (std::size_t p = 0; p < inst.places.size(); ++p)
    EXPECT_TRUE(local_condition(inst.places[p], c[p], inst.p).contains(restrict_global(inst, *v.witness, p)));
}

TEST(Forcing, NotApplicableWithoutUnramifiedSet) {
  SelmerInstance inst = find_instance(3, 10, 62, hyp1_holds);
  inst.q_unr.clear();
  inst.q.reset();
  EXPECT_THROW(simulate_forcing(inst), NotApplicable);
  EXPECT_THROW(brute_force_forcing(inst), NotApplicable);
}

TEST(Forcing, AgreesWithBruteForce) {
  std::mt19937_64 rng(oracle::kSeed + 4);
  int compared = 0;
  for (int t = 0; t < 20000 && compared < 150; ++t) {
    const SelmerInstance inst = random_instance(t % 2 ? 3 : 2, 10, rng);
    if (!hyp1_holds(inst)) continue;
    ++compared;
    const ForcingVerdict a = simulate_forcing(inst), b = brute_force_forcing(inst);
    EXPECT_EQ(a.forced, b.forced);
    EXPECT_EQ(a.auxiliary, b.auxiliary);
    EXPECT_EQ(a.forced_scenario[0], b.forced_scenario[0]);
    EXPECT_EQ(a.forced_scenario[1], b.forced_scenario[1]);
  }
  EXPECT_GE(compared, 100);
}

TEST(Unobstructed, VerdictRules) {
  const SelmerInstance inst =
      find_instance(3, 10, 70, [](const SelmerInstance& i) { return selmer(i, state_base(i)).dim() == 0; });
  for (std::size_t v = 0; v < inst.places.size(); ++v) {
    if (inst.places[v].role != PlaceRole::Auxiliary) continue;
    for (bool ramified : {false, true})
      for (bool ram_type : {false, true}) {
        const UnobstructedReport r = unobstructed_step(inst, {v, ramified, ram_type});
        ConditionMap c = state_base(inst);
        c[v] = Condition::Ramakrishna;
        const bool nonzero = brute_selmer_size(inst, c) > 1;
        UnobstructedVerdict want = UnobstructedVerdict::CandidateUnsuitable;
        if (nonzero) want = UnobstructedVerdict::SelmerNonzero;
        else if (ramified) want = UnobstructedVerdict::Done;
        else if (!ram_type) want = UnobstructedVerdict::Contradiction;
        EXPECT_EQ(r.verdict, want);
      }
  }
  const SelmerInstance busy =
      find_instance(3, 10, 71, [](const SelmerInstance& i) { return selmer(i, state_base(i)).dim() != 0; });
  EXPECT_THROW(unobstructed_step(busy, {*busy.q1, true, true}), PreconditionViolated);
}

TEST(Enumeration, SubspaceCountIsGaussianBinomial) {
  for (i64 p : {2, 3}) {
    for (std::size_t n = 1; n <= 5; ++n) {
      for (std::size_t g = 0; g <= n; ++g) {
        // [n choose g]_p = prod (p^(n-i) - 1) / (p^(i+1) - 1)
        std::size_t num = 1, den = 1;
        for (std::size_t i = 0; i < g; ++i) {
          num *= power(p, n - i) - 1;
          den *= power(p, i + 1) - 1;
        }
        std::set<std::vector<i64>> seen;
        const std::size_t count = enumerate_subspaces(p, n, g, [&](const IntMatrix& b) {
          EXPECT_EQ(rank_mod_p(b, p), g);
          seen.insert(b.data());
        });
        EXPECT_EQ(count, num / den);
        EXPECT_EQ(seen.size(), count);
      }
    }
  }
}

TEST(Campaign, SmallRandomCampaignsPass) {
  for (i64 p : {3, 5}) {
    const CampaignReport r = run_selmer_campaign(p, 10, 300, false, 1);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.instances, 300u);
    EXPECT_GT(r.chase_checked, 0u);
  }
  EXPECT_THROW(run_selmer_campaign(7, 8, 10, false, 0), std::invalid_argument);
  EXPECT_THROW(run_selmer_campaign(2, 20, 10, false, 0), std::invalid_argument);
}
