#include "exmono/selmer_ledger.hpp"

#include <algorithm>
#include <set>

namespace exmono {

namespace {

Vec reduce_vec(Vec v, i64 p) {
  for (i64& x : v) x = mod_reduce(x, p);
  return v;
}

i64 dot(const Vec& a, const Vec& b, i64 p) {
  i64 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = (s + mul_mod(a[i], b[i], p)) % p;
  return s;
}

Vec mat_vec(const IntMatrix& m, const Vec& v, i64 p) { return apply_mod(m, v, p); }

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](i64 x) { return x == 0; });
}

}  // namespace

Subspace::Subspace(i64 p, std::size_t n, const std::vector<Vec>& generators) : p_(p), n_(n) {
  const IntMatrix m = from_rows(generators, n);
  const Echelon e = row_reduce_mod_p(m, p);
  for (std::size_t r = 0; r < e.rank(); ++r) {
    const auto row = e.reduced.row(r);
    basis_.emplace_back(row.begin(), row.end());
  }
  constraints_ = nullspace_mod_p(from_rows(basis_, n), p);
}

bool Subspace::contains(const Vec& v) const {
  if (v.size() != n_) throw std::invalid_argument("Subspace::contains: length mismatch");
  for (const Vec& c : constraints_)
    if (dot(c, v, p_) != 0) return false;
  return true;
}

Subspace Subspace::operator+(const Subspace& other) const {
  std::vector<Vec> gens = basis_;
  gens.insert(gens.end(), other.basis_.begin(), other.basis_.end());
  return {p_, n_, gens};
}

Subspace Subspace::intersect(const Subspace& other) const {
  std::vector<Vec> cons = constraints_;
  cons.insert(cons.end(), other.constraints_.begin(), other.constraints_.end());
  return {p_, n_, nullspace_mod_p(from_rows(cons, n_), p_)};
}

Subspace annihilator(const Subspace& s, const IntMatrix& pairing) {
  const i64 p = s.prime();
  const IntMatrix xb = multiply_mod(from_rows(s.basis(), s.ambient_dim()), pairing, p);
  return {p, s.ambient_dim(), nullspace_mod_p(xb, p)};
}

std::vector<Vec> span_elements(const Subspace& s) {
  const i64 p = s.prime();
  const std::size_t k = s.dim();
  std::vector<Vec> out;
  std::vector<i64> coeff(k, 0);
  for (;;) {
    Vec v(s.ambient_dim(), 0);
    for (std::size_t i = 0; i < k; ++i)
      if (coeff[i] != 0)
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = (v[j] + coeff[i] * s.basis()[i][j]) % p;
    out.push_back(std::move(v));
    std::size_t i = 0;
    while (i < k && ++coeff[i] == p) coeff[i++] = 0;
    if (i == k) break;
  }
  return out;
}

std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::Fixed: return "fixed";
    case Condition::Unramified: return "un";
    case Condition::Ramakrishna: return "ram";
    case Condition::Meet: return "un_cap_ram";
    case Condition::Join: return "un_plus_ram";
    case Condition::Full: return "full";
    case Condition::Zero: return "zero";
  }
  return "?";
}

Subspace local_condition(const LocalPlace& v, Condition c, i64 p) {
  const bool aux = v.role == PlaceRole::Auxiliary;
  switch (c) {
    case Condition::Full: {
      std::vector<Vec> id;
      for (std::size_t i = 0; i < v.dim; ++i) {
        Vec e(v.dim, 0);
        e[i] = 1;
        id.push_back(std::move(e));
      }
      return {p, v.dim, id};
    }
    case Condition::Zero: return {p, v.dim, {}};
    case Condition::Fixed:
      if (aux) break;
      return {p, v.dim, v.fixed};
    case Condition::Unramified:
      if (!aux) break;
      return {p, v.dim, v.unramified};
    case Condition::Ramakrishna:
      if (!aux) break;
      return {p, v.dim, v.ramakrishna};
    case Condition::Meet:
      if (!aux) break;
      return Subspace(p, v.dim, v.unramified).intersect(Subspace(p, v.dim, v.ramakrishna));
    case Condition::Join:
      if (!aux) break;
      return Subspace(p, v.dim, v.unramified) + Subspace(p, v.dim, v.ramakrishna);
  }
  throw std::invalid_argument("condition " + std::string(to_string(c)) + " does not apply at " + v.name);
}

Subspace dual_condition(const LocalPlace& v, Condition c, i64 p) {
  return annihilator(local_condition(v, c, p), v.pairing);
}

i64 declared_dimension(const LocalPlace& v, Condition c) {
  const i64 s = static_cast<i64>(v.unramified.size());
  switch (c) {
    case Condition::Fixed: return static_cast<i64>(v.fixed.size());
    case Condition::Unramified:
    case Condition::Ramakrishna: return s;
    case Condition::Meet: return s - 1;
    case Condition::Join: return s + 1;
    case Condition::Full: return static_cast<i64>(v.dim);
    case Condition::Zero: return 0;
  }
  return 0;
}

std::size_t SelmerInstance::offset(std::size_t place) const {
  std::size_t o = 0;
  for (std::size_t i = 0; i < place; ++i) o += places[i].dim;
  return o;
}

IntMatrix SelmerInstance::dual_global_basis() const {
  // y is dual-global iff sum_v (R_v x)^T B_v y_v = 0 for all x, i.e.
  // R^T diag(B_v) y = 0.
  const std::size_t d = local_total();
  IntMatrix bdiag(d, d);
  for (std::size_t v = 0, o = 0; v < places.size(); o += places[v].dim, ++v)
    for (std::size_t i = 0; i < places[v].dim; ++i)
      for (std::size_t j = 0; j < places[v].dim; ++j) bdiag(o + i, o + j) = places[v].pairing(i, j);
  IntMatrix rt(restriction.cols(), d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < restriction.cols(); ++j) rt(j, i) = restriction(i, j);
  return from_columns(nullspace_mod_p(multiply_mod(rt, bdiag, p), p), d);
}

void validate(const SelmerInstance& inst) {
  auto fail = [](const std::string& m) { throw MalformedInstance("malformed Selmer instance: " + m); };
  if (!is_prime(inst.p)) fail("field size must be prime");
  std::size_t total = 0;
  for (const LocalPlace& v : inst.places) {
    total += v.dim;
    if (v.pairing.rows() != v.dim || v.pairing.cols() != v.dim) fail("pairing shape at " + v.name);
    if (rank_mod_p(v.pairing, inst.p) != v.dim) fail("degenerate pairing at " + v.name);
    if (v.role == PlaceRole::Auxiliary) {
      const Subspace un(inst.p, v.dim, v.unramified), ram(inst.p, v.dim, v.ramakrishna);
      if (un.dim() != v.unramified.size() || ram.dim() != v.ramakrishna.size() || un.dim() != ram.dim())
        fail("unramified and Ramakrishna conditions differ in dimension at " + v.name);
      if ((un + ram).dim() != un.dim() + 1) fail("not a Ramakrishna pair at " + v.name);
    } else if (Subspace(inst.p, v.dim, v.fixed).dim() != v.fixed.size()) {
      fail("dependent fixed condition at " + v.name);
    }
  }
  if (inst.restriction.rows() != total) fail("restriction has the wrong number of rows");
  if (rank_mod_p(inst.restriction, inst.p) != inst.restriction.cols()) fail("restriction is not injective");
  std::set<std::size_t> seen;
  auto use = [&](std::size_t i) {
    if (i >= inst.places.size() || inst.places[i].role != PlaceRole::Auxiliary) fail("auxiliary index out of range");
    if (!seen.insert(i).second) fail("auxiliary place used twice");
  };
  for (std::size_t i : inst.q_ram) use(i);
  for (std::size_t i : inst.q_unr) use(i);
  if (inst.q1) use(*inst.q1);
  if (inst.q2) use(*inst.q2);
  if (inst.q && std::find(inst.q_unr.begin(), inst.q_unr.end(), *inst.q) == inst.q_unr.end())
    fail("q is not in Q_unr");
}

ConditionMap state_base(const SelmerInstance& inst) {
  ConditionMap c;
  for (const LocalPlace& v : inst.places)
    c.push_back(v.role == PlaceRole::Sigma ? Condition::Fixed : Condition::Unramified);
  return c;
}

ConditionMap state_q(const SelmerInstance& inst) {
  ConditionMap c = state_base(inst);
  for (std::size_t i : inst.q_ram) c[i] = Condition::Ramakrishna;
  for (std::size_t i : inst.q_unr) c[i] = Condition::Ramakrishna;
  return c;
}

ConditionMap state_q0(const SelmerInstance& inst) {
  if (!inst.q) throw NotApplicable("no element of Q_unr has been chosen");
  ConditionMap c = state_q(inst);
  c[*inst.q] = Condition::Unramified;
  return c;
}

namespace {

Subspace selmer_in(const SelmerInstance& inst, const ConditionMap& conds, const IntMatrix& global, bool dual) {
  if (conds.size() != inst.places.size()) throw std::invalid_argument("condition map has the wrong length");
  std::vector<Vec> rows;
  for (std::size_t v = 0, o = 0; v < inst.places.size(); o += inst.places[v].dim, ++v) {
    const LocalPlace& place = inst.places[v];
    const Subspace l = dual ? dual_condition(place, conds[v], inst.p) : local_condition(place, conds[v], inst.p);
    for (const Vec& c : l.constraints()) {
      Vec row(global.cols(), 0);
      for (std::size_t k = 0; k < place.dim; ++k) {
        if (c[k] == 0) continue;
        for (std::size_t j = 0; j < global.cols(); ++j) row[j] = (row[j] + c[k] * global(o + k, j)) % inst.p;
      }
      rows.push_back(std::move(row));
    }
  }
  return {inst.p, global.cols(), nullspace_mod_p(from_rows(rows, global.cols()), inst.p)};
}

}  // namespace

Subspace selmer(const SelmerInstance& inst, const ConditionMap& conds) {
  return selmer_in(inst, conds, inst.restriction, false);
}

Subspace dual_selmer(const SelmerInstance& inst, const ConditionMap& conds) {
  return selmer_in(inst, conds, inst.dual_global_basis(), true);
}

Vec restrict_global(const SelmerInstance& inst, const Vec& x, std::size_t place) {
  const Vec w = mat_vec(inst.restriction, x, inst.p);
  const std::size_t o = inst.offset(place);
  return {w.begin() + static_cast<std::ptrdiff_t>(o), w.begin() + static_cast<std::ptrdiff_t>(o + inst.places[place].dim)};
}

Vec restrict_dual(const SelmerInstance& inst, const Vec& y, std::size_t place) {
  const Vec w = mat_vec(inst.dual_global_basis(), y, inst.p);
  const std::size_t o = inst.offset(place);
  return {w.begin() + static_cast<std::ptrdiff_t>(o), w.begin() + static_cast<std::ptrdiff_t>(o + inst.places[place].dim)};
}

i64 wiles_delta(const SelmerInstance& inst, const ConditionMap& conds) {
  if (conds.size() != inst.places.size()) throw std::invalid_argument("condition map has the wrong length");
  i64 delta = inst.declared_global_term;
  for (std::size_t v = 0; v < inst.places.size(); ++v)
    delta += declared_dimension(inst.places[v], conds[v]) - inst.places[v].h0_term;
  return delta;
}

WilesCheck check_wiles(const SelmerInstance& inst, const ConditionMap& conds) {
  return {wiles_delta(inst, conds), static_cast<i64>(selmer(inst, conds).dim()),
          static_cast<i64>(dual_selmer(inst, conds).dim())};
}

ChaseResult chase_removal(const SelmerInstance& inst, std::size_t q) {
  if (std::find(inst.q_unr.begin(), inst.q_unr.end(), q) == inst.q_unr.end())
    throw PreconditionViolated("chase_removal: q is not in Q_unr");
  const ConditionMap full = state_q(inst);
  if (selmer(inst, full).dim() != 0 || dual_selmer(inst, full).dim() != 0)
    throw PreconditionViolated("chase_removal: Q is not auxiliary");
  ConditionMap removed = full;
  removed[q] = Condition::Unramified;
  ChaseResult r{selmer(inst, removed).dim(), dual_selmer(inst, removed).dim()};
  if (r.h1_dual == 0) throw PreconditionViolated("chase_removal: dual Selmer vanishes after removing q");
  return r;
}

Distinguished distinguished(const SelmerInstance& inst) {
  const ConditionMap c = state_q0(inst);
  const Subspace s = selmer(inst, c);
  const Subspace d = dual_selmer(inst, c);
  if (s.dim() != 1 || d.dim() != 1)
    throw PreconditionViolated("Selmer and dual Selmer of Q0 are not both one-dimensional");
  return {s.basis()[0], d.basis()[0]};
}

Hyp1Result check_hyp1_local(const LocalPlace& q1, i64 p, const Vec& psi_res, const Vec& phi_res,
                            const CandidateFlags& flags) {
  Hyp1Result r;
  r.psi_in_meet = local_condition(q1, Condition::Meet, p).contains(reduce_vec(psi_res, p));
  r.phi_outside_ram_perp = !dual_condition(q1, Condition::Ramakrishna, p).contains(reduce_vec(phi_res, p));
  r.flags_ok = flags.ram_type_prev && !flags.ram_type_now;
  return r;
}

Hyp1Result check_hyp1(const SelmerInstance& inst) {
  if (!inst.q1) throw NotApplicable("no candidate q1");
  const Distinguished d = distinguished(inst);
  return check_hyp1_local(inst.places[*inst.q1], inst.p, restrict_global(inst, d.psi, *inst.q1),
                          restrict_dual(inst, d.phi, *inst.q1), inst.q1_flags);
}

LemmaReport lemma_consequences(const SelmerInstance& inst) {
  const Hyp1Result h = check_hyp1(inst);
  if (!h.linear_part()) throw PreconditionViolated("lemma_consequences: hypothesis 1 fails at q1");
  const Distinguished d = distinguished(inst);
  const std::size_t q1 = *inst.q1;
  const ConditionMap base = state_q0(inst);
  auto with = [&](Condition c) {
    ConditionMap m = base;
    m[q1] = c;
    return m;
  };
  LemmaReport r;
  const Subspace line(inst.p, inst.global_dim(), {d.psi});
  const Subspace join = selmer(inst, with(Condition::Join));
  const Subspace plain = selmer(inst, with(Condition::Ramakrishna));
  const Subspace meet = selmer(inst, with(Condition::Meet));
  r.dim_join = join.dim();
  r.dim_plain = plain.dim();
  r.dim_meet = meet.dim();
  r.all_equal_psi = join == line && plain == line && meet == line;
  const Subspace dual_plain = dual_selmer(inst, with(Condition::Ramakrishna));
  r.dual_dim = dual_plain.dim();
  if (r.dual_dim == 1) {
    r.phi_tilde = dual_plain.basis()[0];
    const Subspace dual_meet = dual_selmer(inst, with(Condition::Meet));
    r.independent = dual_meet.contains(d.phi) && dual_meet.contains(r.phi_tilde) &&
                    Subspace(inst.p, d.phi.size(), {d.phi, r.phi_tilde}).dim() == 2;
  }
  return r;
}

Hyp2Result check_hyp2(const SelmerInstance& inst, const Vec& phi_tilde) {
  if (!inst.q2) throw NotApplicable("no candidate q2");
  const Distinguished d = distinguished(inst);
  const std::size_t q2 = *inst.q2;
  const LocalPlace& v = inst.places[q2];
  const Subspace join_perp = dual_condition(v, Condition::Join, inst.p);
  Hyp2Result r;
  r.psi_outside_meet = !local_condition(v, Condition::Meet, inst.p).contains(restrict_global(inst, d.psi, q2));
  r.phi_outside_join_perp = !join_perp.contains(restrict_dual(inst, d.phi, q2));
  r.phi_tilde_outside_join_perp = !phi_tilde.empty() && !join_perp.contains(restrict_dual(inst, phi_tilde, q2));
  r.flag_prev = inst.q2_flags.ram_type_prev;
  return r;
}

Hyp2Result check_hyp2(const SelmerInstance& inst) {
  const LemmaReport lemma = lemma_consequences(inst);
  return check_hyp2(inst, lemma.phi_tilde);
}

namespace {

void require_forcing_setup(const SelmerInstance& inst) {
  if (inst.q_unr.empty() || !inst.q || !inst.q1 || !inst.q2)
    throw NotApplicable("forcing needs a nonempty Q_unr and candidates q1, q2; use unobstructed_step");
}

ConditionMap forcing_state(const SelmerInstance& inst, Condition at_q1, Condition at_q2) {
  ConditionMap c = state_q0(inst);
  c[*inst.q1] = at_q1;
  c[*inst.q2] = at_q2;
  return c;
}

}  // namespace

ForcingVerdict simulate_forcing(const SelmerInstance& inst) {
  require_forcing_setup(inst);
  if (!check_hyp1(inst).holds()) throw PreconditionViolated("simulate_forcing: hypothesis 1 fails");
  ForcingVerdict out;
  out.hyp2 = check_hyp2(inst);

  const ConditionMap aux = forcing_state(inst, Condition::Ramakrishna, Condition::Ramakrishna);
  const Subspace s = selmer(inst, aux);
  const Subspace sd = dual_selmer(inst, aux);
  out.auxiliary = s.dim() == 0 && sd.dim() == 0;
  if (s.dim() != 0) {
    out.witness = s.basis()[0];
    out.witness_kind = "auxiliarity";
  } else if (sd.dim() != 0) {
    out.witness = sd.basis()[0];
    out.witness_kind = "auxiliarity_dual";
  }

  // Scenario i: the new lift is unramified at q_i; the difference class h
  // is then unramified at q and q_i, in un + Ram at the other candidate
  // and in Ram along Q0.
  const Subspace ram_q1 = local_condition(inst.places[*inst.q1], Condition::Ramakrishna, inst.p);
  for (int i = 0; i < 2; ++i) {
    const ConditionMap c = i == 0 ? forcing_state(inst, Condition::Unramified, Condition::Join)
                                  : forcing_state(inst, Condition::Join, Condition::Unramified);
    bool forced = true;
    for (const Vec& h : span_elements(selmer(inst, c))) {
      if (!ram_q1.contains(restrict_global(inst, h, *inst.q1))) {
        forced = false;
        if (!out.witness) {
          out.witness = h;
          out.witness_kind = i == 0 ? "unramified_at_q1" : "unramified_at_q2";
        }
        break;
      }
    }
    out.forced_scenario[i] = forced;
  }
  out.forced = out.auxiliary && out.forced_scenario[0] && out.forced_scenario[1];
  return out;
}

ForcingVerdict brute_force_forcing(const SelmerInstance& inst) {
  require_forcing_setup(inst);
  const i64 p = inst.p;
  const std::size_t g = inst.global_dim();
  const std::size_t dual_dim = inst.local_total() - g;
  auto count = [&](std::size_t k) {
    double c = 1;
    for (std::size_t i = 0; i < k; ++i) c *= static_cast<double>(p);
    return c;
  };
  if (count(g) > 4e6 || count(dual_dim) > 4e6) throw std::invalid_argument("brute_force_forcing: space too large");

  auto all_vectors = [&](std::size_t k, const std::function<void(const Vec&)>& f) {
    Vec v(k, 0);
    for (;;) {
      f(v);
      std::size_t i = 0;
      while (i < k && ++v[i] == p) v[i++] = 0;
      if (i == k) break;
    }
  };
  std::vector<std::vector<Subspace>> primal(inst.places.size()), dual(inst.places.size());
  const Condition kinds[] = {Condition::Fixed, Condition::Unramified, Condition::Ramakrishna, Condition::Meet,
                             Condition::Join};
  for (std::size_t v = 0; v < inst.places.size(); ++v) {
    for (Condition c : kinds) {
      const bool fits = (c == Condition::Fixed) == (inst.places[v].role == PlaceRole::Sigma);
      primal[v].push_back(fits ? local_condition(inst.places[v], c, p) : Subspace(p, inst.places[v].dim, {}));
      dual[v].push_back(fits ? dual_condition(inst.places[v], c, p) : Subspace(p, inst.places[v].dim, {}));
    }
  }
  auto satisfies = [&](const Vec& w, const ConditionMap& conds, bool use_dual) {
    for (std::size_t v = 0, o = 0; v < inst.places.size(); o += inst.places[v].dim, ++v) {
      const Vec local(w.begin() + static_cast<std::ptrdiff_t>(o),
                      w.begin() + static_cast<std::ptrdiff_t>(o + inst.places[v].dim));
      const auto& table = use_dual ? dual[v] : primal[v];
      if (!table[static_cast<std::size_t>(conds[v])].contains(local)) return false;
    }
    return true;
  };

  ForcingVerdict out;
  out.hyp2 = check_hyp2(inst);
  const ConditionMap aux = forcing_state(inst, Condition::Ramakrishna, Condition::Ramakrishna);
  const ConditionMap scen[2] = {forcing_state(inst, Condition::Unramified, Condition::Join),
                                forcing_state(inst, Condition::Join, Condition::Unramified)};
  bool primal_nonzero = false;
  out.forced_scenario[0] = out.forced_scenario[1] = true;
  const std::size_t o1 = inst.offset(*inst.q1);
  const Subspace& ram_q1 = primal[*inst.q1][static_cast<std::size_t>(Condition::Ramakrishna)];
  all_vectors(g, [&](const Vec& x) {
    const Vec w = mat_vec(inst.restriction, x, p);
    if (!is_zero(x) && satisfies(w, aux, false) && !primal_nonzero) {
      primal_nonzero = true;
      if (!out.witness) {
        out.witness = x;
        out.witness_kind = "auxiliarity";
      }
    }
    const Vec at_q1(w.begin() + static_cast<std::ptrdiff_t>(o1),
                    w.begin() + static_cast<std::ptrdiff_t>(o1 + inst.places[*inst.q1].dim));
    for (int i = 0; i < 2; ++i)
      if (out.forced_scenario[i] && satisfies(w, scen[i], false) && !ram_q1.contains(at_q1))
        out.forced_scenario[i] = false;
  });
  bool dual_nonzero = false;
  const IntMatrix dg = inst.dual_global_basis();
  all_vectors(dual_dim, [&](const Vec& y) {
    if (dual_nonzero || is_zero(y)) return;
    if (satisfies(mat_vec(dg, y, p), aux, true)) dual_nonzero = true;
  });
  out.auxiliary = !primal_nonzero && !dual_nonzero;
  out.forced = out.auxiliary && out.forced_scenario[0] && out.forced_scenario[1];
  return out;
}

std::string_view to_string(UnobstructedVerdict v) {
  switch (v) {
    case UnobstructedVerdict::SelmerNonzero: return "selmer_nonzero";
    case UnobstructedVerdict::Done: return "done_ramified";
    case UnobstructedVerdict::Contradiction: return "contradiction";
    case UnobstructedVerdict::CandidateUnsuitable: return "candidate_unsuitable";
  }
  return "?";
}

UnobstructedReport unobstructed_step(const SelmerInstance& inst, const UnobstructedCandidate& cand) {
  if (cand.q >= inst.places.size() || inst.places[cand.q].role != PlaceRole::Auxiliary)
    throw std::invalid_argument("unobstructed_step: candidate is not an auxiliary place");
  const ConditionMap base = state_base(inst);
  UnobstructedReport r;
  r.h1_base = selmer(inst, base).dim();
  if (r.h1_base != 0) throw PreconditionViolated("unobstructed_step: the base Selmer space is nonzero");
  ConditionMap with_q = base;
  with_q[cand.q] = Condition::Ramakrishna;
  r.h1_with_q = selmer(inst, with_q).dim();
  r.h1_dual_with_q = dual_selmer(inst, with_q).dim();
  if (r.h1_with_q != 0)
    r.verdict = UnobstructedVerdict::SelmerNonzero;
  else if (cand.lift_ramified_at_q)
    r.verdict = UnobstructedVerdict::Done;
  else if (!cand.base_ram_type_mod_l2)
    r.verdict = UnobstructedVerdict::Contradiction;
  else
    r.verdict = UnobstructedVerdict::CandidateUnsuitable;
  return r;
}

LocalPlace ramakrishna_place(std::string name, std::size_t dim, std::size_t s, IntMatrix pairing) {
  if (s == 0 || dim < s + 1) throw std::invalid_argument("ramakrishna_place: need 1 <= s < dim");
  LocalPlace v;
  v.name = std::move(name);
  v.role = PlaceRole::Auxiliary;
  v.dim = dim;
  v.pairing = std::move(pairing);
  auto e = [dim](std::size_t i) {
    Vec x(dim, 0);
    x[i] = 1;
    return x;
  };
  for (std::size_t i = 0; i < s; ++i) v.unramified.push_back(e(i));
  for (std::size_t i = 0; i + 1 < s; ++i) v.ramakrishna.push_back(e(i));
  v.ramakrishna.push_back(e(s));
  v.h0_term = static_cast<i64>(s);
  return v;
}

IntMatrix random_invertible(i64 p, std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<i64> d(0, p - 1);
  for (;;) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = d(rng);
    if (rank_mod_p(m, p) == n) return m;
  }
}

std::size_t Layout::local_total() const {
  std::size_t d = 0;
  for (const auto& v : places) d += v.dim;
  return d;
}

std::size_t Layout::balanced_global_dim() const {
  std::size_t s = 0;
  for (const auto& v : places) s += v.s;
  return local_total() - s;
}

SelmerInstance instance_from_layout(const Layout& layout, i64 p, const IntMatrix& restriction, std::uint64_t seed,
                                    CandidateFlags q1_flags, CandidateFlags q2_flags) {
  std::mt19937_64 rng(seed);
  SelmerInstance inst;
  inst.p = p;
  inst.restriction = reduce_mod(restriction, p);
  i64 h0_sum = 0;
  for (std::size_t i = 0; i < layout.places.size(); ++i) {
    const LayoutPlace& lp = layout.places[i];
    const IntMatrix pairing = random_invertible(p, lp.dim, rng);
    const IntMatrix change = random_invertible(p, lp.dim, rng);
    LocalPlace v;
    if (lp.role == PlaceRole::Auxiliary) {
      v = ramakrishna_place(lp.name, lp.dim, lp.s, pairing);
    } else {
      v.name = lp.name;
      v.role = PlaceRole::Sigma;
      v.dim = lp.dim;
      v.pairing = pairing;
      for (std::size_t k = 0; k < lp.s; ++k) {
        Vec e(lp.dim, 0);
        e[k] = 1;
        v.fixed.push_back(std::move(e));
      }
      v.h0_term = static_cast<i64>(lp.s);
    }
    for (auto* basis : {&v.fixed, &v.unramified, &v.ramakrishna})
      for (Vec& x : *basis) x = mat_vec(change, x, p);
    h0_sum += v.h0_term;
    inst.places.push_back(std::move(v));
    if (lp.role != PlaceRole::Auxiliary) continue;
    if (lp.name == "q") {
      inst.q_unr.push_back(i);
      inst.q = i;
    } else if (lp.name == "q1") {
      inst.q1 = i;
    } else if (lp.name == "q2") {
      inst.q2 = i;
    } else if (!lp.name.empty() && lp.name[0] == 'r') {
      inst.q_ram.push_back(i);
    }
  }
  inst.declared_global_term =
      static_cast<i64>(restriction.cols()) - static_cast<i64>(restriction.rows()) + h0_sum;
  inst.q1_flags = q1_flags;
  inst.q2_flags = q2_flags;
  return inst;
}

std::size_t enumerate_subspaces(i64 p, std::size_t n, std::size_t g, const std::function<void(const IntMatrix&)>& f) {
  if (g > n) return 0;
  std::size_t count = 0;
  std::vector<std::size_t> pivots(g);
  for (std::size_t i = 0; i < g; ++i) pivots[i] = i;
  for (;;) {
    // Free positions: (row i, column c) with c > pivots[i], c not a pivot.
    std::vector<std::pair<std::size_t, std::size_t>> free;
    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t c = pivots[i] + 1; c < n; ++c)
        if (!is_pivot[c]) free.emplace_back(i, c);
    std::vector<i64> val(free.size(), 0);
    for (;;) {
      IntMatrix basis(n, g);
      for (std::size_t i = 0; i < g; ++i) basis(pivots[i], i) = 1;
      for (std::size_t k = 0; k < free.size(); ++k) basis(free[k].second, free[k].first) = val[k];
      f(basis);
      ++count;
      std::size_t k = 0;
      while (k < val.size() && ++val[k] == p) val[k++] = 0;
      if (k == val.size()) break;
    }
    // Next pivot combination.
    std::size_t i = g;
    while (i > 0 && pivots[i - 1] == n - g + i - 1) --i;
    if (i == 0) break;
    ++pivots[i - 1];
    for (std::size_t j = i; j < g; ++j) pivots[j] = pivots[j - 1] + 1;
  }
  return count;
}

std::vector<Layout> exhaustive_layouts(std::size_t max_dim) {
  const LayoutPlace q{"q", PlaceRole::Auxiliary, 2, 1}, q1{"q1", PlaceRole::Auxiliary, 2, 1},
      q2{"q2", PlaceRole::Auxiliary, 2, 1};
  const std::vector<Layout> all{
      Layout{{q, q1, q2}},
      Layout{{{"q", PlaceRole::Auxiliary, 3, 2}, q1, q2}},
      Layout{{{"s0", PlaceRole::Sigma, 2, 1}, q, q1, q2}},
      Layout{{{"r1", PlaceRole::Auxiliary, 2, 1}, q, q1, q2}},
  };
  std::vector<Layout> out;
  for (const auto& l : all)
    if (l.local_total() <= max_dim) out.push_back(l);
  return out;
}

Layout random_layout(std::size_t max_dim, std::mt19937_64& rng) {
  if (max_dim < 6) throw std::invalid_argument("random_layout: need total local dimension at least 6");
  auto aux = [&](const std::string& name) {
    const std::size_t s = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
    const std::size_t dim = s + std::uniform_int_distribution<std::size_t>(1, 2)(rng);
    return LayoutPlace{name, PlaceRole::Auxiliary, dim, s};
  };
  for (;;) {
    Layout l;
    const int sigma = std::uniform_int_distribution<int>(0, 1)(rng);
    const int ram = std::uniform_int_distribution<int>(0, 2)(rng);
    if (sigma) {
      const std::size_t dim = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
      l.places.push_back({"s0", PlaceRole::Sigma, dim, std::uniform_int_distribution<std::size_t>(0, dim)(rng)});
    }
    for (int i = 0; i < ram; ++i) l.places.push_back(aux("r" + std::to_string(i + 1)));
    for (const char* n : {"q", "q1", "q2"}) l.places.push_back(aux(n));
    if (l.local_total() <= max_dim) return l;
  }
}

SelmerInstance random_instance(i64 p, std::size_t max_dim, std::mt19937_64& rng) {
  const Layout layout = random_layout(max_dim, rng);
  const std::size_t d = layout.local_total();
  const std::size_t g = layout.balanced_global_dim();
  const std::uint64_t local_seed = rng();
  std::uniform_int_distribution<i64> coef(0, p - 1);
  std::bernoulli_distribution coin(0.5);
  CandidateFlags f1{!coin(rng) || coin(rng), coin(rng) && coin(rng)};
  CandidateFlags f2{!coin(rng) || coin(rng), coin(rng)};
  // Plant a class psi that is unramified at q and lies in the meet at q1
  // half of the time, so the forcing hypotheses are exercised often.
  const bool plant = coin(rng);
  for (;;) {
    IntMatrix r(d, g);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < g; ++j) r(i, j) = coef(rng);
    SelmerInstance inst = instance_from_layout(layout, p, r, local_seed, f1, f2);
    if (plant) {
      Vec w(d, 0);
      for (std::size_t v = 0; v < inst.places.size(); ++v) {
        const LocalPlace& place = inst.places[v];
        Condition c = Condition::Ramakrishna;
        if (place.role == PlaceRole::Sigma) c = Condition::Fixed;
        else if (inst.q && v == *inst.q) c = Condition::Unramified;
        else if (inst.q1 && v == *inst.q1) c = Condition::Meet;
        else if (inst.q2 && v == *inst.q2) c = coin(rng) ? Condition::Full : Condition::Meet;
        const Subspace l = local_condition(place, c, p);
        Vec local(place.dim, 0);
        for (const Vec& b : l.basis()) {
          const i64 t = coef(rng);
          for (std::size_t k = 0; k < place.dim; ++k) local[k] = (local[k] + t * b[k]) % p;
        }
        const std::size_t o = inst.offset(v);
        for (std::size_t k = 0; k < place.dim; ++k) w[o + k] = local[k];
      }
      for (std::size_t i = 0; i < d; ++i) r(i, 0) = w[i];
      inst = instance_from_layout(layout, p, r, local_seed, f1, f2);
    }
    if (rank_mod_p(inst.restriction, p) == g) return inst;
  }
}

namespace {

constexpr std::size_t kMaxCounterexamples = 16;

void record(CampaignReport& report, const std::string& check, const SelmerInstance& inst) {
  if (report.counterexamples.size() < kMaxCounterexamples) report.counterexamples.push_back({check, inst});
  else report.counterexamples.back().check += "; +" + check;
}

}  // namespace

void audit_instance(const SelmerInstance& inst, CampaignReport& report) {
  ++report.instances;
  try {
    validate(inst);
  } catch (const MalformedInstance& e) {
    record(report, e.what(), inst);
    return;
  }

  std::vector<ConditionMap> states{state_base(inst), state_q(inst)};
  if (inst.q) states.push_back(state_q0(inst));
  for (const ConditionMap& c : states) {
    ++report.wiles_checked;
    if (!check_wiles(inst, c).ok()) record(report, "wiles_ledger", inst);
  }

  const ConditionMap full = state_q(inst);
  if (inst.q && selmer(inst, full).dim() == 0 && dual_selmer(inst, full).dim() == 0 &&
      dual_selmer(inst, state_q0(inst)).dim() != 0) {
    ++report.chase_checked;
    const ChaseResult r = chase_removal(inst, *inst.q);
    if (r.h1 != 1 || r.h1_dual != 1) {
      record(report, "chase_removal", inst);
      return;
    }
    if (!inst.q1 || !inst.q2) return;
    const Hyp1Result h1 = check_hyp1(inst);
    if (!h1.linear_part()) return;
    ++report.lemma_checked;
    if (!lemma_consequences(inst).ok()) record(report, "lemma_consequences", inst);
    if (!h1.holds()) return;
    ++report.hyp1_instances;
    ++report.forcing_checked;
    const ForcingVerdict fast = simulate_forcing(inst);
    const ForcingVerdict slow = brute_force_forcing(inst);
    if (fast.forced == slow.forced && fast.auxiliary == slow.auxiliary &&
        fast.forced_scenario[0] == slow.forced_scenario[0] && fast.forced_scenario[1] == slow.forced_scenario[1])
      ++report.forcing_agree;
    else
      record(report, "simulate_forcing_oracle", inst);
    if (fast.forced) ++report.forcing_forced;
    if (fast.hyp2.holds()) {
      ++report.hyp2_instances;
      if (fast.forced) ++report.hyp2_forced;
      else record(report, "forcing_under_hypotheses", inst);
    }
  }

  if (selmer(inst, state_base(inst)).dim() == 0) {
    for (std::size_t v = 0; v < inst.places.size(); ++v) {
      if (inst.places[v].role != PlaceRole::Auxiliary) continue;
      for (int flags = 0; flags < 4; ++flags) {
        ++report.unobstructed_checked;
        const UnobstructedReport u = unobstructed_step(inst, {v, (flags & 1) != 0, (flags & 2) != 0});
        if ((u.verdict == UnobstructedVerdict::SelmerNonzero) != (u.h1_with_q != 0))
          record(report, "unobstructed_step", inst);
      }
      break;
    }
  }
}

CampaignReport run_selmer_campaign(i64 p, std::size_t max_dim, std::size_t trials, bool exhaustive,
                                   std::uint64_t seed) {
  if (p != 2 && p != 3 && p != 5) throw std::invalid_argument("selmer campaign: field size must be 2, 3 or 5");
  if (max_dim > 12) throw std::invalid_argument("selmer campaign: dimension above 12 refused");
  if (exhaustive && p != 2) throw std::invalid_argument("selmer campaign: exhaustive mode is F_2 only");
  CampaignReport report;
  report.p = p;
  report.max_dim = max_dim;
  report.exhaustive = exhaustive;
  report.seed = seed;
  if (exhaustive) {
    std::uint64_t layout_seed = seed;
    for (const Layout& layout : exhaustive_layouts(max_dim)) {
      const std::uint64_t s = layout_seed++;
      enumerate_subspaces(p, layout.local_total(), layout.balanced_global_dim(), [&](const IntMatrix& basis) {
        audit_instance(instance_from_layout(layout, p, basis, s), report);
      });
    }
  } else {
    if (max_dim < 6) throw std::invalid_argument("selmer campaign: need dimension at least 6");
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < trials; ++t) audit_instance(random_instance(p, max_dim, rng), report);
  }
  return report;
}

}  // namespace exmono
