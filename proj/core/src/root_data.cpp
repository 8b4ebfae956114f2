#include "exmono/root_data.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

namespace exmono {

std::string_view to_string(CartanType t) {
  switch (t) {
    case CartanType::A1: return "A1";
    case CartanType::A2: return "A2";
    case CartanType::G2: return "G2";
    case CartanType::F4: return "F4";
    case CartanType::E6: return "E6";
    case CartanType::E7: return "E7";
    case CartanType::E8: return "E8";
  }
  return "?";
}

std::optional<CartanType> parse_cartan_type(std::string_view label) {
  for (CartanType t : {CartanType::A1, CartanType::A2, CartanType::G2, CartanType::F4, CartanType::E6,
                       CartanType::E7, CartanType::E8}) {
    if (to_string(t) == label) return t;
  }
  return std::nullopt;
}

bool is_exceptional(CartanType t) { return t != CartanType::A1 && t != CartanType::A2; }

namespace {

// Gram matrix of the simple roots, shortest roots of squared length 2.
IntMatrix simple_gram(CartanType t) {
  auto from_edges = [](std::size_t n, std::vector<i64> norms,
                       const std::vector<std::tuple<std::size_t, std::size_t, i64>>& edges) {
    IntMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) g(i, i) = norms[i];
    for (auto [i, j, v] : edges) {
      g(i, j) = v;
      g(j, i) = v;
    }
    return g;
  };
  auto e_series = [&](std::size_t n) {
    std::vector<std::tuple<std::size_t, std::size_t, i64>> edges{{0, 2, -1}, {1, 3, -1}};
    for (std::size_t i = 2; i + 1 < n; ++i) edges.emplace_back(i, i + 1, -1);
    return from_edges(n, std::vector<i64>(n, 2), edges);
  };
  switch (t) {
    case CartanType::A1: return from_edges(1, {2}, {});
    case CartanType::A2: return from_edges(2, {2, 2}, {{0, 1, -1}});
    case CartanType::G2: return from_edges(2, {2, 6}, {{0, 1, -3}});
    case CartanType::F4: return from_edges(4, {4, 4, 2, 2}, {{0, 1, -2}, {1, 2, -2}, {2, 3, -1}});
    case CartanType::E6: return e_series(6);
    case CartanType::E7: return e_series(7);
    case CartanType::E8: return e_series(8);
  }
  throw std::invalid_argument("unsupported Cartan type");
}

i64 determinant(const IntMatrix& m) {
  // Fraction-free Bareiss elimination; entries stay small here.
  const std::size_t n = m.rows();
  std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = static_cast<long>(m(i, j));
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t s = k + 1;
      while (s < n && a[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(a[s], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1].get_si();
}

}  // namespace

RootSystem::RootSystem(CartanType type) : type_(type) {
  const IntMatrix gram = simple_gram(type);
  rank_ = gram.rows();
  cartan_ = IntMatrix(rank_, rank_);
  half_norms_.resize(rank_);
  for (std::size_t i = 0; i < rank_; ++i) {
    half_norms_[i] = gram(i, i) / 2;
    for (std::size_t j = 0; j < rank_; ++j) cartan_(i, j) = 2 * gram(i, j) / gram(i, i);
  }

  // Closure of the simple roots under simple reflections.
  std::set<Root> seen;
  std::deque<Root> queue;
  for (const Root& s : simple_roots()) {
    seen.insert(s);
    queue.push_back(s);
  }
  while (!queue.empty()) {
    Root r = std::move(queue.front());
    queue.pop_front();
    for (std::size_t i = 0; i < rank_; ++i) {
      Root t = reflect(r, i);
      if (seen.insert(t).second) queue.push_back(std::move(t));
    }
  }

  std::vector<Root> positive;
  for (const Root& r : seen) {
    if (std::all_of(r.begin(), r.end(), [](i64 x) { return x >= 0; })) positive.push_back(r);
  }
  std::sort(positive.begin(), positive.end(), [this](const Root& a, const Root& b) {
    const i64 ha = height(a), hb = height(b);
    return ha != hb ? ha < hb : a < b;
  });
  if (positive.size() * 2 != seen.size()) throw std::logic_error("root closure is not symmetric");
  roots_ = positive;
  for (const Root& r : positive) {
    Root n(r.size());
    std::transform(r.begin(), r.end(), n.begin(), [](i64 x) { return -x; });
    roots_.push_back(std::move(n));
  }
  for (std::size_t i = 0; i < roots_.size(); ++i) index_.emplace(roots_[i], i);

  if (roots_.size() % rank_ != 0) throw std::logic_error("number of roots not divisible by rank");
  coxeter_ = static_cast<int>(roots_.size() / rank_);
  center_order_ = determinant(cartan_);

  // Drive 2rho to the antidominant chamber; the reflections used form a
  // reduced word for w0, and -1 is in W iff w0 negates every simple root.
  Root v(rank_, 0);
  for (const Root& r : positive)
    for (std::size_t i = 0; i < rank_; ++i) v[i] += r[i];
  std::vector<std::size_t> word;
  for (bool moved = true; moved;) {
    moved = false;
    for (std::size_t i = 0; i < rank_; ++i) {
      if (simple_pairing(v, i) > 0) {
        v = reflect(v, i);
        word.push_back(i);
        moved = true;
      }
    }
  }
  minus_one_in_weyl_ = true;
  for (Root s : simple_roots()) {
    Root image = s;
    for (std::size_t i : word) image = reflect(image, i);
    for (std::size_t i = 0; i < rank_; ++i)
      if (image[i] != -s[i]) minus_one_in_weyl_ = false;
  }
}

std::vector<Root> RootSystem::positive_roots() const {
  return {roots_.begin(), roots_.begin() + static_cast<std::ptrdiff_t>(num_positive())};
}

std::vector<Root> RootSystem::simple_roots() const {
  std::vector<Root> out;
  for (std::size_t i = 0; i < rank_; ++i) {
    Root r(rank_, 0);
    r[i] = 1;
    out.push_back(std::move(r));
  }
  return out;
}

std::optional<std::size_t> RootSystem::index_of(const Root& r) const {
  auto it = index_.find(r);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t RootSystem::negative_index(std::size_t i) const {
  const std::size_t n = num_positive();
  return i < n ? i + n : i - n;
}

i64 RootSystem::height(const Root& r) const { return std::accumulate(r.begin(), r.end(), i64{0}); }

i64 RootSystem::simple_pairing(const Root& b, std::size_t i) const {
  i64 s = 0;
  for (std::size_t j = 0; j < rank_; ++j) s += cartan_(i, j) * b[j];
  return s;
}

Root RootSystem::reflect(const Root& b, std::size_t i) const {
  Root out = b;
  out[i] -= simple_pairing(b, i);
  return out;
}

i64 RootSystem::inner_product(const Root& a, const Root& b) const {
  // (a_i, a_j) = d_i * cartan(i, j) with d_i = (a_i, a_i) / 2.
  i64 s = 0;
  for (std::size_t i = 0; i < rank_; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < rank_; ++j) s += a[i] * b[j] * half_norms_[i] * cartan_(i, j);
  }
  return s;
}

Root RootSystem::coroot(const Root& a) const {
  const i64 n = norm(a);
  Root out(rank_);
  for (std::size_t j = 0; j < rank_; ++j) {
    const i64 num = a[j] * 2 * half_norms_[j];
    if (num % n != 0) throw std::logic_error("coroot is not integral");
    out[j] = num / n;
  }
  return out;
}

i64 RootSystem::pairing(const Root& b, const Root& a) const {
  const i64 num = 2 * inner_product(a, b);
  const i64 n = norm(a);
  if (num % n != 0) throw std::logic_error("non-integral root pairing");
  return num / n;
}

RootSystem build_root_system(CartanType type) { return RootSystem(type); }

i64 admissible_prime_floor(const RootSystem& system) { return next_prime_above(4 * system.coxeter_number() - 1); }

i64 center_hypothesis_bound(const RootSystem& system) {
  const i64 z = system.center_order();
  const i64 h = system.coxeter_number();
  const i64 parity_bound = (z % 2 == 0) ? (h - 1) * z : (2 * h - 2) * z;
  return std::max(8 * z, parity_bound);
}

AdmissibilityReport check_admissibility(const RootSystem& system, i64 ell) {
  AdmissibilityReport r;
  r.ell = ell;
  r.prime = is_prime(ell);
  r.coxeter_bound = 4 * system.coxeter_number() - 1;
  r.above_coxeter_bound = ell > r.coxeter_bound;
  r.excluded = system.type() == CartanType::E8 && (ell == 229 || ell == 269 || ell == 367);
  r.center_bound = center_hypothesis_bound(system);
  r.above_center_bound = ell - 1 > r.center_bound;
  return r;
}

bool is_admissible(const RootSystem& system, i64 ell) { return check_admissibility(system, ell).admissible(); }

i64 smallest_admissible_prime(const RootSystem& system) {
  i64 ell = admissible_prime_floor(system);
  while (!is_admissible(system, ell)) ell = next_prime_above(ell);
  return ell;
}

}  // namespace exmono
