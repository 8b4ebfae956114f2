#include "exmono/chevalley.hpp"

#include <array>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace exmono {

ChevalleyAlgebra::ChevalleyAlgebra(RootSystem system)
    : system_(std::move(system)), dim_(system_.rank() + system_.roots().size()) {
  compute_structure_constants();
  build_table();
}

i64 ChevalleyAlgebra::grade(std::size_t b) const {
  return is_cartan(b) ? 0 : system_.height(system_.roots()[root_of(b)]);
}

namespace {

Root add(const Root& a, const Root& b) {
  Root out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

mpq_class ratio(i64 num, i64 den) {
  mpq_class q(static_cast<long>(num), static_cast<long>(den));
  q.canonicalize();
  return q;
}

i64 exact_div(mpq_class q) {
  q.canonicalize();
  if (q.get_den() != 1) throw std::logic_error("non-integral structure constant");
  return q.get_num().get_si();
}

}  // namespace

void ChevalleyAlgebra::compute_structure_constants() {
  const auto& roots = system_.roots();
  const std::size_t nr = roots.size();
  const std::size_t npos = system_.num_positive();
  n_.assign(nr * nr, 0);
  std::vector<bool> known(nr * nr, false);

  auto positive = [&](std::size_t i) { return i < npos; };

  // N for an arbitrary pair, reduced to a pair of positive roots whose sum
  // has already been processed.
  std::function<i64(std::size_t, std::size_t)> value = [&](std::size_t a, std::size_t b) -> i64 {
    const Root sum = add(roots[a], roots[b]);
    const auto c = system_.index_of(sum);
    if (!c) return 0;
    if (positive(a) && positive(b)) {
      if (!known[a * nr + b]) throw std::logic_error("structure constant requested out of order");
      return n_[a * nr + b];
    }
    if (!positive(a) && !positive(b)) return -value(system_.negative_index(a), system_.negative_index(b));
    if (!positive(a)) return -value(b, a);
    // a > 0 > b.
    if (positive(*c)) {
      // N_{a,b} = -(c,c)/(a,a) N_{-b,c}
      const mpq_class q = ratio(system_.norm(sum) * value(system_.negative_index(b), *c), system_.norm(roots[a]));
      return -exact_div(q);
    }
    // c < 0: with d = -c > 0, N_{a,b} = (d,d)/(b,b) N_{d,a}
    const std::size_t d = system_.negative_index(*c);
    const mpq_class q = ratio(system_.norm(sum) * value(d, a), system_.norm(roots[b]));
    return exact_div(q);
  };

  for (std::size_t xi = 0; xi < npos; ++xi) {
    // Special pairs (a, b) with a + b = xi, a < b in the root order.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < npos; ++a) {
      Root diff = roots[xi];
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] -= roots[a][k];
      const auto b = system_.index_of(diff);
      if (b && positive(*b) && a < *b) pairs.emplace_back(a, *b);
    }
    if (pairs.empty()) continue;  // simple root
    const auto [x1, x2] = pairs.front();
    // p = largest k with x2 - k x1 a root.
    i64 p = 0;
    for (Root r = roots[x2];;) {
      for (std::size_t k = 0; k < r.size(); ++k) r[k] -= roots[x1][k];
      if (!system_.is_root(r)) break;
      ++p;
    }
    const i64 nx = p + 1;
    n_[x1 * nr + x2] = nx;
    n_[x2 * nr + x1] = -nx;
    known[x1 * nr + x2] = known[x2 * nr + x1] = true;

    const i64 xi_norm = system_.norm(roots[xi]);
    for (std::size_t s = 1; s < pairs.size(); ++s) {
      const auto [a, b] = pairs[s];
      const std::size_t na = system_.negative_index(a);
      const std::size_t nb = system_.negative_index(b);
      mpq_class bracket_sum = 0;
      // Four-root relation applied to (x1, x2, -a, -b).
      const Root x2_minus_a = add(roots[x2], roots[na]);
      if (system_.is_root(x2_minus_a))
        bracket_sum += ratio(value(x2, na) * value(x1, nb), system_.norm(x2_minus_a));
      const Root x1_minus_a = add(roots[x1], roots[na]);
      if (system_.is_root(x1_minus_a))
        bracket_sum += ratio(value(na, x1) * value(x2, nb), system_.norm(x1_minus_a));
      const mpq_class q = bracket_sum * xi_norm / nx;
      const i64 v = exact_div(q);
      n_[a * nr + b] = v;
      n_[b * nr + a] = -v;
      known[a * nr + b] = known[b * nr + a] = true;
    }
  }

  for (std::size_t a = 0; a < nr; ++a)
    for (std::size_t b = 0; b < nr; ++b)
      if (!(positive(a) && positive(b))) n_[a * nr + b] = value(a, b);
}

i64 ChevalleyAlgebra::structure_constant(std::size_t a, std::size_t b) const {
  return n_[a * system_.roots().size() + b];
}

void ChevalleyAlgebra::build_table() {
  const std::size_t r = rank();
  const auto& roots = system_.roots();
  offsets_.assign(dim_ * dim_ + 1, 0);
  terms_.clear();
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if (is_cartan(i) && !is_cartan(j)) {
        const i64 c = system_.simple_pairing(roots[root_of(j)], i);
        if (c != 0) terms_.push_back({static_cast<std::uint32_t>(j), c});
      } else if (!is_cartan(i) && is_cartan(j)) {
        const i64 c = system_.simple_pairing(roots[root_of(i)], j);
        if (c != 0) terms_.push_back({static_cast<std::uint32_t>(i), -c});
      } else if (!is_cartan(i) && !is_cartan(j)) {
        const std::size_t a = root_of(i), b = root_of(j);
        if (system_.negative_index(a) == b) {
          const Root co = system_.coroot(roots[a]);
          for (std::size_t k = 0; k < r; ++k)
            if (co[k] != 0) terms_.push_back({static_cast<std::uint32_t>(k), co[k]});
        } else if (const i64 nab = structure_constant(a, b); nab != 0) {
          const Root sum = add(roots[a], roots[b]);
          terms_.push_back({static_cast<std::uint32_t>(root_basis(*system_.index_of(sum))), nab});
        }
      }
      offsets_[i * dim_ + j + 1] = terms_.size();
    }
  }
}

std::span<const Term> ChevalleyAlgebra::bracket_basis(std::size_t a, std::size_t b) const {
  const std::size_t k = a * dim_ + b;
  return {terms_.data() + offsets_[k], offsets_[k + 1] - offsets_[k]};
}

std::string ChevalleyAlgebra::basis_label(std::size_t b) const {
  std::ostringstream os;
  if (is_cartan(b)) {
    os << "H" << (b + 1);
  } else {
    os << "X[";
    const Root& r = system_.roots()[root_of(b)];
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "]";
  }
  return os.str();
}

std::string ChevalleyAlgebra::dump_bracket_table() const {
  std::ostringstream os;
  os << "# chevalley bracket table " << system_.label() << " dim " << dim_ << "\n";
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i + 1; j < dim_; ++j) {
      const auto terms = bracket_basis(i, j);
      if (terms.empty()) continue;
      os << "[" << basis_label(i) << "," << basis_label(j) << "] =";
      for (const Term& t : terms) os << " " << (t.coeff >= 0 ? "+" : "") << t.coeff << "*" << basis_label(t.index);
      os << "\n";
    }
  }
  return os.str();
}

AdElement zero_element(const ChevalleyAlgebra& g, std::optional<i64> modulus) {
  return AdElement{Vec(g.dim(), 0), modulus};
}

AdElement basis_element(const ChevalleyAlgebra& g, std::size_t b, std::optional<i64> modulus) {
  AdElement e = zero_element(g, modulus);
  e.coords.at(b) = 1;
  return e;
}

AdElement reduce(AdElement a, i64 modulus) {
  for (i64& x : a.coords) x = mod_reduce(x, modulus);
  a.modulus = modulus;
  return a;
}

namespace {

void require_compatible(const ChevalleyAlgebra& g, const AdElement& a, const AdElement& b) {
  if (a.coords.size() != g.dim() || b.coords.size() != g.dim())
    throw std::invalid_argument("element does not belong to this algebra");
  if (a.modulus != b.modulus) throw std::invalid_argument("modulus mismatch in bracket");
}

}  // namespace

AdElement bracket(const ChevalleyAlgebra& g, const AdElement& a, const AdElement& b) {
  require_compatible(g, a, b);
  AdElement out = zero_element(g, a.modulus);
  for (std::size_t i = 0; i < g.dim(); ++i) {
    if (a.coords[i] == 0) continue;
    for (std::size_t j = 0; j < g.dim(); ++j) {
      if (b.coords[j] == 0) continue;
      for (const Term& t : g.bracket_basis(i, j)) {
        if (a.modulus) {
          const i64 m = *a.modulus;
          out.coords[t.index] = mod_reduce(out.coords[t.index] + mul_mod(mul_mod(a.coords[i], b.coords[j], m), t.coeff, m), m);
        } else {
          out.coords[t.index] =
              checked_add(out.coords[t.index], checked_mul(checked_mul(a.coords[i], b.coords[j]), t.coeff));
        }
      }
    }
  }
  return out;
}

IntMatrix ad_matrix(const ChevalleyAlgebra& g, const AdElement& a) {
  if (a.coords.size() != g.dim()) throw std::invalid_argument("element does not belong to this algebra");
  IntMatrix m(g.dim(), g.dim());
  for (std::size_t i = 0; i < g.dim(); ++i) {
    if (a.coords[i] == 0) continue;
    for (std::size_t j = 0; j < g.dim(); ++j)
      for (const Term& t : g.bracket_basis(i, j)) m(t.index, j) = checked_add(m(t.index, j), checked_mul(a.coords[i], t.coeff));
  }
  return a.modulus ? reduce_mod(std::move(m), *a.modulus) : m;
}

namespace {

// Column-sparse form of a square matrix.
struct SparseColumns {
  std::vector<std::vector<std::pair<std::size_t, i64>>> cols;
};

SparseColumns to_sparse(const IntMatrix& m) {
  SparseColumns s;
  s.cols.resize(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (m(r, c) != 0) s.cols[c].emplace_back(r, m(r, c));
  return s;
}

}  // namespace

std::optional<int> nilpotency_index(const ChevalleyAlgebra& g, const AdElement& a) {
  const IntMatrix ad = ad_matrix(g, AdElement{a.coords, std::nullopt});
  const SparseColumns sp = to_sparse(ad);
  const std::size_t n = g.dim();
  int index = 1;
  for (std::size_t j = 0; j < n; ++j) {
    // Iterate ad(a) on e_j with exact big-integer coordinates.
    std::vector<mpz_class> v(n, 0);
    v[j] = 1;
    int steps = 0;
    for (;;) {
      bool nonzero = false;
      for (const auto& x : v)
        if (x != 0) nonzero = true;
      if (!nonzero) break;
      if (steps > static_cast<int>(n) + 1) return std::nullopt;
      std::vector<mpz_class> w(n, 0);
      for (std::size_t c = 0; c < n; ++c) {
        if (v[c] == 0) continue;
        for (const auto& [row, val] : sp.cols[c]) w[row] += v[c] * static_cast<long>(val);
      }
      v = std::move(w);
      ++steps;
    }
    index = std::max(index, steps);
  }
  return index;
}

IntMatrix exp_nilpotent_ad(const ChevalleyAlgebra& g, const AdElement& a, i64 ell, unsigned n) {
  if (!is_prime(ell)) throw std::invalid_argument("exp_nilpotent_ad: ell must be prime");
  const auto index = nilpotency_index(g, a);
  if (!index) throw std::invalid_argument("exp_nilpotent_ad: ad(a) is not nilpotent");
  if (ell <= *index)
    throw PrimeTooSmall("exp_nilpotent_ad: ell = " + std::to_string(ell) + " does not exceed nilpotency index " +
                        std::to_string(*index));
  const i64 m = checked_pow(ell, n);
  const SparseColumns ad = to_sparse(ad_matrix(g, AdElement{a.coords, std::nullopt}));
  const std::size_t dim = g.dim();
  IntMatrix result = IntMatrix::identity(dim);
  IntMatrix term = IntMatrix::identity(dim);
  for (int k = 1; k < *index; ++k) {
    // term <- term * ad(a) / k
    const i64 inv_k = *inverse_mod(k, m);
    IntMatrix next(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
      const auto trow = term.row(r);
      auto nrow = next.row(r);
      for (std::size_t c = 0; c < dim; ++c) {
        __int128 acc = 0;
        for (const auto& [k2, val] : ad.cols[c]) acc += static_cast<__int128>(trow[k2]) * mod_reduce(val, m);
        nrow[c] = mul_mod(static_cast<i64>(acc % m), inv_k, m);
      }
    }
    term = std::move(next);
    result = add_mod(result, term, m);
  }
  return reduce_mod(std::move(result), m);
}

namespace {

// True iff M[e_i, e_j] == [M e_i, M e_j] mod m for every i in `firsts`
// and every j != i.
bool bracket_preserved_on(const ChevalleyAlgebra& g, const IntMatrix& m, i64 modulus,
                          const std::vector<std::size_t>& firsts) {
  const std::size_t n = g.dim();
  std::vector<Vec> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    col[j] = m.column(j);
    for (i64& x : col[j]) x = mod_reduce(x, modulus);
  }
  std::vector<std::vector<std::size_t>> support(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (col[j][k] != 0) support[j].push_back(k);

  std::vector<__int128> acc(n);
  for (std::size_t i : firsts) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      std::fill(acc.begin(), acc.end(), 0);
      // [M e_i, M e_j]
      for (std::size_t a : support[i]) {
        const i64 ca = col[i][a];
        for (std::size_t b : support[j]) {
          const i64 cab = mul_mod(ca, col[j][b], modulus);
          for (const Term& t : g.bracket_basis(a, b)) acc[t.index] += static_cast<__int128>(cab) * t.coeff;
        }
      }
      // minus M [e_i, e_j]
      for (const Term& t : g.bracket_basis(i, j))
        for (std::size_t r : support[t.index]) acc[r] -= static_cast<__int128>(col[t.index][r]) * t.coeff;
      for (std::size_t r = 0; r < n; ++r)
        if (acc[r] % modulus != 0) return false;
    }
  }
  return true;
}

}  // namespace

bool preserves_bracket(const ChevalleyAlgebra& g, const IntMatrix& m, i64 modulus) {
  std::vector<std::size_t> all(g.dim());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return bracket_preserved_on(g, m, modulus, all);
}

bool preserves_bracket_on_generators(const ChevalleyAlgebra& g, const IntMatrix& m, i64 modulus) {
  const RootSystem& sys = g.system();
  std::vector<std::size_t> gens;
  for (const Root& s : sys.simple_roots()) {
    const std::size_t a = *sys.index_of(s);
    gens.push_back(g.root_basis(a));
    gens.push_back(g.root_basis(sys.negative_index(a)));
  }
  return bracket_preserved_on(g, m, modulus, gens);
}

JacobiReport verify_jacobi(const ChevalleyAlgebra& g) {
  const std::size_t n = g.dim();
  JacobiReport report;
  std::vector<i64> acc(n, 0);
  std::vector<std::uint32_t> touched;
  auto add_double = [&](std::size_t x, std::size_t y, std::size_t z) {
    // accumulate [e_x, [e_y, e_z]]
    for (const Term& inner : g.bracket_basis(y, z)) {
      for (const Term& outer : g.bracket_basis(x, inner.index)) {
        if (acc[outer.index] == 0) touched.push_back(outer.index);
        acc[outer.index] += inner.coeff * outer.coeff;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        add_double(i, j, k);
        add_double(j, k, i);
        add_double(k, i, j);
        bool bad = false;
        for (std::uint32_t t : touched) {
          if (acc[t] != 0) bad = true;
          acc[t] = 0;
        }
        touched.clear();
        ++report.triples_checked;
        if (bad) {
          if (!report.first_failure) report.first_failure = std::array<std::size_t, 3>{i, j, k};
          ++report.failures;
        }
      }
    }
  }
  return report;
}

}  // namespace exmono
