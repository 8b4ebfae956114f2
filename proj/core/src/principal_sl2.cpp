#include "exmono/principal_sl2.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>

namespace exmono {

namespace {

// Solves C^T r = 2 * (1, ..., 1) exactly.
Vec solve_rho_check(const IntMatrix& cartan) {
  const std::size_t n = cartan.rows();
  std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = static_cast<long>(cartan(j, i));
    a[i][n] = 2;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw std::logic_error("singular Cartan matrix");
    std::swap(a[pivot], a[col]);
    const mpq_class inv = 1 / a[col][col];
    for (auto& x : a[col]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const mpq_class f = a[r][col];
      for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  Vec r(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i][n].get_den() != 1 || a[i][n] <= 0) throw std::logic_error("2 rho^vee is not a positive integral combination");
    r[i] = a[i][n].get_num().get_si();
  }
  return r;
}

using SparseCols = std::vector<std::vector<std::pair<std::size_t, i64>>>;

SparseCols sparse_columns(const IntMatrix& m) {
  SparseCols cols(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (m(r, c) != 0) cols[c].emplace_back(r, m(r, c));
  return cols;
}

BigVec apply(const SparseCols& m, const BigVec& v, std::optional<i64> modulus) {
  BigVec out(v.size(), 0);
  for (std::size_t c = 0; c < v.size(); ++c) {
    if (v[c] == 0) continue;
    for (const auto& [r, x] : m[c]) out[r] += v[c] * static_cast<long>(x);
  }
  if (modulus)
    for (auto& x : out) x = mpz_class(x % *modulus + *modulus) % *modulus;
  return out;
}

bool is_zero(const BigVec& v) {
  return std::all_of(v.begin(), v.end(), [](const mpz_class& x) { return x == 0; });
}

}  // namespace

PrincipalTriple build_principal_triple(const ChevalleyAlgebra& g) {
  const RootSystem& sys = g.system();
  PrincipalTriple t{zero_element(g), zero_element(g), zero_element(g), solve_rho_check(sys.cartan_matrix())};
  const auto simple = sys.simple_roots();
  for (std::size_t i = 0; i < sys.rank(); ++i) {
    const std::size_t a = *sys.index_of(simple[i]);
    t.X.coords[g.root_basis(a)] = 1;
    t.H.coords[g.cartan_basis(i)] = t.r[i];
    t.Y.coords[g.root_basis(sys.negative_index(a))] = t.r[i];
  }
  return t;
}

std::vector<int> StringDecomposition::exponents() const {
  std::vector<int> out;
  for (const auto& s : strings) out.push_back(s.exponent);
  return out;
}

std::vector<std::size_t> StringDecomposition::lengths() const {
  std::vector<std::size_t> out;
  for (const auto& s : strings) out.push_back(s.length);
  return out;
}

std::size_t StringDecomposition::total_dimension() const {
  std::size_t n = 0;
  for (const auto& s : strings) n += s.length;
  return n;
}

StringDecomposition decompose_adjoint(const ChevalleyAlgebra& g, const PrincipalTriple& triple,
                                      std::optional<i64> ell, StringEnd end) {
  const i64 h = g.system().coxeter_number();
  if (ell) {
    if (!is_prime(*ell)) throw std::invalid_argument("decompose_adjoint: modulus must be prime");
    if (*ell < 2 * h - 1)
      throw ModularDegeneration("decompose_adjoint: ell = " + std::to_string(*ell) + " is below 2h - 1 = " +
                                std::to_string(2 * h - 1));
  }
  // The end of each string is the kernel of the lowering (raising)
  // operator; the other operator walks the string.
  const bool lowest = end == StringEnd::Lowest;
  const IntMatrix kill = ad_matrix(g, lowest ? triple.Y : triple.X);
  const SparseCols walk = sparse_columns(ad_matrix(g, lowest ? triple.X : triple.Y));

  std::map<i64, std::vector<std::size_t>> by_weight;
  for (std::size_t b = 0; b < g.dim(); ++b) by_weight[2 * g.grade(b)].push_back(b);

  StringDecomposition out;
  out.modulus = ell;
  out.end = end;
  const i64 shift = lowest ? -2 : 2;
  for (const auto& [w, cols] : by_weight) {
    const auto target_it = by_weight.find(w + shift);
    std::vector<BigVec> kernel;
    if (target_it == by_weight.end()) {
      for (std::size_t k = 0; k < cols.size(); ++k) {
        BigVec v(cols.size(), 0);
        v[k] = 1;
        kernel.push_back(std::move(v));
      }
    } else {
      const auto& rows = target_it->second;
      if (ell) {
        IntMatrix sub(rows.size(), cols.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
          for (std::size_t j = 0; j < cols.size(); ++j) sub(i, j) = kill(rows[i], cols[j]);
        for (const Vec& v : nullspace_mod_p(sub, *ell)) kernel.emplace_back(v.begin(), v.end());
      } else {
        std::vector<BigVec> sub(rows.size(), BigVec(cols.size()));
        for (std::size_t i = 0; i < rows.size(); ++i)
          for (std::size_t j = 0; j < cols.size(); ++j) sub[i][j] = static_cast<long>(kill(rows[i], cols[j]));
        kernel = nullspace_rational(sub, cols.size());
      }
    }
    for (const BigVec& local : kernel) {
      BigVec v(g.dim(), 0);
      for (std::size_t j = 0; j < cols.size(); ++j) v[cols[j]] = local[j];
      const i64 m = lowest ? -w / 2 : w / 2;
      if (m < 0) throw std::logic_error("string end vector has the wrong sign of weight");
      SlString s;
      s.exponent = static_cast<int>(m);
      s.twist = -s.exponent;
      s.end_vector = v;
      for (BigVec cur = v; !is_zero(cur); cur = apply(walk, cur, ell)) {
        ++s.length;
        if (s.length > g.dim()) throw std::logic_error("string does not terminate");
      }
      if (s.length != static_cast<std::size_t>(2 * m + 1))
        throw std::logic_error("string length disagrees with its end weight");
      out.strings.push_back(std::move(s));
    }
  }
  std::stable_sort(out.strings.begin(), out.strings.end(),
                   [](const SlString& a, const SlString& b) { return a.exponent < b.exponent; });
  if (out.total_dimension() != g.dim()) throw std::logic_error("strings do not exhaust the algebra");
  return out;
}

namespace {

// Stability of the exponent multiset under multiplication by ell^(f-1)
// modulo q - 1.
bool multiset_moved(const std::vector<i64>& exps, i64 ell, unsigned f) {
  const i64 order = checked_pow(ell, f) - 1;
  const i64 frob = checked_pow(ell, f - 1);
  std::multiset<i64> before, after;
  for (i64 e : exps) {
    before.insert(mod_reduce(e, order));
    after.insert(mul_mod(e, frob, order));
  }
  return before != after;
}

}  // namespace

bool sym_minimal_field_check(i64 r, i64 ell, unsigned f) {
  if (!is_prime(ell)) throw std::invalid_argument("sym_minimal_field_check: ell must be prime");
  if (f == 0) throw std::invalid_argument("sym_minimal_field_check: f must be positive");
  if (r < 0) throw std::invalid_argument("sym_minimal_field_check: r must be non-negative");
  if (f == 1) return true;
  std::vector<i64> exps;
  for (i64 e = r; e >= -r; e -= 2) exps.push_back(e);
  return multiset_moved(exps, ell, f);
}

bool adjoint_eigenvalue_field_check(const RootSystem& system, i64 ell, unsigned f) {
  if (!is_prime(ell)) throw std::invalid_argument("adjoint_eigenvalue_field_check: ell must be prime");
  if (f == 0) throw std::invalid_argument("adjoint_eigenvalue_field_check: f must be positive");
  if (f == 1) return true;
  const auto& roots = system.roots();
  for (std::size_t a = 0; a < system.num_positive(); ++a) {
    std::vector<i64> exps(system.rank(), 0);
    for (const Root& b : roots) exps.push_back(system.pairing(b, roots[a]));
    if (multiset_moved(exps, ell, f)) return true;
  }
  return false;
}

}  // namespace exmono
