#include "exmono/linalg.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace exmono {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Vec IntMatrix::column(std::size_t c) const {
  Vec out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

bool IntMatrix::is_zero() const {
  for (i64 x : data_)
    if (x != 0) return false;
  return true;
}

bool IntMatrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if ((*this)(r, c) != (r == c ? 1 : 0)) return false;
  return true;
}

namespace {

void require_product_shape(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
}

void require_same_shape(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix shape mismatch");
}

}  // namespace

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  require_product_shape(a, b);
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const i64 aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (b(k, j) == 0) continue;
        out(i, j) = checked_add(out(i, j), checked_mul(aik, b(k, j)));
      }
    }
  }
  return out;
}

IntMatrix subtract(const IntMatrix& a, const IntMatrix& b) {
  require_same_shape(a, b);
  IntMatrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = checked_add(a(r, c), -b(r, c));
  return out;
}

IntMatrix reduce_mod(IntMatrix a, i64 m) {
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (i64& x : a.row(r)) x = mod_reduce(x, m);
  return a;
}

IntMatrix add_mod(const IntMatrix& a, const IntMatrix& b, i64 m) {
  require_same_shape(a, b);
  IntMatrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = mod_reduce(a(r, c) % m + b(r, c) % m, m);
  return out;
}

IntMatrix scale_mod(const IntMatrix& a, i64 s, i64 m) {
  IntMatrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = mul_mod(a(r, c), s, m);
  return out;
}

IntMatrix multiply_mod(const IntMatrix& a, const IntMatrix& b, i64 m) {
  require_product_shape(a, b);
  const IntMatrix ar = reduce_mod(a, m);
  const IntMatrix br = reduce_mod(b, m);
  IntMatrix out(a.rows(), b.cols());
  // Accumulate unreduced when inner_dim * (m-1)^2 fits in 63 bits.
  const __int128 bound = static_cast<__int128>(a.cols()) * (m - 1) * (m - 1);
  const bool deferred = bound < static_cast<__int128>(std::numeric_limits<i64>::max());
  for (std::size_t i = 0; i < ar.rows(); ++i) {
    auto orow = out.row(i);
    for (std::size_t k = 0; k < ar.cols(); ++k) {
      const i64 aik = ar(i, k);
      if (aik == 0) continue;
      auto brow = br.row(k);
      if (deferred) {
        for (std::size_t j = 0; j < orow.size(); ++j) orow[j] += aik * brow[j];
      } else {
        for (std::size_t j = 0; j < orow.size(); ++j) orow[j] = (orow[j] + mul_mod(aik, brow[j], m)) % m;
      }
    }
    if (deferred)
      for (i64& x : orow) x %= m;
  }
  return out;
}

IntMatrix power_mod(const IntMatrix& a, u64 exp, i64 m) {
  if (a.rows() != a.cols()) throw std::invalid_argument("power_mod: matrix not square");
  IntMatrix result = reduce_mod(IntMatrix::identity(a.rows()), m);
  IntMatrix base = reduce_mod(a, m);
  while (exp > 0) {
    if (exp & 1U) result = multiply_mod(result, base, m);
    exp >>= 1U;
    if (exp > 0) base = multiply_mod(base, base, m);
  }
  return result;
}

Vec apply_mod(const IntMatrix& a, std::span<const i64> v, i64 m) {
  if (a.cols() != v.size()) throw std::invalid_argument("apply_mod: shape mismatch");
  Vec out(a.rows(), 0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    __int128 acc = 0;
    for (std::size_t c = 0; c < a.cols(); ++c) acc += static_cast<__int128>(a(r, c)) * v[c];
    i64 x = static_cast<i64>(acc % m);
    out[r] = x < 0 ? x + m : x;
  }
  return out;
}

Echelon row_reduce_mod_p(IntMatrix a, i64 p) {
  a = reduce_mod(std::move(a), p);
  Echelon e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < a.rows() && a(pivot, col) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != row)
      for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(pivot, c), a(row, c));
    const i64 inv = *inverse_mod(a(row, col), p);
    for (i64& x : a.row(row)) x = mul_mod(x, inv, p);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col) == 0) continue;
      const i64 f = a(r, col);
      for (std::size_t c = col; c < a.cols(); ++c) a(r, c) = mod_reduce(a(r, c) - f * a(row, c), p);
    }
    e.pivots.push_back(col);
    ++row;
  }
  e.reduced = std::move(a);
  return e;
}

std::size_t rank_mod_p(const IntMatrix& a, i64 p) { return row_reduce_mod_p(a, p).rank(); }

std::vector<Vec> nullspace_mod_p(const IntMatrix& a, i64 p) {
  const Echelon e = row_reduce_mod_p(a, p);
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t c : e.pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec v(a.cols(), 0);
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = mod_reduce(-e.reduced(r, free), p);
    basis.push_back(std::move(v));
  }
  return basis;
}

IntMatrix from_rows(const std::vector<Vec>& rows, std::size_t n) {
  IntMatrix m(rows.size(), n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != n) throw std::invalid_argument("from_rows: length mismatch");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

IntMatrix from_columns(const std::vector<Vec>& cols, std::size_t n) {
  IntMatrix m(n, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != n) throw std::invalid_argument("from_columns: length mismatch");
    for (std::size_t r = 0; r < n; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

std::vector<BigVec> nullspace_rational(const std::vector<BigVec>& rows, std::size_t cols) {
  std::vector<std::vector<mpq_class>> a;
  a.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.size() != cols) throw std::invalid_argument("nullspace_rational: length mismatch");
    a.emplace_back(r.begin(), r.end());
  }
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t pivot = row;
    while (pivot < a.size() && a[pivot][col] == 0) ++pivot;
    if (pivot == a.size()) continue;
    std::swap(a[pivot], a[row]);
    const mpq_class inv = 1 / a[row][col];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][col] == 0) continue;
      const mpq_class f = a[r][col];
      for (std::size_t c = col; c < cols; ++c) a[r][c] -= f * a[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::vector<BigVec> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<mpq_class> v(cols, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][free];
    mpz_class denom_lcm = 1;
    for (const auto& x : v) mpz_lcm(denom_lcm.get_mpz_t(), denom_lcm.get_mpz_t(), x.get_den_mpz_t());
    BigVec out(cols);
    mpz_class content = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      mpq_class scaled = v[c] * denom_lcm;
      out[c] = scaled.get_num();
      mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), out[c].get_mpz_t());
    }
    if (content > 1)
      for (auto& x : out) x /= content;
    basis.push_back(std::move(out));
  }
  return basis;
}

}  // namespace exmono
