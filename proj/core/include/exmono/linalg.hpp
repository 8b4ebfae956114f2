#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "exmono/modular.hpp"

namespace exmono {

using Vec = std::vector<i64>;

/// Dense row-major integer matrix. Entries are plain integers; modular
/// routines below interpret them as residues.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  i64& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  i64 operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<i64> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const i64> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  Vec column(std::size_t c) const;

  const std::vector<i64>& data() const noexcept { return data_; }

  bool is_zero() const;
  bool is_identity() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<i64> data_;
};

// Exact integer arithmetic (overflow-checked).
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
IntMatrix subtract(const IntMatrix& a, const IntMatrix& b);

// Arithmetic over Z/m.
IntMatrix reduce_mod(IntMatrix a, i64 m);
IntMatrix add_mod(const IntMatrix& a, const IntMatrix& b, i64 m);
IntMatrix scale_mod(const IntMatrix& a, i64 s, i64 m);
IntMatrix multiply_mod(const IntMatrix& a, const IntMatrix& b, i64 m);
IntMatrix power_mod(const IntMatrix& a, u64 exp, i64 m);
Vec apply_mod(const IntMatrix& a, std::span<const i64> v, i64 m);

// Linear algebra over the prime field F_p. Vectors are coordinate lists.
struct Echelon {
  IntMatrix reduced;                 // reduced row echelon form
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
  std::size_t rank() const noexcept { return pivots.size(); }
};

Echelon row_reduce_mod_p(IntMatrix a, i64 p);
std::size_t rank_mod_p(const IntMatrix& a, i64 p);
/// Basis of {x : a x = 0} over F_p.
std::vector<Vec> nullspace_mod_p(const IntMatrix& a, i64 p);
/// Matrix whose rows are the given vectors (all of length n).
IntMatrix from_rows(const std::vector<Vec>& rows, std::size_t n);
/// Matrix whose columns are the given vectors.
IntMatrix from_columns(const std::vector<Vec>& cols, std::size_t n);

// Exact linear algebra over Q, for the small weight-space problems.
using BigVec = std::vector<mpz_class>;
/// Basis of the rational kernel of a (rows x cols), scaled to primitive
/// integer vectors.
std::vector<BigVec> nullspace_rational(const std::vector<BigVec>& rows, std::size_t cols);

}  // namespace exmono
