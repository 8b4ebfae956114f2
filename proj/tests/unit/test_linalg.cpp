#include <gtest/gtest.h>

#include "exmono/linalg.hpp"
#include "unit/oracles.hpp"

using namespace exmono;

namespace {

IntMatrix random_matrix(std::size_t r, std::size_t c, i64 p, std::mt19937_64& g) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = static_cast<i64>(g() % static_cast<u64>(p));
  return m;
}

std::vector<std::vector<i64>> rows_of(const IntMatrix& m) {
  std::vector<std::vector<i64>> out;
  for (std::size_t i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).begin(), m.row(i).end());
  return out;
}

}  // namespace

TEST(Linalg, RankMatchesOracleOnRandomMatrices) {
  auto g = oracle::rng(2);
  for (i64 p : {2, 3, 5, 29}) {
    for (int t = 0; t < 100; ++t) {
      const std::size_t r = 1 + g() % 7, c = 1 + g() % 7;
      const IntMatrix m = random_matrix(r, c, p, g);
      EXPECT_EQ(rank_mod_p(m, p), oracle::rank_mod_p(rows_of(m), p));
    }
  }
}

TEST(Linalg, NullspaceIsKernelOfFullDimension) {
  auto g = oracle::rng(3);
  for (i64 p : {2, 3, 7}) {
    for (int t = 0; t < 100; ++t) {
      const std::size_t r = 1 + g() % 6, c = 1 + g() % 8;
      const IntMatrix m = random_matrix(r, c, p, g);
      const auto ker = nullspace_mod_p(m, p);
      EXPECT_EQ(ker.size() + rank_mod_p(m, p), c);
      for (const Vec& v : ker) {
        const Vec image = apply_mod(m, v, p);
        for (i64 x : image) EXPECT_EQ(x, 0);
      }
      if (!ker.empty()) {
        EXPECT_EQ(rank_mod_p(from_rows(ker, c), p), ker.size());
      }
    }
  }
}

TEST(Linalg, PowerModMatchesRepeatedProduct) {
  auto g = oracle::rng(4);
  const i64 m = 29 * 29;
  const IntMatrix a = random_matrix(5, 5, m, g);
  IntMatrix want = IntMatrix::identity(5);
  for (int e = 0; e <= 40; ++e) {
    EXPECT_EQ(power_mod(a, static_cast<u64>(e), m), want) << e;
    want = multiply_mod(want, a, m);
  }
}

TEST(Linalg, ExactProductOverflowIsDetected) {
  IntMatrix a(1, 1);
  a(0, 0) = i64{1} << 40;
  EXPECT_THROW(multiply(a, a), OverflowError);
}

TEST(Linalg, RationalNullspace) {
  // x + y + z = 0 and x - y = 0
  const std::vector<BigVec> rows{{1, 1, 1}, {1, -1, 0}};
  const auto ker = nullspace_rational(rows, 3);
  ASSERT_EQ(ker.size(), 1u);
  EXPECT_EQ(ker[0][0], ker[0][1]);
  EXPECT_EQ(ker[0][2], -2 * ker[0][0]);
}
