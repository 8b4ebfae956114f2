#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "exmono/root_data.hpp"
#include "unit/oracles.hpp"

using namespace exmono;

namespace {

// Gram matrix of the simple roots in Bourbaki numbering, written down from
// the Dynkin diagram with the shortest roots of squared length 2.
struct Diagram {
  std::vector<i64> norms;
  std::vector<std::tuple<int, int, i64>> edges;  // (i, j, (a_i, a_j)), 1-based
};

Diagram diagram(CartanType t) {
  switch (t) {
    case CartanType::A1: return {{2}, {}};
    case CartanType::A2: return {{2, 2}, {{1, 2, -1}}};
    case CartanType::G2: return {{2, 6}, {{1, 2, -3}}};
    case CartanType::F4: return {{4, 4, 2, 2}, {{1, 2, -2}, {2, 3, -2}, {3, 4, -1}}};
    case CartanType::E6: return {{2, 2, 2, 2, 2, 2}, {{1, 3, -1}, {3, 4, -1}, {4, 5, -1}, {5, 6, -1}, {2, 4, -1}}};
    case CartanType::E7:
      return {std::vector<i64>(7, 2), {{1, 3, -1}, {3, 4, -1}, {4, 5, -1}, {5, 6, -1}, {6, 7, -1}, {2, 4, -1}}};
    case CartanType::E8:
      return {std::vector<i64>(8, 2),
              {{1, 3, -1}, {3, 4, -1}, {4, 5, -1}, {5, 6, -1}, {6, 7, -1}, {7, 8, -1}, {2, 4, -1}}};
  }
  return {};
}

std::vector<std::vector<i64>> gram(CartanType t) {
  const Diagram d = diagram(t);
  const std::size_t r = d.norms.size();
  std::vector<std::vector<i64>> g(r, std::vector<i64>(r, 0));
  for (std::size_t i = 0; i < r; ++i) g[i][i] = d.norms[i];
  for (auto [i, j, v] : d.edges) g[i - 1][j - 1] = g[j - 1][i - 1] = v;
  return g;
}

// Positive roots = nonzero non-negative lattice vectors whose squared length
// is a root length (true for every reduced irreducible root lattice).
std::set<Root> enumerate_positive_roots(CartanType t, i64 bound) {
  const auto g = gram(t);
  const std::size_t r = g.size();
  const std::vector<i64> norms = diagram(t).norms;
  const std::set<i64> lengths(norms.begin(), norms.end());
  std::set<Root> out;
  Root v(r, 0);
  for (;;) {
    std::size_t i = 0;
    while (i < r && ++v[i] > bound) v[i++] = 0;
    if (i == r) break;
    i64 n = 0;
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) n += v[a] * g[a][b] * v[b];
    if (lengths.count(n)) out.insert(v);
  }
  return out;
}

i64 det(std::vector<std::vector<i64>> m) {
  // Fraction-free elimination on a small integer matrix.
  const std::size_t n = m.size();
  i64 prev = 1, sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t s = k + 1;
      while (s < n && m[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(m[s], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

const std::vector<CartanType> kAll{CartanType::A1, CartanType::A2, CartanType::G2, CartanType::F4,
                                   CartanType::E6, CartanType::E7, CartanType::E8};
const std::vector<CartanType> kExceptional{CartanType::G2, CartanType::F4, CartanType::E6, CartanType::E7,
                                           CartanType::E8};

}  // namespace

TEST(RootData, CartanMatrixMatchesDiagram) {
  for (CartanType t : kAll) {
    const RootSystem s = build_root_system(t);
    const auto g = gram(t);
    for (std::size_t i = 0; i < s.rank(); ++i)
      for (std::size_t j = 0; j < s.rank(); ++j)
        EXPECT_EQ(s.cartan_matrix()(i, j), 2 * g[i][j] / g[i][i]) << s.label() << " " << i << "," << j;
  }
}

TEST(RootData, PositiveRootsMatchLatticeEnumeration) {
  for (CartanType t : kAll) {
    const RootSystem s = build_root_system(t);
    const auto want = enumerate_positive_roots(t, 6);
    const auto got = s.positive_roots();
    EXPECT_EQ(std::set<Root>(got.begin(), got.end()), want) << s.label();
  }
}

TEST(RootData, CountsCoxeterNumbersAndCentres) {
  struct Row {
    CartanType t;
    std::size_t roots;
    int h;
    i64 z;
    bool minus_one;
  };
  const std::vector<Row> table{{CartanType::A1, 2, 2, 2, true},    {CartanType::A2, 6, 3, 3, false},
                               {CartanType::G2, 12, 6, 1, true},   {CartanType::F4, 48, 12, 1, true},
                               {CartanType::E6, 72, 12, 3, false}, {CartanType::E7, 126, 18, 2, true},
                               {CartanType::E8, 240, 30, 1, true}};
  for (const Row& r : table) {
    const RootSystem s = build_root_system(r.t);
    EXPECT_EQ(s.roots().size(), r.roots) << s.label();
    EXPECT_EQ(s.coxeter_number(), r.h) << s.label();
    EXPECT_EQ(s.center_order(), r.z) << s.label();
    std::vector<std::vector<i64>> c(s.rank(), std::vector<i64>(s.rank()));
    for (std::size_t i = 0; i < s.rank(); ++i)
      for (std::size_t j = 0; j < s.rank(); ++j) c[i][j] = s.cartan_matrix()(i, j);
    EXPECT_EQ(det(c), r.z) << s.label();
    EXPECT_EQ(s.minus_one_in_weyl(), r.minus_one) << s.label();
  }
  EXPECT_EQ(build_root_system(CartanType::A1).highest_root(), Root{1});
}

TEST(RootData, ReflectionClosureAndNegation) {
  for (CartanType t : kAll) {
    const RootSystem s = build_root_system(t);
    for (const Root& r : s.roots()) {
      Root neg = r;
      for (i64& x : neg) x = -x;
      EXPECT_TRUE(s.is_root(neg));
      for (std::size_t i = 0; i < s.rank(); ++i) EXPECT_TRUE(s.is_root(s.reflect(r, i)));
    }
  }
}

TEST(RootData, HighestRootIsMaximal) {
  for (CartanType t : kAll) {
    const RootSystem s = build_root_system(t);
    const Root& theta = s.highest_root();
    EXPECT_EQ(s.height(theta), s.coxeter_number() - 1) << s.label();
    for (const Root& r : s.positive_roots()) {
      if (r != theta) {
        EXPECT_LT(s.height(r), s.height(theta));
      }
    }
    for (const Root& a : s.simple_roots()) {
      Root sum = theta;
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += a[i];
      EXPECT_FALSE(s.is_root(sum));
    }
  }
}

TEST(RootData, OrderingIsByHeightThenNegatives) {
  const RootSystem s = build_root_system(CartanType::F4);
  const auto& roots = s.roots();
  for (std::size_t i = 1; i < s.num_positive(); ++i) EXPECT_LE(s.height(roots[i - 1]), s.height(roots[i]));
  for (std::size_t i = 0; i < s.num_positive(); ++i) EXPECT_EQ(s.negative_index(i), i + s.num_positive());
}

TEST(RootData, RejectsUnknownLabels) {
  EXPECT_FALSE(parse_cartan_type("H4"));
  EXPECT_FALSE(parse_cartan_type("e8"));
  EXPECT_EQ(parse_cartan_type("E8"), CartanType::E8);
}

TEST(Admissibility, FloorsAndSmallestAdmissible) {
  const std::map<CartanType, std::pair<i64, i64>> want{{CartanType::G2, {29, 29}},
                                                        {CartanType::F4, {53, 53}},
                                                        {CartanType::E6, {53, 71}},
                                                        {CartanType::E7, {73, 73}},
                                                        {CartanType::E8, {127, 127}}};
  for (CartanType t : kExceptional) {
    const RootSystem s = build_root_system(t);
    const i64 bound = 4 * s.coxeter_number() - 1;
    i64 floor = bound + 1;
    while (!oracle::is_prime(floor)) ++floor;
    EXPECT_EQ(admissible_prime_floor(s), floor);
    EXPECT_EQ(admissible_prime_floor(s), want.at(t).first);
    EXPECT_EQ(smallest_admissible_prime(s), want.at(t).second);
  }
}

TEST(Admissibility, CentreHypothesisBound) {
  EXPECT_EQ(center_hypothesis_bound(build_root_system(CartanType::E6)), 66);
  EXPECT_EQ(center_hypothesis_bound(build_root_system(CartanType::E7)), 34);
  EXPECT_EQ(center_hypothesis_bound(build_root_system(CartanType::G2)), 10);
  EXPECT_EQ(center_hypothesis_bound(build_root_system(CartanType::E8)), 58);
}

TEST(Admissibility, ExclusionsAndBoundary) {
  const RootSystem e8 = build_root_system(CartanType::E8);
  for (i64 l : {229, 269, 367}) {
    EXPECT_FALSE(is_admissible(e8, l));
    EXPECT_TRUE(check_admissibility(e8, l).excluded);
  }
  EXPECT_TRUE(is_admissible(e8, 131));
  EXPECT_FALSE(is_admissible(build_root_system(CartanType::G2), 23));
  const AdmissibilityReport e7 = check_admissibility(build_root_system(CartanType::E7), 71);
  EXPECT_FALSE(e7.above_coxeter_bound);
  EXPECT_FALSE(e7.admissible());
  EXPECT_FALSE(is_admissible(build_root_system(CartanType::G2), 30));
}
