#include <gtest/gtest.h>

#include "exmono/adjoint_modl.hpp"
#include "exmono/principal_sl2.hpp"
#include "unit/oracles.hpp"

using namespace exmono;

namespace {

const ChevalleyAlgebra& g2() {
  static const ChevalleyAlgebra g(build_root_system(CartanType::G2));
  return g;
}

}  // namespace

TEST(AdjointGroup, TorusElements) {
  const ChevalleyAlgebra& g = g2();
  const Vec rho2 = build_principal_triple(g).r;
  EXPECT_TRUE(torus_element(g, rho2, 1, 29).matrix.is_identity());
  for (i64 t : {2, 3, 17}) {
    const IntMatrix m = torus_element(g, rho2, t, 29).matrix;
    const std::size_t theta = g.highest_root_basis();
    EXPECT_EQ(m(theta, theta), pow_mod(t, 2 * 6 - 2, 29));
    for (const Root& a : g.system().simple_roots()) {
      const std::size_t b = g.root_basis(*g.system().index_of(a));
      EXPECT_EQ(m(b, b), t * t % 29);
    }
    for (i64 s : {5, 11}) {
      EXPECT_EQ(compose(torus_element(g, rho2, t, 29, 2), torus_element(g, rho2, s, 29, 2)).matrix,
                torus_element(g, rho2, t * s, 29, 2).matrix);
    }
  }
  EXPECT_THROW(torus_element(g, rho2, 29, 29), std::invalid_argument);
}

TEST(AdjointGroup, ConstructorsPreserveBracket) {
  for (CartanType t : {CartanType::G2, CartanType::F4}) {
    const ChevalleyAlgebra g(build_root_system(t));
    const i64 ell = smallest_admissible_prime(g.system());
    auto rng = oracle::rng(10);
    for (int trial = 0; trial < 5; ++trial) {
      AdElement a = zero_element(g);
      for (std::size_t i = 0; i < g.system().num_positive(); ++i)
        a.coords[g.root_basis(i)] = static_cast<i64>(rng() % static_cast<u64>(ell));
      AdElement minus = a;
      for (i64& c : minus.coords) c = -c;
      const GroupElementModLn u = unipotent_element(g, a, ell, 2);
      EXPECT_TRUE(preserves_bracket(g, u.matrix, u.modulus()));
      EXPECT_TRUE(is_invertible(u));
      EXPECT_TRUE(compose(u, unipotent_element(g, minus, ell, 2)).matrix.is_identity());
      Vec cochar(g.rank());
      for (i64& c : cochar) c = static_cast<i64>(rng() % 5) - 2;
      const GroupElementModLn tor = torus_element(g, cochar, 2 + static_cast<i64>(rng() % 20), ell, 2);
      EXPECT_TRUE(preserves_bracket(g, tor.matrix, tor.modulus()));
    }
  }
}

TEST(AdjointGroup, ElementOrders) {
  const ChevalleyAlgebra& g = g2();
  EXPECT_EQ(element_order(identity_element(g, 29), 10), 1u);
  const GroupElementModLn e = unipotent_element(g, basis_element(g, g.highest_root_basis()), 29);
  EXPECT_EQ(element_order(e, 1000), 29u);
  EXPECT_FALSE(element_order(e, 28));
  const GroupElementModLn tor = torus_element(g, Vec{1, 0}, 2, 29);
  // Eigenvalues 2^k with |k| <= 3; 2 has order 28 mod 29.
  EXPECT_EQ(element_order(tor, 1000), 28u);
}

TEST(AdjointGroup, LiftsOfHighestRootExponentialHaveOrderEllSquared) {
  const ChevalleyAlgebra& g = g2();
  const AdElement x = basis_element(g, g.highest_root_basis());
  const IntMatrix base = exp_nilpotent_ad(g, x, 29, 1);
  for (std::size_t t = 0; t < 10; ++t) {
    const GroupElementModLn u = random_lift(g, x, 29, 1, 7, t);
    EXPECT_EQ(reduce_mod(u.matrix, 29), base);
    EXPECT_TRUE(preserves_bracket_on_generators(g, u.matrix, 29 * 29));
    EXPECT_EQ(element_order(u, 29 * 29 + 1), u64{29 * 29});
  }
}

TEST(NoSection, HighestRootCongruenceG2) {
  const NoSectionReport r = verify_no_section_expansion(g2(), 29, 1, 100, NoSectionVariant::HighestRoot, 0);
  EXPECT_TRUE(r.ok()) << r.witness;
  EXPECT_EQ(r.trials, 100u);
}

TEST(NoSection, PrincipalCongruenceG2) {
  const NoSectionReport r = verify_no_section_expansion(g2(), 29, 1, 100, NoSectionVariant::Principal, 0);
  EXPECT_TRUE(r.ok()) << r.witness;
}

TEST(NoSection, HigherLevelsF4) {
  const ChevalleyAlgebra g(build_root_system(CartanType::F4));
  EXPECT_TRUE(verify_no_section_expansion(g, 53, 2, 3, NoSectionVariant::HighestRoot, 1).ok());
}

TEST(NoSection, Preconditions) {
  EXPECT_THROW(verify_no_section_expansion(g2(), 5, 1, 1, NoSectionVariant::HighestRoot), PrimeTooSmall);
  EXPECT_THROW(verify_no_section_expansion(g2(), 19, 1, 1, NoSectionVariant::Principal), PrimeTooSmall);
  EXPECT_THROW(verify_no_section_expansion(g2(), 27, 1, 1, NoSectionVariant::Principal), std::invalid_argument);
}

TEST(Reg, ImageAndKernelDimensions) {
  const RegReport g = verify_reg_surjectivity(g2(), 29);
  EXPECT_TRUE(g.ok());
  EXPECT_EQ(g.image_dimension, 6u);
  EXPECT_EQ(g.kernel_dimension, 2u);
  EXPECT_TRUE(g.kernel_in_nilradical);
  const RegReport a1 = verify_reg_surjectivity(ChevalleyAlgebra(build_root_system(CartanType::A1)), 7);
  EXPECT_EQ(a1.image_dimension, 1u);
  EXPECT_EQ(a1.kernel_dimension, 1u);
  const RegReport e7 = verify_reg_surjectivity(ChevalleyAlgebra(build_root_system(CartanType::E7)), 71);
  EXPECT_EQ(e7.image_dimension, 63u);
  EXPECT_EQ(e7.kernel_dimension, 7u);
  EXPECT_TRUE(e7.ok());
}

TEST(Reg, KernelDimensionEqualsRankAtFloorPrimes) {
  for (CartanType t : {CartanType::G2, CartanType::F4, CartanType::E6}) {
    const ChevalleyAlgebra g(build_root_system(t));
    const RegReport r = verify_reg_surjectivity(g, smallest_admissible_prime(g.system()));
    EXPECT_EQ(r.kernel_dimension, g.rank());
    EXPECT_TRUE(r.ok());
  }
  EXPECT_THROW(verify_reg_surjectivity(g2(), 5), PrimeTooSmall);
}
