#include "hkperiod/lattice.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hkp;

TEST(Lattice, BuildingBlocks) {
  EXPECT_EQ(determinant(hyperbolic_plane().gram), -1);
  EXPECT_EQ(determinant(e8_negative().gram), 1);
  EXPECT_EQ(signature(e8_negative()), (std::pair<int, int>{0, 8}));
  EXPECT_EQ(signature(hyperbolic_plane()), (std::pair<int, int>{1, 1}));
  EXPECT_TRUE(is_even(e8_negative()));
  EXPECT_THROW(make_lattice(IntMatrix{{1, 2}, {3, 4}}), std::invalid_argument);
  EXPECT_THROW(make_lattice(IntMatrix{{1, 1}, {1, 1}}), std::invalid_argument);
}

TEST(Lattice, K3SquareLattice) {
  const Lattice l = k3_2_lattice();
  EXPECT_EQ(l.rank(), 23u);
  EXPECT_EQ(signature(l), (std::pair<int, int>{3, 20}));
  EXPECT_EQ(abs(determinant(l.gram)), 2);
  EXPECT_TRUE(is_even(l));
  EXPECT_EQ(disc_group(l).orders(), (std::vector<Integer>{2}));
}

TEST(Lattice, PolarizedComplements) {
  for (long n = 1; n <= 12; ++n) {
    const Lattice l = lambda_polarized(n, 1);
    EXPECT_EQ(l.rank(), 22u);
    EXPECT_EQ(signature(l), (std::pair<int, int>{2, 20}));
    EXPECT_EQ(abs(determinant(l.gram)), 4 * n);
    EXPECT_EQ(disc_group(l).size(), 4 * n);
  }
  for (long n : {3, 7, 11, 15}) {
    const Lattice l = lambda_polarized(n, 2);
    EXPECT_EQ(signature(l), (std::pair<int, int>{2, 20}));
    const auto dg = disc_group(l);
    EXPECT_EQ(dg.size(), n);
    ASSERT_EQ(dg.orders().size(), 1u);
    // a generator of Z/n has qbar = -2 a^2 / n for some unit a
    const Rational q = dg.qbar({1});
    bool found = false;
    for (long a = 1; a < n; ++a) {
      Rational want(-2 * a * a, n);
      want.canonicalize();
      Rational diff = q - want;
      diff.canonicalize();
      if (diff.get_den() == 1 && diff.get_num() % 2 == 0) found = true;
    }
    EXPECT_TRUE(found);
  }
  EXPECT_THROW(lambda_polarized(5, 2), hypothesis_error);
  EXPECT_THROW(lambda_polarized(0, 1), std::invalid_argument);
}

TEST(Lattice, SignatureMatchesEigenvalueCountOnRandomForms) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<long> d(-6, 6);
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = 2 + it % 4;
    IntMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) g(i, j) = g(j, i) = d(gen);
    if (determinant(g) == 0) continue;
    const auto [p, q] = signature(Lattice{g, 0});
    EXPECT_EQ(p + q, static_cast<int>(n));
    // sign of the determinant is (-1)^q
    EXPECT_EQ(sgn(determinant(g)), q % 2 == 0 ? 1 : -1);
  }
}

TEST(Lattice, SmithFormIsConsistent) {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<long> d(-9, 9);
  for (int it = 0; it < 100; ++it) {
    IntMatrix a(4, 3);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 3; ++j) a(i, j) = d(gen);
    const auto s = smith_normal_form(a);
    EXPECT_EQ(s.u * a * s.v, s.diagonal);
    EXPECT_EQ(s.v * s.v_inv, IntMatrix::identity(3));
    EXPECT_EQ(abs(determinant(s.u)), 1);
    for (std::size_t k = 0; k + 1 < s.invariants.size(); ++k) {
      if (s.invariants[k] == 0) EXPECT_EQ(s.invariants[k + 1], 0);
      else EXPECT_EQ(s.invariants[k + 1] % s.invariants[k], 0);
    }
  }
}

TEST(Lattice, Divisibility) {
  const Lattice l = k3_2_lattice();
  IntVector ell(23, 0);
  ell[22] = 1;
  EXPECT_EQ(divisibility(l, ell), 2);
  IntVector h(23, 0);
  h[0] = 1;
  h[1] = 3;
  EXPECT_EQ(divisibility(l, h), 1);
  EXPECT_EQ(square(l, h), 6);
  EXPECT_THROW(divisibility(l, IntVector(23, 0)), std::invalid_argument);
}

TEST(Lattice, EichlerInvariant) {
  const Lattice l = direct_sum({hyperbolic_plane(), hyperbolic_plane(), rank_one(-2), rank_one(-6)});
  const auto dg = disc_group(l);
  const auto inv = eichler_invariant(l, dg, {0, 0, 0, 0, 1, 0});
  EXPECT_EQ(inv.square, -2);
  EXPECT_EQ(inv.divisibility, 2);
  EXPECT_TRUE(inv.criterion_applies);
  EXPECT_NE(inv.star, dg.zero());
  EXPECT_THROW(eichler_invariant(l, dg, {0, 0, 0, 0, 2, 0}), std::invalid_argument);
  const auto flat = eichler_invariant(rank_one(-2), {1});
  EXPECT_FALSE(flat.criterion_applies);
}

TEST(Lattice, QbarIsAQuadraticRefinement) {
  const auto dg = disc_group(lambda_polarized(6, 1));
  const auto elems = dg.elements();
  for (const auto& x : elems)
    for (const auto& y : elems) {
      Rational lhs = dg.qbar(dg.add(x, y)) - dg.qbar(x) - dg.qbar(y) - 2 * dg.bbar(x, y);
      lhs.canonicalize();
      EXPECT_EQ(lhs.get_den(), 1);
      EXPECT_EQ(mod_floor(lhs.get_num(), 2), 0);
    }
}

TEST(Lattice, DiscFormIsometriesSmallCases) {
  const auto one = disc_form_isometries(disc_group(lambda_polarized(1, 1)));
  EXPECT_EQ(one.order(), 2u);
  EXPECT_TRUE(one.minus_id_is_id);
  const auto five = disc_form_isometries(disc_group(lambda_polarized(5, 1)));
  EXPECT_EQ(five.order(), 4u);
  EXPECT_EQ(five.quotient_order(), 2u);
  const auto three = disc_form_isometries(disc_group(lambda_polarized(3, 1)));
  EXPECT_EQ(three.order(), 2u);
  EXPECT_EQ(three.quotient_order(), 1u);
}
