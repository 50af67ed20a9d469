#include <gtest/gtest.h>

#include "lubin_tate/scalars.hpp"

using namespace lubin_tate;

TEST(Rational, Arithmetic) {
  EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
  EXPECT_EQ((Rational(1) / Rational(3 - 19683)) * Rational(3), Rational(-1, 6560));
  EXPECT_TRUE((Rational(7, 9) * Rational(0)).is_zero());
  EXPECT_EQ(Rational::parse("-4/6"), Rational(-2, 3));
  EXPECT_EQ(Rational::parse("-4/6").str(), "-2/3");
  EXPECT_THROW(Rational(1) / Rational(0), ArithmeticError);
  EXPECT_EQ(pow(Rational(2, 3), -2), Rational(9, 4));
}

TEST(BigInt, ParseAndDivide) {
  const BigInt a = BigInt::parse("123456789012345678901234567890");
  EXPECT_EQ(a.str(), "123456789012345678901234567890");
  EXPECT_EQ(exact_div(a * BigInt(7), BigInt(7)), a);
  EXPECT_THROW(exact_div(BigInt(7), BigInt(2)), ArithmeticError);
  EXPECT_EQ(BigInt(-7).mod(3), 2u);
  EXPECT_EQ(BigInt::pow(BigInt(3), 9), BigInt(19683));
}

TEST(Valuation, Examples) {
  EXPECT_EQ(p_valuation(Rational(9, 2), 3), 2);
  EXPECT_EQ(p_valuation(Rational(1) / Rational(3 - 19683), 3), -1);
  EXPECT_FALSE(p_valuation(Rational(0), 3).has_value());
  EXPECT_EQ(p_valuation(BigInt(250), 5), 3);
}

TEST(ReduceModP, Examples) {
  EXPECT_EQ(reduce_mod_p(Rational(5, 6), 7).residue, 2u);
  EXPECT_EQ(reduce_mod_p(Rational(1) / Rational(1 - 6561), 3).residue, 1u);
  EXPECT_THROW(reduce_mod_p(Rational(1, 3), 3), NotPIntegral);
  EXPECT_EQ(reduce_mod_p(Rational(-1), 5).residue, 4u);
  EXPECT_EQ(reduce_mod_p(Rational(0), 5).residue, 0u);
}

TEST(Binomial, Examples) {
  const unsigned expect[] = {1, 2, 1, 2, 1, 2, 1, 2, 1};
  for (int i = 0; i <= 8; ++i) EXPECT_EQ(binom(8, i).mod(3), expect[i]) << i;
  EXPECT_EQ(binom(9, -1), BigInt(0));
  EXPECT_EQ(binom(9, 10), BigInt(0));
  EXPECT_EQ(binom(81, 3), BigInt(85320));
}

TEST(Binomial, OverP) {
  EXPECT_EQ(binom_p_over_p(3, 1), BigInt(1));
  EXPECT_EQ(binom_p_over_p(5, 2), BigInt(2));
  EXPECT_EQ(binom_p_over_p(7, 3), BigInt(5));
  EXPECT_THROW(binom_p_over_p(7, 0), DomainError);
  EXPECT_THROW(binom_p_over_p(7, 7), DomainError);
}

TEST(Fp, FieldOps) {
  const std::uint32_t p = 7;
  for (std::uint32_t a = 1; a < p; ++a) EXPECT_EQ(fp::mul({a}, fp::inv({a}, p), p).residue, 1u);
  EXPECT_EQ(fp::make(-1, p).residue, 6u);
  EXPECT_EQ(fp::pow({3}, 6, p).residue, 1u);
  EXPECT_EQ(fp::sub({2}, {5}, p).residue, 4u);
}

TEST(Primes, Small) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(7));
  EXPECT_FALSE(is_prime(4));
  EXPECT_FALSE(is_prime(1));
  EXPECT_EQ(ipow(3, 5), 243);
}
