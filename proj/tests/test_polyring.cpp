#include <random>

#include <gtest/gtest.h>

#include "lubin_tate/polyring.hpp"

using namespace lubin_tate;

namespace {

RingContext fp33(int m = kUnboundedOrder) { return RingContext{3, 3, Domain::mod_p, m}; }

PolyFp random_poly(std::mt19937_64& rng, const RingContext& ctx) {
  std::uniform_int_distribution<int> n(0, 5), ue(0, 6), gi(1, 3), ge(0, 26), c(1, 2);
  PolyFp r(ctx);
  for (int k = n(rng); k > 0; --k) {
    r += PolyFp::u(ctx, ue(rng)) * PolyFp::g(ctx, gi(rng), ge(rng)) * PolyFp::constant(ctx, c(rng));
  }
  return r;
}

}  // namespace

TEST(GReduce, Examples) {
  EXPECT_EQ(g_reduce(27, 3, 3), 1);
  EXPECT_EQ(g_reduce(30, 3, 3), 4);
  EXPECT_EQ(g_reduce(53, 3, 3), 1);  // g^53 = g^27 g^26 = g^27 = g
  EXPECT_EQ(g_reduce(26, 3, 3), 26);
  EXPECT_THROW(g_reduce(0, 3, 3), DomainError);
}

TEST(Poly, TeichmullerReduction) {
  const auto ctx = fp33();
  EXPECT_EQ(pow(PolyFp::g(ctx, 1), 27), PolyFp::g(ctx, 1));
  EXPECT_EQ(PolyFp::g(ctx, 2, 28), PolyFp::g(ctx, 2, 2));
}

TEST(Poly, FreshmansDream) {
  const auto ctx = fp33();
  const PolyFp a = PolyFp::g(ctx, 1) + PolyFp::u(ctx);
  EXPECT_EQ(pow(a, 3), PolyFp::g(ctx, 1, 3) + PolyFp::u(ctx, 3));
}

TEST(Poly, BinomialPower) {
  const auto ctx = fp33(4);
  const PolyFp ug = PolyFp::u(ctx) * PolyFp::g(ctx, 1);
  const PolyFp expect = PolyFp::one(ctx) + ug.scaled({2}) + pow(ug, 2) + pow(ug, 3).scaled({2});
  EXPECT_EQ(pow(PolyFp::one(ctx) + ug, 8), expect);
}

TEST(Poly, Frobenius) {
  const auto ctx = fp33();
  EXPECT_EQ(frobenius(PolyFp::g(ctx, 1), 1), PolyFp::g(ctx, 1, 3));
  EXPECT_EQ(frobenius(PolyFp::g(ctx, 1), 3), PolyFp::g(ctx, 1));
  EXPECT_EQ(frobenius(PolyFp::g(ctx, 1, 2) * PolyFp::g(ctx, 2), 1), PolyFp::g(ctx, 1, 6) * PolyFp::g(ctx, 2, 3));
  // u is not touched
  EXPECT_EQ(frobenius(PolyFp::u(ctx, 2), 1), PolyFp::u(ctx, 2));
  const RingContext q{3, 3, Domain::rational, kUnboundedOrder};
  EXPECT_THROW(frobenius(PolyQ::g(q, 1), 1), DomainError);
}

TEST(Poly, AbsoluteFrobenius) {
  const auto ctx = fp33();
  std::mt19937_64 rng(7);
  for (int k = 0; k < 20; ++k) {
    const PolyFp a = random_poly(rng, ctx);
    EXPECT_EQ(power_p(a, 1), pow(a, 3));
  }
}

TEST(Poly, Truncation) {
  const auto ctx = fp33();
  EXPECT_EQ(truncate_u(PolyFp::one(ctx) + PolyFp::u(ctx, 5), 5), PolyFp::one(ctx));
  EXPECT_TRUE(truncate_u(PolyFp(ctx), 3).is_zero());
  const auto small = fp33(3);
  EXPECT_TRUE(PolyFp::u(small, 3).is_zero());
  EXPECT_TRUE((PolyFp::u(small, 2) * PolyFp::u(small, 1)).is_zero());
}

TEST(Poly, RingAxioms) {
  const auto ctx = fp33(8);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const PolyFp a = random_poly(rng, ctx), b = random_poly(rng, ctx), c = random_poly(rng, ctx);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(Poly, Substitute) {
  const auto ctx = fp33(6);
  const PolyFp a = PolyFp::u(ctx, 2) * PolyFp::g(ctx, 1) + PolyFp::u(ctx);
  const PolyFp w = PolyFp::u(ctx) + PolyFp::u(ctx, 2);
  EXPECT_EQ(substitute(a, VarId::u(), w), pow(w, 2) * PolyFp::g(ctx, 1) + w);
  EXPECT_EQ(substitute(a, VarId::g(1), PolyFp::one(ctx)), PolyFp::u(ctx, 2) + PolyFp::u(ctx));
}

TEST(Poly, ContextsMustMatch) {
  EXPECT_THROW(PolyFp::one(fp33(4)) + PolyFp::one(fp33(5)), ContextMismatch);
  EXPECT_THROW((RingContext{4, 3, Domain::mod_p, 3}.validate()), DomainError);
  EXPECT_THROW((RingContext{3, 6, Domain::mod_p, 3}.validate()), DomainError);
}

TEST(Poly, ReduceModP) {
  const RingContext q{3, 3, Domain::rational, kUnboundedOrder};
  const PolyQ a = PolyQ::u(q).scaled(Rational(1) / Rational(1 - 6561)) + PolyQ::constant(q, Rational(3));
  const PolyFp r = reduce_mod_p(a);
  EXPECT_EQ(r, PolyFp::u(r.context()));
  EXPECT_EQ(min_p_valuation(a), 0);
  EXPECT_THROW(reduce_mod_p(PolyQ::constant(q, Rational(1, 3))), NotPIntegral);
}

TEST(Monomial, OrderAndNames) {
  EXPECT_LT(Monomial::g_power(3, 1).bits(), Monomial::g_power(1, 1).bits());
  EXPECT_LT(Monomial::g_power(1, 26).bits(), Monomial::u_power(1).bits());
  EXPECT_EQ(VarId::parse("g2").index, 2);
  EXPECT_EQ(VarId::parse("u").kind, VarId::Kind::u);
  EXPECT_THROW(VarId::parse("x"), ParseError);
  EXPECT_EQ(to_string(PolyFp::u(fp33(), 2) * PolyFp::g(fp33(), 1, 9)), "u^2*g1^9");
}
