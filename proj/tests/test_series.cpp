#include <gtest/gtest.h>

#include "lubin_tate/fgl.hpp"

using namespace lubin_tate;

namespace {

const RingContext kQ{3, 3, Domain::rational, kUnboundedOrder};
const RingContext kFp{3, 3, Domain::mod_p, 8};

XSeriesQ qx(int order) { return XSeriesQ::x(kQ, order); }
PolyQ qc(Rational r) { return PolyQ::constant(kQ, r); }

FGLData deformation33() {
  static const FGLData d = universal_F(DeformationParams::make(3, 3));
  return d;
}

}  // namespace

TEST(XSeries, Products) {
  EXPECT_EQ(qx(5) * qx(5), XSeriesQ::monomial(kQ, 5, 2, PolyQ::one(kQ)));
  EXPECT_TRUE((pow(qx(5), 5)).is_zero());
  EXPECT_THROW(qx(5) + qx(6), ContextMismatch);
  EXPECT_EQ(qx(4).reordered(8).order(), 8);
}

TEST(XYSeries, FreshmansDream) {
  const auto x = XYSeriesFp::x(kFp, 10), y = XYSeriesFp::y(kFp, 10);
  EXPECT_EQ(pow(x + y, 3), pow(x, 3) + pow(y, 3));
}

TEST(XSeries, LogCoefficient) {
  const FGLData& d = deformation33();
  const PolyQ c9 = d.log.coefficient(9).scaled(Rational(3));
  EXPECT_EQ(c9, PolyQ::u(kQ).scaled(Rational(1) / Rational(1 - 6561)));
}

TEST(Compose, Identities) {
  XSeriesQ f(kQ, 30);
  f.add_term(1, qc(2));
  f.add_term(4, PolyQ::u(kQ));
  f.add_term(27, qc(5));
  EXPECT_EQ(compose(f, qx(30)), f);

  const RingContext ctx{3, 3, Domain::mod_p, kUnboundedOrder};
  const PolyFp a = PolyFp::g(ctx, 1);
  const auto x27 = XSeriesFp::monomial(ctx, 30, 27, PolyFp::one(ctx));
  EXPECT_EQ(compose(x27, XSeriesFp::monomial(ctx, 30, 1, a)), XSeriesFp::monomial(ctx, 30, 27, pow(a, 27)));
}

TEST(Compose, LogAfterExp) {
  const FGLData& d = deformation33();
  EXPECT_EQ(compose(d.log, d.exp), qx(28));
  EXPECT_EQ(compose(d.exp, d.log), qx(28));
}

TEST(Revert, Basics) {
  EXPECT_EQ(revert(qx(10)), qx(10));
  // x + x^2 reverts to the signed Catalan series
  const XSeriesQ f = qx(8) + pow(qx(8), 2);
  const XSeriesQ r = revert(f);
  const long catalan[] = {1, 1, 2, 5, 14, 42, 132};
  for (int n = 1; n < 8; ++n) EXPECT_EQ(r.coefficient(n), qc(Rational((n % 2 ? 1 : -1) * catalan[n - 1]))) << n;
  EXPECT_EQ(compose(f, r), qx(8));
}

TEST(Revert, ExpLeadingCoefficients) {
  const FGLData& d = deformation33();
  const PolyQ& L2 = d.log_coeffs[2];
  EXPECT_EQ(d.exp.coefficient(9), -L2);
  EXPECT_EQ(lagrange_b_n(d.log, 1), PolyQ::one(kQ));
  EXPECT_EQ(lagrange_b_n(d.log, 9), -L2);
  EXPECT_EQ(lagrange_b_n(d.log, 17), (L2 * L2).scaled(Rational(9)));
  EXPECT_EQ(d.exp.coefficient(17), (L2 * L2).scaled(Rational(9)));
  for (int n = 1; n <= 27; ++n) EXPECT_EQ(lagrange_coefficient(d.log, n), d.exp.coefficient(n)) << n;
}

TEST(FormalSum, Basics) {
  const FGLData& d = deformation33();
  const RingContext& ctx = d.F.context();
  XSeriesFp s(ctx, 28);
  s.add_term(2, PolyFp::u(ctx));
  s.add_term(5, PolyFp::g(ctx, 1));
  EXPECT_EQ(fgl_sum(d.F, {s}, 28), s);
  const auto x = XSeriesFp::x(ctx, 28);
  EXPECT_EQ(fgl_sum(d.F, {x, XSeriesFp(ctx, 28)}, 28), x);
  // commutative
  EXPECT_EQ(fgl_sum(d.F, {x, s}, 28), fgl_sum(d.F, {s, x}, 28));
}

TEST(FormalSum, ArakiRelation) {
  // [p](x) = p x +_F u x^{p^{h-1}} +_F x^{p^h} over the rationals
  const FGLData& d = deformation33();
  const auto x = qx(28);
  const XSeriesQ lhs = fgl_sum(d.F_rational, {x, x, x}, 28);
  const XSeriesQ rhs = fgl_sum(d.F_rational,
                               {x.scaled(qc(3)), XSeriesQ::monomial(kQ, 28, 9, PolyQ::u(kQ)),
                                XSeriesQ::monomial(kQ, 28, 27, PolyQ::one(kQ))},
                               28);
  EXPECT_EQ(lhs, rhs);
  EXPECT_EQ(p_series(d.F_rational, 28), lhs);
}

TEST(FormalSum, InsufficientPrecision) {
  const FGLData& d = deformation33();
  const auto x = XSeriesFp::x(d.F.context(), 60);
  EXPECT_THROW(fgl_sum(d.F, {x, x}, 60), InsufficientPrecision);
  EXPECT_NO_THROW(fgl_sum(d.F, {x, x}, 28));
}

TEST(Derivative, Simple) {
  const XSeriesQ f = pow(qx(6), 3) + qx(6);
  XSeriesQ expect(kQ, 5);
  expect.add_term(0, qc(1));
  expect.add_term(2, qc(3));
  EXPECT_EQ(derivative(f), expect);
}
