#include <gtest/gtest.h>

#include "lubin_tate/fgl.hpp"

using namespace lubin_tate;

namespace {

const FGLData& deformation(int p, int h) {
  static std::map<std::pair<int, int>, FGLData> cache;
  auto it = cache.find({p, h});
  if (it == cache.end()) it = cache.emplace(std::pair{p, h}, universal_F(DeformationParams::make(p, h))).first;
  return it->second;
}

/// The part of F whose coefficients carry exactly u^e.
XYSeriesQ graded_piece(const XYSeriesQ& F, int e) {
  return F.map_coefficients([e](const PolyQ& c) { return c.u_coefficient(e).shifted_u(e); });
}

Rational one_over(Rational r) { return Rational(1) / r; }

}  // namespace

TEST(ArakiLog, Coefficients33) {
  const FGLData& d = deformation(3, 3);
  const RingContext ctx = d.params.rational_context();
  const auto& L = d.log_coeffs;
  EXPECT_EQ(L[0], PolyQ::one(ctx));
  EXPECT_TRUE(L[1].is_zero());
  EXPECT_EQ(L[2], PolyQ::u(ctx).scaled(one_over(Rational(3 - 19683))));
  const Rational p27 = Rational(BigInt::pow(BigInt(3), 27));
  EXPECT_EQ(L[3], PolyQ::constant(ctx, one_over(Rational(3) - p27)));
  // one step of the specialized recursion: only L_2 v_2^{p^2} survives
  const Rational p81 = Rational(BigInt::pow(BigInt(3), 81));
  EXPECT_EQ(L[4], PolyQ::u(ctx, 10).scaled(one_over(Rational(3 - 19683) * (Rational(3) - p81))));
}

TEST(ArakiLog, VanishingBelowHMinusOne) {
  const FGLData& d = deformation(3, 4);
  EXPECT_TRUE(d.log_coeffs[1].is_zero());
  EXPECT_TRUE(d.log_coeffs[2].is_zero());
  EXPECT_FALSE(d.log_coeffs[3].is_zero());
}

TEST(UniversalF, UnitAndLowOrder) {
  const FGLData& d = deformation(3, 3);
  EXPECT_EQ(d.F.restrict_x(), XSeriesFp::x(d.F.context(), 28));
  // modulo u, additive below total degree p^{h-1} + 1
  const auto low = reduce_mod_p(d.F_rational, 1).truncated(10);
  EXPECT_EQ(low, XYSeriesFp::x(low.context(), 10) + XYSeriesFp::y(low.context(), 10));
  EXPECT_EQ(d.F, d.F.swapped());
}

TEST(UniversalF, ModuloU) {
  // setting u = 0 leaves x + y - C_{p^h}(x, y)
  const FGLData& d = deformation(3, 3);
  const XYSeriesFp at_zero = reduce_mod_p(d.F_rational, 1);
  const RingContext ctx = at_zero.context();
  const XYSeriesFp expect = XYSeriesFp::x(ctx, 28) + XYSeriesFp::y(ctx, 28) -
                            reduce_mod_p(c_pn(3, d.params.rational_context(), 28), 1);
  EXPECT_EQ(at_zero, expect);
}

TEST(UniversalF, Integral) {
  EXPECT_NO_THROW(deformation(3, 3));
  EXPECT_NO_THROW(deformation(3, 4));
  EXPECT_NO_THROW(deformation(5, 3));
  EXPECT_NO_THROW(deformation(3, 2));
}

TEST(Cpn, Small) {
  const RingContext ctx{3, 3, Domain::rational, kUnboundedOrder};
  const XYSeriesQ c3 = c_pn(1, ctx, 10);
  const XYSeriesQ expect = XYSeriesQ::monomial(ctx, 10, 2, 1, PolyQ::one(ctx)) + XYSeriesQ::monomial(ctx, 10, 1, 2, PolyQ::one(ctx));
  EXPECT_EQ(c3, expect);
  EXPECT_TRUE(c_pn(2, ctx, 20).restrict_x().is_zero());
}

TEST(ClosedForm, MatchesExpLog) {
  for (auto [p, h] : {std::pair{3, 3}, std::pair{3, 4}}) {
    const FGLData& d = deformation(p, h);
    EXPECT_EQ(f_closed_form(d.params), d.F_rational) << p << "," << h;
  }
}

TEST(ClosedForm, Blocks) {
  const FGLData& d = deformation(3, 3);
  const auto blocks = f_closed_form_blocks(d.params);
  ASSERT_EQ(blocks.size(), 4u);
  // the C_{p^{h-1}} block is -u C_9(x, y) modulo p
  const RingContext q = d.params.rational_context();
  EXPECT_EQ(reduce_mod_p(blocks[1], kUnboundedOrder),
            -reduce_mod_p(c_pn(2, q, 28), kUnboundedOrder).scaled(PolyFp::u(reduce_mod_p(blocks[1], kUnboundedOrder).context())));
  for (int m = 1; m <= 2; ++m) {
    const XYSeriesQ& block = blocks[m + 1];
    EXPECT_EQ(graded_piece(block, m + 1), block) << m;
    EXPECT_TRUE(block.restrict_x().is_zero()) << m;
  }
  EXPECT_EQ(graded_piece(d.F_rational, 2), blocks[2]);
  EXPECT_EQ(graded_piece(d.F_rational, 3), blocks[3]);
  EXPECT_EQ(blocks[2], blocks[2].swapped());
}

TEST(ClosedForm, HeightTwoRefused) {
  EXPECT_THROW(f_closed_form(DeformationParams::make(3, 2)), DomainError);
  EXPECT_THROW(p_m(1, DeformationParams::make(3, 2)), DomainError);
}

TEST(PSeries, Shape) {
  const FGLData& d = deformation(3, 3);
  const RingContext ctx = d.F.context();
  const XSeriesFp ps = p_series(d.F, 28);
  EXPECT_EQ(ps.truncated(10), XSeriesFp::monomial(ctx, 10, 9, PolyFp::u(ctx)));
  const XSeriesFp at_zero = p_series(reduce_mod_p(d.F_rational, 1), 28);
  EXPECT_EQ(at_zero, XSeriesFp::monomial(at_zero.context(), 28, 27, PolyFp::one(at_zero.context())));
  EXPECT_EQ(ps.coefficient(27).u_coefficient(0), PolyFp::one(ctx));
}

TEST(Axioms, UniversalF) {
  const FGLData& d = deformation(3, 3);
  const auto rep = verify_fgl_axioms(d.F_rational, 9 + 3 + 1);
  EXPECT_TRUE(rep.ok()) << rep.witness;
  EXPECT_TRUE(verify_fgl_axioms(d.F, 13).ok());
}

TEST(Axioms, AdditiveLaw) {
  const RingContext ctx{5, 3, Domain::mod_p, 4};
  const XYSeriesFp F = XYSeriesFp::x(ctx, 20) + XYSeriesFp::y(ctx, 20);
  EXPECT_TRUE(verify_fgl_axioms(F, 20).ok());
}

TEST(Axioms, MutationCaught) {
  const FGLData& d = deformation(3, 3);
  XYSeriesQ bumped = d.F_rational;
  bumped.add_term(3, 3, PolyQ::one(d.params.rational_context()));
  const auto rep = verify_fgl_axioms(bumped, 13);
  EXPECT_TRUE(rep.unit);
  EXPECT_TRUE(rep.commutative);
  EXPECT_FALSE(rep.associative);
  EXPECT_FALSE(rep.witness.empty());
}

TEST(Params, Validation) {
  EXPECT_THROW(DeformationParams::make(4, 3), DomainError);
  EXPECT_THROW(DeformationParams::make(3, 1), DomainError);
  EXPECT_EQ(DeformationParams::make(3, 3).effective_x_order(), 244);
  EXPECT_EQ(DeformationParams::make(3, 3).effective_xy_order(), 28);
}
