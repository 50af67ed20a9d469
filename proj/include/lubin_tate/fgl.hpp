#pragma once

// The universal p-typical deformation of the height-h Honda formal group law,
// restricted to u_1 = ... = u_{h-2} = 0, together with its logarithm,
// exponential, p-series and the closed-form pieces C_{p^n} and P_m.

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lubin_tate/errors.hpp"
#include "lubin_tate/polyring.hpp"
#include "lubin_tate/scalars.hpp"
#include "lubin_tate/series.hpp"

namespace lubin_tate {

struct DeformationParams {
  int p = 3;
  int h = 3;
  int x_order = 0;   // 0 selects p^{2h-1} + 1
  int xy_order = 0;  // 0 selects p^h + 1
  int u_order = kUnboundedOrder;
  Domain domain = Domain::mod_p;

  static DeformationParams make(int p, int h) {
    DeformationParams d;
    d.p = p;
    d.h = h;
    d.validate();
    return d;
  }

  long q() const { return ipow(p, h); }
  long q1() const { return ipow(p, h - 1); }
  int effective_x_order() const { return x_order > 0 ? x_order : static_cast<int>(ipow(p, 2 * h - 1) + 1); }
  int effective_xy_order() const { return xy_order > 0 ? xy_order : static_cast<int>(q() + 1); }

  RingContext rational_context() const { return RingContext{p, h, Domain::rational, kUnboundedOrder}; }
  RingContext mod_p_context() const { return RingContext{p, h, Domain::mod_p, u_order}; }

  void validate() const {
    if (!is_prime(p)) throw DomainError("p = " + std::to_string(p) + " is not prime");
    if (h < 2) throw DomainError("height must be at least 2");
    if (x_order < 0 || xy_order < 0 || u_order < 1) throw DomainError("truncation orders must be positive");
    mod_p_context().validate();
  }
};

/// L_0..L_n with n = ceil(log_p N), over Q[u]. With v_0 = p, v_{h-1} = u,
/// v_h = 1 and every other v_i = 0, the Araki relation reads
/// (p - p^{p^n}) L_n = sum_{i<n} L_i v_{n-i}^{p^i}.
inline std::vector<PolyQ> araki_log(const DeformationParams& params) {
  const RingContext ctx = params.rational_context();
  const int N = params.effective_x_order();
  int top = 0;
  while (ipow(params.p, top) < N) ++top;
  std::vector<PolyQ> L{PolyQ::one(ctx)};
  for (int n = 1; n <= top; ++n) {
    PolyQ rhs(ctx);
    for (int i = 0; i < n; ++i) {
      const int k = n - i;
      const long pi = ipow(params.p, i);
      if (k == params.h - 1) rhs += L[i] * PolyQ::u(ctx, pi);
      else if (k == params.h) rhs += L[i];
    }
    const Rational denom = Rational(params.p) - Rational(BigInt::pow(BigInt(params.p), static_cast<unsigned long>(ipow(params.p, n))));
    L.push_back(rhs.scaled(Rational(1) / denom));
  }
  return L;
}

inline XSeriesQ log_series(const std::vector<PolyQ>& L, const RingContext& ctx, int order, int p) {
  XSeriesQ s(ctx, order);
  for (std::size_t i = 0; i < L.size(); ++i) {
    const long d = ipow(p, static_cast<int>(i));
    if (d >= order) break;
    s.add_term(static_cast<int>(d), L[i]);
  }
  return s;
}

struct FGLData {
  DeformationParams params;
  std::vector<PolyQ> log_coeffs;
  XSeriesQ log;
  XSeriesQ exp;
  XYSeriesQ F_rational;
  XYSeriesFp F;  // reduction mod p at the params' u-order
};

template <class C>
XYSeries<C> embed_x(const XSeries<C>& f, int order) {
  XYSeries<C> r(f.context(), order);
  for (const auto& [n, c] : f.terms()) r.add_term(n, 0, c);
  return r;
}

template <class C>
XYSeries<C> embed_y(const XSeries<C>& f, int order) {
  XYSeries<C> r(f.context(), order);
  for (const auto& [n, c] : f.terms()) r.add_term(0, n, c);
  return r;
}

/// f(G(x, y)) for univariate f and bivariate G without constant term.
template <class C>
XYSeries<C> compose_xy(const XSeries<C>& f, const XYSeries<C>& G) {
  const RingContext& ctx = G.context();
  const int T = G.order();
  XYSeries<C> result(ctx, T);
  XYSeries<C> power = XYSeries<C>::monomial(ctx, T, 0, 0, Poly<C>::one(ctx));
  int power_deg = 0;
  for (const auto& [n, c] : f.terms()) {
    if (n >= T) break;
    while (power_deg < n) {
      power = power * G;
      ++power_deg;
    }
    result = result + power.scaled(c);
  }
  return result;
}

inline XYSeriesFp reduce_mod_p(const XYSeriesQ& F, int u_order) {
  const RingContext ctx = F.context().with_domain(Domain::mod_p).with_u_order(u_order);
  XYSeriesFp r(ctx, F.order());
  for (const auto& [d, c] : F.terms()) r.add_term(d.first, d.second, reduce_mod_p(c, u_order));
  return r;
}

inline XSeriesFp reduce_mod_p(const XSeriesQ& f, int u_order) {
  const RingContext ctx = f.context().with_domain(Domain::mod_p).with_u_order(u_order);
  XSeriesFp r(ctx, f.order());
  for (const auto& [n, c] : f.terms()) r.add_term(n, reduce_mod_p(c, u_order));
  return r;
}

/// F(x, y) = exp(log x + log y), truncated at total degree xy_order. Built
/// over Q and reduced mod p once; a non-integral coefficient throws.
inline FGLData universal_F(const DeformationParams& params) {
  params.validate();
  const RingContext ctx = params.rational_context();
  const int T = params.effective_xy_order();
  FGLData out;
  out.params = params;
  out.log_coeffs = araki_log(params);
  if (ipow(params.p, static_cast<int>(out.log_coeffs.size()) - 1) < T) {
    DeformationParams wider = params;
    wider.x_order = std::max(params.effective_x_order(), T);
    out.log_coeffs = araki_log(wider);
  }
  out.log = log_series(out.log_coeffs, ctx, T, params.p);
  out.exp = revert(out.log);
  const XYSeriesQ z = embed_x(out.log, T) + embed_y(out.log, T);
  out.F_rational = compose_xy(out.exp, z);
  for (const auto& [d, c] : out.F_rational.terms()) {
    auto v = min_p_valuation(c);
    if (v && *v < 0) {
      throw NotPIntegral("coefficient of x^" + std::to_string(d.first) + " y^" + std::to_string(d.second) +
                         " is not p-integral");
    }
  }
  out.F = reduce_mod_p(out.F_rational, params.u_order);
  return out;
}

/// C_{p^n}(x, y) = ((x + y)^{p^n} - x^{p^n} - y^{p^n}) / p over Q.
inline XYSeriesQ c_pn(int n, const RingContext& ctx, int order) {
  const long d = ipow(ctx.p, n);
  XYSeriesQ r(ctx, order);
  for (long i = 1; i < d; ++i) {
    Rational c = Rational(binom(static_cast<unsigned long>(d), i)) / Rational(ctx.p);
    r.add_term(static_cast<int>(i), static_cast<int>(d - i), PolyQ::constant(ctx, c));
  }
  return r;
}

/// C_{p^n}(A, B) for univariate series, coefficients reduced from the
/// integral values binom(p^n, i) / p.
template <class C>
XSeries<C> c_pn(int n, const XSeries<C>& A, const XSeries<C>& B) {
  const RingContext& ctx = A.context();
  const long d = ipow(ctx.p, n);
  XSeries<C> result(ctx, A.order());
  std::vector<XSeries<C>> apow{series_one<C>(ctx, A.order())};
  for (long i = 1; i <= d; ++i) apow.push_back(apow.back() * A);
  XSeries<C> bpow = series_one<C>(ctx, A.order());
  for (long j = 1; j < d; ++j) {
    bpow = bpow * B;
    const BigInt c = exact_div(binom(static_cast<unsigned long>(d), j), BigInt(ctx.p));
    C coeff;
    if constexpr (std::is_same_v<C, Rational>) coeff = Rational(c);
    else coeff = FpElem{c.mod(static_cast<std::uint32_t>(ctx.p))};
    result = result + (apow[d - j] * bpow).scaled(Poly<C>::constant(ctx, coeff));
  }
  return result;
}

/// P_m(x, y) from the closed form of F, 1 <= m <= p - 1, over Q.
inline XYSeriesQ p_m(int m, const DeformationParams& params) {
  const int p = params.p;
  if (params.h <= 2) throw DomainError("P_m is defined for height > 2");
  if (m < 1 || m > p - 1) throw DomainError("m must lie in [1, p-1]");
  const RingContext ctx = params.rational_context();
  const int T = params.effective_xy_order();
  const long q1 = params.q1();
  const XYSeriesQ x = XYSeriesQ::x(ctx, T), y = XYSeriesQ::y(ctx, T);
  const XYSeriesQ sum = x + y;
  const XYSeriesQ frob_sum = XYSeriesQ::monomial(ctx, T, static_cast<int>(q1), 0, PolyQ::one(ctx)) +
                             XYSeriesQ::monomial(ctx, T, 0, static_cast<int>(q1), PolyQ::one(ctx));
  const Rational base = Rational(p) - Rational(BigInt::pow(BigInt(p), static_cast<unsigned long>(q1)));
  XYSeriesQ result(ctx, T);
  for (int j = 0; j <= m; ++j) {
    Rational c = Rational(j % 2 == 0 ? -1 : 1) / Rational(j + 1) * Rational(binom(q1 * (j + 1), j)) *
                 Rational(binom(j * (q1 - 1) + q1, m - j));
    XYSeriesQ term = pow(sum, q1 * (j + 1) - m) * pow(frob_sum, m - j);
    result = result + term.scaled(PolyQ::constant(ctx, c));
  }
  return result.scaled(PolyQ::constant(ctx, pow(base, -(m + 1))));
}

/// The u-graded blocks of the closed form: index 0 is x + y - C_{p^h}/(1 - p^{p^h-1}),
/// index 1 is the C_{p^{h-1}} block, index m + 1 is u^{m+1} P_m.
inline std::vector<XYSeriesQ> f_closed_form_blocks(const DeformationParams& params) {
  if (params.h <= 2) throw DomainError("closed form of F requires height > 2");
  const int p = params.p, h = params.h, T = params.effective_xy_order();
  const RingContext ctx = params.rational_context();
  auto one_minus_p_pow = [&](long e) {
    return Rational(1) - Rational(BigInt::pow(BigInt(p), static_cast<unsigned long>(e)));
  };
  std::vector<XYSeriesQ> blocks;
  blocks.push_back(XYSeriesQ::x(ctx, T) + XYSeriesQ::y(ctx, T) -
                   c_pn(h, ctx, T).scaled(PolyQ::constant(ctx, Rational(1) / one_minus_p_pow(params.q() - 1))));
  blocks.push_back(-c_pn(h - 1, ctx, T).scaled(PolyQ::u(ctx).scaled(Rational(1) / one_minus_p_pow(params.q1() - 1))));
  for (int m = 1; m <= p - 1; ++m) blocks.push_back(p_m(m, params).scaled(PolyQ::u(ctx, m + 1)));
  return blocks;
}

inline XYSeriesQ f_closed_form(const DeformationParams& params) {
  auto blocks = f_closed_form_blocks(params);
  XYSeriesQ total = blocks.front();
  for (std::size_t i = 1; i < blocks.size(); ++i) total = total + blocks[i];
  return total;
}

/// [p]_F(x) mod p: u x^{p^{h-1}} +_F x^{p^h}, to the requested x-order.
inline XSeriesFp p_series(const XYSeriesFp& F, int order) {
  const RingContext& ctx = F.context();
  const int q1 = static_cast<int>(ipow(ctx.p, ctx.h - 1)), q = static_cast<int>(ipow(ctx.p, ctx.h));
  return fgl_sum(F, {XSeriesFp::monomial(ctx, order, q1, PolyFp::u(ctx)), XSeriesFp::monomial(ctx, order, q, PolyFp::one(ctx))},
                 order);
}

/// [p]_F(x) over Q: p x +_F u x^{p^{h-1}} +_F x^{p^h}.
inline XSeriesQ p_series(const XYSeriesQ& F, int order) {
  const RingContext& ctx = F.context();
  const int q1 = static_cast<int>(ipow(ctx.p, ctx.h - 1)), q = static_cast<int>(ipow(ctx.p, ctx.h));
  return fgl_sum(F,
                 {XSeriesQ::monomial(ctx, order, 1, PolyQ::constant(ctx, ctx.p)),
                  XSeriesQ::monomial(ctx, order, q1, PolyQ::u(ctx)), XSeriesQ::monomial(ctx, order, q, PolyQ::one(ctx))},
                 order);
}

/// Series in x, y, z truncated at total degree D; used for associativity.
template <class C>
class XYZSeries {
 public:
  using Degree = std::array<int, 3>;
  XYZSeries(RingContext ctx, int order) : ctx_(ctx), order_(order) {}

  static XYZSeries var(const RingContext& ctx, int order, int which) {
    XYZSeries s(ctx, order);
    Degree d{0, 0, 0};
    d[which] = 1;
    s.add_term(d, Poly<C>::one(ctx));
    return s;
  }
  static XYZSeries one(const RingContext& ctx, int order) {
    XYZSeries s(ctx, order);
    s.add_term({0, 0, 0}, Poly<C>::one(ctx));
    return s;
  }

  void add_term(const Degree& d, const Poly<C>& c) {
    if (d[0] + d[1] + d[2] >= order_ || c.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(d, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  const std::map<Degree, Poly<C>>& terms() const { return terms_; }

  friend XYZSeries operator+(const XYZSeries& a, const XYZSeries& b) {
    XYZSeries r = a;
    for (const auto& [d, c] : b.terms_) r.add_term(d, c);
    return r;
  }
  friend XYZSeries operator-(const XYZSeries& a, const XYZSeries& b) {
    XYZSeries r = a;
    for (const auto& [d, c] : b.terms_) r.add_term(d, -c);
    return r;
  }
  friend XYZSeries operator*(const XYZSeries& a, const XYZSeries& b) {
    XYZSeries r(a.ctx_, a.order_);
    for (const auto& [da, ca] : a.terms_) {
      for (const auto& [db, cb] : b.terms_) {
        if (da[0] + da[1] + da[2] + db[0] + db[1] + db[2] >= a.order_) continue;
        r.add_term({da[0] + db[0], da[1] + db[1], da[2] + db[2]}, ca * cb);
      }
    }
    return r;
  }
  XYZSeries scaled(const Poly<C>& c) const {
    XYZSeries r(ctx_, order_);
    for (const auto& [d, a] : terms_) r.add_term(d, a * c);
    return r;
  }

 private:
  RingContext ctx_;
  int order_;
  std::map<Degree, Poly<C>> terms_;
};

/// F(A, B) for trivariate A, B without constant terms.
template <class C>
XYZSeries<C> substitute3(const XYSeries<C>& F, const XYZSeries<C>& A, const XYZSeries<C>& B, const RingContext& ctx,
                         int order) {
  std::vector<XYZSeries<C>> ap{XYZSeries<C>::one(ctx, order)}, bp{XYZSeries<C>::one(ctx, order)};
  XYZSeries<C> result(ctx, order);
  for (const auto& [d, c] : F.terms()) {
    if (d.first + d.second >= order) continue;
    while (static_cast<int>(ap.size()) <= d.first) ap.push_back(ap.back() * A);
    while (static_cast<int>(bp.size()) <= d.second) bp.push_back(bp.back() * B);
    result = result + (ap[d.first] * bp[d.second]).scaled(c);
  }
  return result;
}

template <class C>
struct AxiomReport {
  bool unit = true;
  bool commutative = true;
  bool associative = true;
  int bivariate_order = 0;
  int trivariate_order = 0;
  std::string witness;  // first violating monomial, empty on success

  bool ok() const { return unit && commutative && associative; }
};

/// Unit and commutativity to F's full truncation; associativity to total
/// degree < trivariate_order.
template <class C>
AxiomReport<C> verify_fgl_axioms(const XYSeries<C>& F, int trivariate_order) {
  AxiomReport<C> rep;
  const RingContext& ctx = F.context();
  rep.bivariate_order = F.order();
  rep.trivariate_order = std::min(trivariate_order, F.order());
  if (!(F.restrict_x() == XSeries<C>::x(ctx, F.order()))) {
    rep.unit = false;
    rep.witness = "F(x,0) - x = " + to_string(F.restrict_x() - XSeries<C>::x(ctx, F.order()));
  }
  XYSeries<C> diff = F - F.swapped();
  if (!diff.is_zero()) {
    rep.commutative = false;
    if (rep.witness.empty()) {
      auto [d, c] = *diff.terms().begin();
      rep.witness = "F(x,y) - F(y,x) at x^" + std::to_string(d.first) + " y^" + std::to_string(d.second);
    }
  }
  const int D = rep.trivariate_order;
  auto X = XYZSeries<C>::var(ctx, D, 0), Y = XYZSeries<C>::var(ctx, D, 1), Z = XYZSeries<C>::var(ctx, D, 2);
  auto left = substitute3(F, substitute3(F, X, Y, ctx, D), Z, ctx, D);
  auto right = substitute3(F, X, substitute3(F, Y, Z, ctx, D), ctx, D);
  auto gap = left - right;
  if (!gap.terms().empty()) {
    rep.associative = false;
    if (rep.witness.empty()) {
      auto [d, c] = *gap.terms().begin();
      rep.witness = "associativity defect at x^" + std::to_string(d[0]) + " y^" + std::to_string(d[1]) + " z^" +
                    std::to_string(d[2]) + ": " + to_string(c);
    }
  }
  return rep;
}

}  // namespace lubin_tate
