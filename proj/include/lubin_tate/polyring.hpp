#pragma once

// Sparse polynomials in the deformation parameter u and Teichmuller symbols
// g_0..g_h, over Q or F_p. Every operation applies the two fixed reduction
// rules: g_i^{p^h} = g_i and u^M = 0, where M is the ring's u-order.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lubin_tate/errors.hpp"
#include "lubin_tate/scalars.hpp"

namespace lubin_tate {

enum class Domain { rational, mod_p };

inline constexpr int kUnboundedOrder = std::numeric_limits<int>::max();

/// Largest supported height: one 16-bit exponent field per g_0..g_5.
inline constexpr int kMaxHeight = 5;

struct RingContext {
  int p = 3;
  int h = 3;
  Domain domain = Domain::mod_p;
  int u_order = kUnboundedOrder;

  long teichmuller_order() const { return ipow(p, h); }

  void validate() const {
    if (!is_prime(p)) throw DomainError("p = " + std::to_string(p) + " is not prime");
    if (h < 1 || h > kMaxHeight) throw DomainError("height must lie in [1, 5]");
    if (2 * (teichmuller_order() - 1) >= 65536) throw DomainError("p^h too large for exponent packing");
    if (u_order < 0) throw DomainError("negative u-order");
  }

  RingContext with_u_order(int m) const {
    RingContext c = *this;
    c.u_order = m;
    return c;
  }
  RingContext with_domain(Domain d) const {
    RingContext c = *this;
    c.domain = d;
    return c;
  }

  friend bool operator==(const RingContext&, const RingContext&) = default;
};

inline void require_same(const RingContext& a, const RingContext& b) {
  if (!(a == b)) throw ContextMismatch("ring context mismatch");
}

/// g^e with g^{p^h} = g, for e >= 1.
inline long g_reduce(long e, int p, int h) {
  if (e < 1) throw DomainError("g_reduce requires a positive exponent");
  const long q = ipow(p, h);
  if (e < q) return e;
  return (e - 1) % (q - 1) + 1;
}

struct VarId {
  enum class Kind : std::uint8_t { u, g };
  Kind kind = Kind::u;
  int index = 0;

  static VarId u() { return {Kind::u, 0}; }
  static VarId g(int i) { return {Kind::g, i}; }

  std::string name() const { return kind == Kind::u ? "u" : "g" + std::to_string(index); }

  static VarId parse(const std::string& s) {
    if (s == "u") return u();
    if (s.size() >= 2 && s[0] == 'g' && s.find_first_not_of("0123456789", 1) == std::string::npos) {
      return g(std::stoi(s.substr(1)));
    }
    throw ParseError("unknown variable '" + s + "'");
  }

  friend bool operator==(const VarId&, const VarId&) = default;
};

/// Packed exponent vector. Layout (high to low bits): u (32 bits), then
/// g_0 .. g_5 (16 bits each), so the integer order is lexicographic on
/// (u, g_0, g_1, ...).
class Monomial {
 public:
  using Bits = unsigned __int128;

  Monomial() = default;

  static Monomial u_power(long e) { return Monomial{}.with_u(e); }
  static Monomial g_power(int i, long e) { return Monomial{}.with_g(i, e); }

  int u_exponent() const { return static_cast<int>(bits_ >> 96); }
  int g_exponent(int i) const { return static_cast<int>((bits_ >> g_shift(i)) & 0xffff); }

  Monomial with_u(long e) const {
    Monomial m = *this;
    m.bits_ = (m.bits_ & ~(Bits(0xffffffffu) << 96)) | (Bits(static_cast<std::uint32_t>(e)) << 96);
    return m;
  }
  Monomial with_g(int i, long e) const {
    Monomial m = *this;
    m.bits_ = (m.bits_ & ~(Bits(0xffff) << g_shift(i))) | (Bits(static_cast<std::uint16_t>(e)) << g_shift(i));
    return m;
  }
  Monomial without_u() const { return with_u(0); }

  bool is_one() const { return bits_ == 0; }
  bool has_g() const { return (bits_ & ((Bits(1) << 96) - 1)) != 0; }
  Bits bits() const { return bits_; }

  /// Product with g-reduction applied; u may exceed the truncation order and
  /// must be checked by the caller.
  static Monomial multiply(Monomial a, Monomial b, int h, long q) {
    Monomial m;
    m.bits_ = a.bits_ + b.bits_;
    for (int i = 0; i <= h; ++i) {
      int e = m.g_exponent(i);
      if (e >= q) m = m.with_g(i, e - (q - 1));
    }
    return m;
  }

  friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.bits_ <=> b.bits_; }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.bits_ == b.bits_; }

  static int g_shift(int i) { return 80 - 16 * i; }

 private:
  Bits bits_ = 0;
};

template <class C>
struct CoeffOps;

template <>
struct CoeffOps<Rational> {
  static constexpr Domain domain = Domain::rational;
  static bool is_zero(const Rational& c) { return c.is_zero(); }
  static Rational from_long(long v, const RingContext&) { return Rational(v); }
  static Rational add(const Rational& a, const Rational& b, const RingContext&) { return a + b; }
  static Rational sub(const Rational& a, const Rational& b, const RingContext&) { return a - b; }
  static Rational mul(const Rational& a, const Rational& b, const RingContext&) { return a * b; }
  static Rational neg(const Rational& a, const RingContext&) { return -a; }
  static Rational inv(const Rational& a, const RingContext&) { return Rational(1) / a; }
  static std::string str(const Rational& a) { return a.str(); }
  static Rational parse(const std::string& s, const RingContext&) { return Rational::parse(s); }
};

template <>
struct CoeffOps<FpElem> {
  static constexpr Domain domain = Domain::mod_p;
  static std::uint32_t P(const RingContext& c) { return static_cast<std::uint32_t>(c.p); }
  static bool is_zero(FpElem c) { return c.residue == 0; }
  static FpElem from_long(long v, const RingContext& c) { return fp::make(v, P(c)); }
  static FpElem add(FpElem a, FpElem b, const RingContext& c) { return fp::add(a, b, P(c)); }
  static FpElem sub(FpElem a, FpElem b, const RingContext& c) { return fp::sub(a, b, P(c)); }
  static FpElem mul(FpElem a, FpElem b, const RingContext& c) { return fp::mul(a, b, P(c)); }
  static FpElem neg(FpElem a, const RingContext& c) { return fp::neg(a, P(c)); }
  static FpElem inv(FpElem a, const RingContext& c) { return fp::inv(a, P(c)); }
  static std::string str(FpElem a) { return std::to_string(a.residue); }
  static FpElem parse(const std::string& s, const RingContext& c) {
    auto v = BigInt::parse(s);
    if (v.sign() < 0 || !(v < BigInt(c.p))) throw ParseError("residue out of range: " + s);
    return {v.mod(P(c))};
  }
};

template <class C>
class Poly {
 public:
  using Coeff = C;
  using Ops = CoeffOps<C>;
  using Term = std::pair<Monomial, C>;

  Poly() = default;
  explicit Poly(RingContext ctx) : ctx_(ctx) {
    if (ctx_.domain != Ops::domain) throw ContextMismatch("coefficient type does not match ring domain");
  }

  static Poly constant(const RingContext& ctx, const C& c) { return monomial(ctx, Monomial{}, c); }
  static Poly constant(const RingContext& ctx, long c) { return constant(ctx, Ops::from_long(c, ctx)); }
  static Poly one(const RingContext& ctx) { return constant(ctx, 1L); }

  static Poly monomial(const RingContext& ctx, Monomial m, const C& c) {
    Poly r(ctx);
    if (!Ops::is_zero(c) && m.u_exponent() < ctx.u_order) r.terms_.emplace_back(m, c);
    return r;
  }

  static Poly variable(const RingContext& ctx, VarId v, long exp = 1) {
    if (exp == 0) return one(ctx);
    if (v.kind == VarId::Kind::u) return monomial(ctx, Monomial::u_power(exp), Ops::from_long(1, ctx));
    if (v.index < 0 || v.index > ctx.h) throw DomainError("g index out of range: " + std::to_string(v.index));
    return monomial(ctx, Monomial::g_power(v.index, g_reduce(exp, ctx.p, ctx.h)), Ops::from_long(1, ctx));
  }
  static Poly u(const RingContext& ctx, long exp = 1) { return variable(ctx, VarId::u(), exp); }
  static Poly g(const RingContext& ctx, int i, long exp = 1) { return variable(ctx, VarId::g(i), exp); }

  /// Builds a canonical polynomial from arbitrary (possibly unreduced,
  /// repeated or zero) terms.
  static Poly from_terms(const RingContext& ctx, std::vector<Term> terms) {
    Poly r(ctx);
    const long q = ctx.teichmuller_order();
    for (auto& [m, c] : terms) {
      for (int i = 0; i <= ctx.h; ++i) {
        int e = m.g_exponent(i);
        if (e >= q) m = m.with_g(i, g_reduce(e, ctx.p, ctx.h));
      }
    }
    std::erase_if(terms, [&](const Term& t) { return t.first.u_exponent() >= ctx.u_order; });
    r.terms_ = combine(std::move(terms), ctx);
    return r;
  }

  const RingContext& context() const { return ctx_; }
  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }

  C constant_coefficient() const { return coefficient(Monomial{}); }

  C coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& k) { return t.first < k; });
    if (it != terms_.end() && it->first == m) return it->second;
    return Ops::from_long(0, ctx_);
  }

  /// Lowest u-exponent present; u_order (or kUnboundedOrder) for zero.
  int u_valuation() const { return terms_.empty() ? ctx_.u_order : terms_.front().first.u_exponent(); }

  /// Coefficient of u^e as a polynomial in the g's.
  Poly u_coefficient(int e) const {
    Poly r(ctx_);
    for (const auto& [m, c] : terms_) {
      if (m.u_exponent() == e) r.terms_.emplace_back(m.without_u(), c);
    }
    return r;
  }

  Poly& operator+=(const Poly& o) { return *this = merge(*this, o, false); }
  Poly& operator-=(const Poly& o) { return *this = merge(*this, o, true); }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
  friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }
  friend Poly operator-(const Poly& a) {
    Poly r = a;
    for (auto& t : r.terms_) t.second = Ops::neg(t.second, a.ctx_);
    return r;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    require_same(a.ctx_, b.ctx_);
    const RingContext& ctx = a.ctx_;
    if (a.is_zero() || b.is_zero()) return Poly(ctx);
    if (b.is_constant()) return a.scaled(b.terms_[0].second);
    if (a.is_constant()) return b.scaled(a.terms_[0].second);
    const long q = ctx.teichmuller_order();
    const long limit = ctx.u_order;
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    // terms are sorted by u-exponent first, so the inner loop can stop early
    for (const auto& [ma, ca] : a.terms_) {
      const long ua = ma.u_exponent();
      for (const auto& [mb, cb] : b.terms_) {
        if (ua + mb.u_exponent() >= limit) break;
        out.emplace_back(Monomial::multiply(ma, mb, ctx.h, q), Ops::mul(ca, cb, ctx));
      }
    }
    Poly r(ctx);
    r.terms_ = combine(std::move(out), ctx);
    return r;
  }

  Poly scaled(const C& c) const {
    Poly r(ctx_);
    if (Ops::is_zero(c)) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& [m, a] : terms_) {
      C v = Ops::mul(a, c, ctx_);
      if (!Ops::is_zero(v)) r.terms_.emplace_back(m, std::move(v));
    }
    return r;
  }

  /// Multiplication by u^e (with truncation).
  Poly shifted_u(int e) const {
    Poly r(ctx_);
    for (const auto& [m, c] : terms_) {
      long ue = static_cast<long>(m.u_exponent()) + e;
      if (ue < ctx_.u_order) r.terms_.emplace_back(m.with_u(ue), c);
    }
    return r;
  }

  /// Same polynomial viewed in a ring with a different u-order.
  Poly in_context(const RingContext& ctx) const {
    RingContext expect = ctx;
    expect.u_order = ctx_.u_order;
    require_same(expect, ctx_);
    Poly r(ctx);
    for (const auto& t : terms_) {
      if (t.first.u_exponent() < ctx.u_order) r.terms_.push_back(t);
    }
    return r;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.ctx_ == b.ctx_ && a.terms_ == b.terms_; }

 private:
  static std::vector<Term> combine(std::vector<Term> terms, const RingContext& ctx) {
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
      if (!out.empty() && out.back().first == t.first) {
        out.back().second = Ops::add(out.back().second, t.second, ctx);
      } else {
        if (!out.empty() && Ops::is_zero(out.back().second)) out.pop_back();
        out.push_back(std::move(t));
      }
    }
    if (!out.empty() && Ops::is_zero(out.back().second)) out.pop_back();
    return out;
  }

  static Poly merge(const Poly& a, const Poly& b, bool subtract) {
    require_same(a.ctx_, b.ctx_);
    const RingContext& ctx = a.ctx_;
    Poly r(ctx);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
      if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
        r.terms_.push_back(*i++);
      } else if (i == a.terms_.end() || j->first < i->first) {
        r.terms_.emplace_back(j->first, subtract ? Ops::neg(j->second, ctx) : j->second);
        ++j;
      } else {
        C c = subtract ? Ops::sub(i->second, j->second, ctx) : Ops::add(i->second, j->second, ctx);
        if (!Ops::is_zero(c)) r.terms_.emplace_back(i->first, std::move(c));
        ++i;
        ++j;
      }
    }
    return r;
  }

  RingContext ctx_{};
  std::vector<Term> terms_;
};

using PolyQ = Poly<Rational>;
using PolyFp = Poly<FpElem>;

template <class C>
Poly<C> pow(const Poly<C>& a, unsigned long n) {
  Poly<C> result = Poly<C>::one(a.context());
  Poly<C> base = a;
  while (n) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return result;
}

template <class C>
Poly<C> truncate_u(const Poly<C>& a, int order) {
  std::vector<typename Poly<C>::Term> kept;
  for (const auto& t : a.terms()) {
    if (t.first.u_exponent() < order) kept.push_back(t);
  }
  return Poly<C>::from_terms(a.context(), std::move(kept));
}

/// sigma^k on Teichmuller symbols: every g-exponent is multiplied by p^k.
/// u-exponents and coefficients are untouched.
template <class C>
Poly<C> frobenius(const Poly<C>& a, int k) {
  const RingContext& ctx = a.context();
  if (ctx.domain != Domain::mod_p) throw DomainError("frobenius is modelled only modulo p");
  // p^h acts trivially, so only k mod h matters
  const long mult = ipow(ctx.p, ((k % ctx.h) + ctx.h) % ctx.h);
  std::vector<typename Poly<C>::Term> out;
  out.reserve(a.size());
  for (const auto& [m, c] : a.terms()) {
    Monomial r = m;
    for (int i = 0; i <= ctx.h; ++i) {
      if (int e = m.g_exponent(i)) r = r.with_g(i, g_reduce(e * mult, ctx.p, ctx.h));
    }
    out.emplace_back(r, c);
  }
  return Poly<C>::from_terms(ctx, std::move(out));
}

/// a^{p^k} in characteristic p: the absolute Frobenius, which multiplies u-
/// and g-exponents by p^k and fixes F_p coefficients.
template <class C>
Poly<C> power_p(const Poly<C>& a, int k) {
  const RingContext& ctx = a.context();
  if (ctx.domain != Domain::mod_p) throw DomainError("p-th power Frobenius requires characteristic p");
  const long mult = ipow(ctx.p, k);
  const long gmult = ipow(ctx.p, k % ctx.h);
  std::vector<typename Poly<C>::Term> out;
  out.reserve(a.size());
  for (const auto& [m, c] : a.terms()) {
    const long ue = static_cast<long>(m.u_exponent()) * mult;
    if (ue >= ctx.u_order) continue;
    Monomial r = m.with_u(ue);
    for (int i = 0; i <= ctx.h; ++i) {
      if (int e = m.g_exponent(i)) r = r.with_g(i, g_reduce(e * gmult, ctx.p, ctx.h));
    }
    out.emplace_back(r, c);
  }
  return Poly<C>::from_terms(ctx, std::move(out));
}

/// Replaces a variable by a polynomial value.
template <class C>
Poly<C> substitute(const Poly<C>& a, VarId var, const Poly<C>& value) {
  require_same(a.context(), value.context());
  const RingContext& ctx = a.context();
  std::vector<Poly<C>> powers{Poly<C>::one(ctx)};
  Poly<C> result(ctx);
  // group terms by the exponent of var to reuse powers
  std::vector<std::vector<typename Poly<C>::Term>> groups;
  for (const auto& [m, c] : a.terms()) {
    int e = var.kind == VarId::Kind::u ? m.u_exponent() : m.g_exponent(var.index);
    Monomial rest = var.kind == VarId::Kind::u ? m.without_u() : m.with_g(var.index, 0);
    if (static_cast<int>(groups.size()) <= e) groups.resize(e + 1);
    groups[e].emplace_back(rest, c);
  }
  for (std::size_t e = 0; e < groups.size(); ++e) {
    if (groups[e].empty()) continue;
    while (powers.size() <= e) powers.push_back(powers.back() * value);
    result += Poly<C>::from_terms(ctx, groups[e]) * powers[e];
  }
  return result;
}

/// Image in F_p of a p-integral rational polynomial.
inline PolyFp reduce_mod_p(const PolyQ& a, int u_order = kUnboundedOrder) {
  RingContext ctx = a.context().with_domain(Domain::mod_p).with_u_order(u_order);
  std::vector<PolyFp::Term> out;
  out.reserve(a.size());
  for (const auto& [m, c] : a.terms()) {
    out.emplace_back(m, reduce_mod_p(c, static_cast<std::uint32_t>(ctx.p)));
  }
  return PolyFp::from_terms(ctx, std::move(out));
}

/// Minimum p-adic valuation over all coefficients (nullopt for zero).
inline std::optional<long> min_p_valuation(const PolyQ& a) {
  std::optional<long> best;
  for (const auto& t : a.terms()) {
    long v = *p_valuation(t.second, a.context().p);
    if (!best || v < *best) best = v;
  }
  return best;
}

template <class C>
std::string to_string(const Poly<C>& a) {
  if (a.is_zero()) return "0";
  std::string s;
  for (const auto& [m, c] : a.terms()) {
    if (!s.empty()) s += " + ";
    std::string mono;
    if (int e = m.u_exponent()) mono += e == 1 ? "u" : "u^" + std::to_string(e);
    for (int i = 0; i <= a.context().h; ++i) {
      if (int e = m.g_exponent(i)) {
        if (!mono.empty()) mono += "*";
        mono += "g" + std::to_string(i) + (e == 1 ? "" : "^" + std::to_string(e));
      }
    }
    std::string cs = CoeffOps<C>::str(c);
    if (mono.empty()) s += cs;
    else if (cs == "1") s += mono;
    else s += cs + "*" + mono;
  }
  return s;
}

}  // namespace lubin_tate
