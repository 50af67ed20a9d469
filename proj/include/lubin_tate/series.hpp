#pragma once

// Truncated power series in x and in (x, y) with polynomial coefficients.
// Every series carries its own truncation order; nothing is inferred.

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lubin_tate/errors.hpp"
#include "lubin_tate/polyring.hpp"

namespace lubin_tate {

/// Inverse of a polynomial whose u^0 part is a nonzero scalar. Needs a
/// finite u-order unless the polynomial is itself a scalar.
template <class C>
Poly<C> poly_inverse(const Poly<C>& a) {
  using Ops = CoeffOps<C>;
  const RingContext& ctx = a.context();
  Poly<C> low = a.u_coefficient(0);
  if (!low.is_constant() || low.is_zero()) throw ArithmeticError("polynomial is not a unit");
  C c0 = low.constant_coefficient();
  Poly<C> y = Poly<C>::constant(ctx, Ops::inv(c0, ctx));
  if (a.is_constant()) return y;
  if (ctx.u_order == kUnboundedOrder) throw ArithmeticError("non-constant polynomial has no inverse without u-truncation");
  Poly<C> two = Poly<C>::constant(ctx, 2L);
  for (long prec = 1; prec < ctx.u_order; prec *= 2) y = y * (two - a * y);
  return y;
}

template <class C>
class XSeries {
 public:
  using PolyT = Poly<C>;

  XSeries() = default;
  XSeries(RingContext ctx, int order) : ctx_(ctx), order_(order) {
    if (order < 0) throw DomainError("negative truncation order");
  }

  static XSeries monomial(const RingContext& ctx, int order, int degree, const PolyT& coeff) {
    XSeries s(ctx, order);
    s.add_term(degree, coeff);
    return s;
  }
  static XSeries x(const RingContext& ctx, int order) { return monomial(ctx, order, 1, PolyT::one(ctx)); }

  const RingContext& context() const { return ctx_; }
  int order() const { return order_; }
  const std::map<int, PolyT>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  PolyT coefficient(int n) const {
    auto it = terms_.find(n);
    return it == terms_.end() ? PolyT(ctx_) : it->second;
  }

  /// x-adic valuation; the order itself when the series is zero.
  int valuation() const { return terms_.empty() ? order_ : terms_.begin()->first; }

  /// Adds c x^n (ignored when n is beyond the truncation).
  void add_term(int n, const PolyT& c) {
    require_same(ctx_, c.context());
    if (n < 0) throw DomainError("negative degree");
    if (n >= order_ || c.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(n, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  XSeries truncated(int order) const {
    XSeries r(ctx_, std::min(order, order_));
    for (const auto& [n, c] : terms_) {
      if (n >= r.order_) break;
      r.terms_.emplace(n, c);
    }
    return r;
  }

  /// Same terms under a new order; raising it treats the unknown tail as zero.
  XSeries reordered(int order) const {
    XSeries r(ctx_, order);
    for (const auto& [n, c] : terms_) {
      if (n >= order) break;
      r.terms_.emplace(n, c);
    }
    return r;
  }

  /// Same series with coefficients viewed at another u-order.
  XSeries in_context(const RingContext& ctx) const {
    XSeries r(ctx, order_);
    for (const auto& [n, c] : terms_) r.add_term(n, c.in_context(ctx));
    return r;
  }

  XSeries scaled(const PolyT& c) const {
    XSeries r(ctx_, order_);
    for (const auto& [n, a] : terms_) r.add_term(n, a * c);
    return r;
  }

  /// Multiplication by x^k.
  XSeries shifted(int k) const {
    XSeries r(ctx_, order_);
    for (const auto& [n, a] : terms_) r.add_term(n + k, a);
    return r;
  }

  XSeries map_coefficients(auto&& fn) const {
    XSeries r(ctx_, order_);
    for (const auto& [n, a] : terms_) r.add_term(n, fn(a));
    return r;
  }

  friend XSeries operator+(const XSeries& a, const XSeries& b) {
    check_compatible(a, b);
    XSeries r = a;
    for (const auto& [n, c] : b.terms_) r.add_term(n, c);
    return r;
  }
  friend XSeries operator-(const XSeries& a) {
    XSeries r(a.ctx_, a.order_);
    for (const auto& [n, c] : a.terms_) r.terms_.emplace(n, -c);
    return r;
  }
  friend XSeries operator-(const XSeries& a, const XSeries& b) { return a + (-b); }

  friend XSeries operator*(const XSeries& a, const XSeries& b) {
    check_compatible(a, b);
    XSeries r(a.ctx_, a.order_);
    for (const auto& [i, ca] : a.terms_) {
      for (const auto& [j, cb] : b.terms_) {
        if (i + j >= a.order_) break;
        r.add_term(i + j, ca * cb);
      }
    }
    return r;
  }

  friend bool operator==(const XSeries& a, const XSeries& b) {
    return a.ctx_ == b.ctx_ && a.order_ == b.order_ && a.terms_ == b.terms_;
  }

 private:
  static void check_compatible(const XSeries& a, const XSeries& b) {
    require_same(a.ctx_, b.ctx_);
    if (a.order_ != b.order_) {
      throw ContextMismatch("series truncation orders differ: " + std::to_string(a.order_) + " vs " +
                            std::to_string(b.order_));
    }
  }

  RingContext ctx_{};
  int order_ = 0;
  std::map<int, PolyT> terms_;
};

/// Bivariate series truncated at total degree T: stored terms satisfy i + j < T.
template <class C>
class XYSeries {
 public:
  using PolyT = Poly<C>;
  using Degree = std::pair<int, int>;

  XYSeries() = default;
  XYSeries(RingContext ctx, int order) : ctx_(ctx), order_(order) {
    if (order < 0) throw DomainError("negative truncation order");
  }

  static XYSeries monomial(const RingContext& ctx, int order, int i, int j, const PolyT& c) {
    XYSeries s(ctx, order);
    s.add_term(i, j, c);
    return s;
  }
  static XYSeries x(const RingContext& ctx, int order) { return monomial(ctx, order, 1, 0, PolyT::one(ctx)); }
  static XYSeries y(const RingContext& ctx, int order) { return monomial(ctx, order, 0, 1, PolyT::one(ctx)); }

  const RingContext& context() const { return ctx_; }
  int order() const { return order_; }
  const std::map<Degree, PolyT>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  PolyT coefficient(int i, int j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? PolyT(ctx_) : it->second;
  }

  void add_term(int i, int j, const PolyT& c) {
    require_same(ctx_, c.context());
    if (i < 0 || j < 0) throw DomainError("negative degree");
    if (i + j >= order_ || c.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace({i, j}, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  XYSeries truncated(int order) const {
    XYSeries r(ctx_, std::min(order, order_));
    for (const auto& [d, c] : terms_) r.add_term(d.first, d.second, c);
    return r;
  }

  XYSeries scaled(const PolyT& c) const {
    XYSeries r(ctx_, order_);
    for (const auto& [d, a] : terms_) r.add_term(d.first, d.second, a * c);
    return r;
  }

  XYSeries map_coefficients(auto&& fn) const {
    XYSeries r(ctx_, order_);
    for (const auto& [d, a] : terms_) r.add_term(d.first, d.second, fn(a));
    return r;
  }

  /// F(y, x).
  XYSeries swapped() const {
    XYSeries r(ctx_, order_);
    for (const auto& [d, a] : terms_) r.add_term(d.second, d.first, a);
    return r;
  }

  /// F(x, 0) as a univariate series of the same order.
  XSeries<C> restrict_x() const {
    XSeries<C> r(ctx_, order_);
    for (const auto& [d, a] : terms_) {
      if (d.second == 0) r.add_term(d.first, a);
    }
    return r;
  }

  friend XYSeries operator+(const XYSeries& a, const XYSeries& b) {
    check_compatible(a, b);
    XYSeries r = a;
    for (const auto& [d, c] : b.terms_) r.add_term(d.first, d.second, c);
    return r;
  }
  friend XYSeries operator-(const XYSeries& a) {
    XYSeries r(a.ctx_, a.order_);
    for (const auto& [d, c] : a.terms_) r.terms_.emplace(d, -c);
    return r;
  }
  friend XYSeries operator-(const XYSeries& a, const XYSeries& b) { return a + (-b); }

  friend XYSeries operator*(const XYSeries& a, const XYSeries& b) {
    check_compatible(a, b);
    XYSeries r(a.ctx_, a.order_);
    for (const auto& [da, ca] : a.terms_) {
      for (const auto& [db, cb] : b.terms_) {
        if (da.first + da.second + db.first + db.second >= a.order_) continue;
        r.add_term(da.first + db.first, da.second + db.second, ca * cb);
      }
    }
    return r;
  }

  friend bool operator==(const XYSeries& a, const XYSeries& b) {
    return a.ctx_ == b.ctx_ && a.order_ == b.order_ && a.terms_ == b.terms_;
  }

 private:
  static void check_compatible(const XYSeries& a, const XYSeries& b) {
    require_same(a.ctx_, b.ctx_);
    if (a.order_ != b.order_) throw ContextMismatch("bivariate truncation orders differ");
  }

  RingContext ctx_{};
  int order_ = 0;
  std::map<Degree, PolyT> terms_;
};

using XSeriesQ = XSeries<Rational>;
using XSeriesFp = XSeries<FpElem>;
using XYSeriesQ = XYSeries<Rational>;
using XYSeriesFp = XYSeries<FpElem>;

template <class S>
S series_pow(const S& a, unsigned long n, const S& one) {
  S result = one;
  S base = a;
  while (n) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

template <class C>
XSeries<C> series_one(const RingContext& ctx, int order) {
  return XSeries<C>::monomial(ctx, order, 0, Poly<C>::one(ctx));
}

template <class C>
XSeries<C> pow(const XSeries<C>& a, unsigned long n) {
  return series_pow(a, n, series_one<C>(a.context(), a.order()));
}

template <class C>
XYSeries<C> pow(const XYSeries<C>& a, unsigned long n) {
  return series_pow(a, n, XYSeries<C>::monomial(a.context(), a.order(), 0, 0, Poly<C>::one(a.context())));
}

/// f^{p^k} in characteristic p: degrees and coefficients go through the
/// absolute Frobenius. The result is known to order N p^k; it is capped at
/// `cap` when given.
template <class C>
XSeries<C> power_p(const XSeries<C>& f, int k, int cap = kUnboundedOrder) {
  const long q = ipow(f.context().p, k);
  const long known = static_cast<long>(f.order()) * q;
  XSeries<C> r(f.context(), static_cast<int>(std::min<long>(known, cap)));
  for (const auto& [n, c] : f.terms()) {
    if (n * q >= r.order()) break;
    r.add_term(static_cast<int>(n * q), power_p(c, k));
  }
  return r;
}

template <class C>
XSeries<C> derivative(const XSeries<C>& f) {
  const RingContext& ctx = f.context();
  XSeries<C> r(ctx, std::max(f.order() - 1, 0));
  for (const auto& [n, c] : f.terms()) {
    if (n > 0) r.add_term(n - 1, c.scaled(CoeffOps<C>::from_long(n, ctx)));
  }
  return r;
}

/// 1/f for f with a unit constant term, by Newton iteration.
template <class C>
XSeries<C> series_inverse(const XSeries<C>& f) {
  const RingContext& ctx = f.context();
  const int n = f.order();
  XSeries<C> y = XSeries<C>::monomial(ctx, n, 0, poly_inverse(f.coefficient(0)));
  const XSeries<C> two = XSeries<C>::monomial(ctx, n, 0, Poly<C>::constant(ctx, 2L));
  for (int prec = 1; prec < n; prec *= 2) {
    const int next = std::min(2 * prec, n);
    XSeries<C> yn = y.reordered(next);
    y = yn * (two.truncated(next) - f.truncated(next) * yn);
  }
  return y;
}

/// f(g(x)). The result order is min(N_f * v(g), N_g).
template <class C>
XSeries<C> compose(const XSeries<C>& f, const XSeries<C>& g) {
  require_same(f.context(), g.context());
  if (!g.coefficient(0).is_zero()) throw DomainError("inner series must have zero constant term");
  const long v = g.valuation();
  const int order = static_cast<int>(std::min<long>(static_cast<long>(f.order()) * std::max(v, 1L), g.order()));
  const RingContext& ctx = f.context();
  XSeries<C> inner = g.truncated(order);
  XSeries<C> result(ctx, order);
  XSeries<C> power = series_one<C>(ctx, order);
  int power_deg = 0;
  // walk the sparse support of f upward, extending g^n incrementally
  for (const auto& [n, c] : f.terms()) {
    if (static_cast<long>(n) * v >= order) break;
    if (n > power_deg) {
      power = power * pow(inner, n - power_deg);
      power_deg = n;
    }
    result = result + power.scaled(c);
  }
  return result;
}

/// Compositional inverse of f = c x + O(x^2), c a unit, by Newton iteration.
template <class C>
XSeries<C> revert(const XSeries<C>& f) {
  const RingContext& ctx = f.context();
  if (!f.coefficient(0).is_zero()) throw DomainError("series to revert must have zero constant term");
  const Poly<C> c = f.coefficient(1);
  if (c.is_zero()) throw ArithmeticError("leading coefficient is not invertible");
  const Poly<C> c_inv = poly_inverse(c);
  const int n = f.order();
  const XSeries<C> df = derivative(f);
  XSeries<C> g = XSeries<C>::monomial(ctx, std::min(n, 2), 1, c_inv);
  for (int prec = 2; prec < n;) {
    prec = std::min(2 * prec, n);
    XSeries<C> gp = g.reordered(prec);
    XSeries<C> err = compose(f.truncated(prec), gp) - XSeries<C>::x(ctx, prec);
    XSeries<C> slope = compose(df.truncated(prec), gp);
    g = gp - err * series_inverse(slope.reordered(prec));
  }
  if (n <= 2) return XSeries<C>::monomial(ctx, n, 1, c_inv);
  return g;
}

/// b_n = (1/n) [x^{n-1}] (x/f)^n, computed directly for one n.
inline Poly<Rational> lagrange_coefficient(const XSeries<Rational>& f, int n) {
  const RingContext& ctx = f.context();
  if (n < 1 || n >= f.order()) throw DomainError("degree outside the known range");
  XSeries<Rational> quotient(ctx, n);
  for (const auto& [d, c] : f.terms()) {
    if (d == 0) throw DomainError("series must have zero constant term");
    quotient.add_term(d - 1, c);
  }
  XSeries<Rational> power = pow(series_inverse(quotient), static_cast<unsigned long>(n));
  return power.coefficient(n - 1).scaled(Rational(1) / Rational(n));
}

/// Closed-form coefficient of the inverse of a logarithm supported on
/// x, x^{p^{h-1}} and x^{p^h}, valid for n <= p^h and h > 2.
inline Poly<Rational> lagrange_b_n(const XSeries<Rational>& log, int n) {
  const RingContext& ctx = log.context();
  const int p = ctx.p, h = ctx.h;
  if (h <= 2) throw DomainError("closed form requires height > 2");
  const long q1 = ipow(p, h - 1), q = ipow(p, h);
  if (n < 1 || n > q) throw DomainError("closed form covers degrees 1..p^h only");
  for (const auto& [d, c] : log.terms()) {
    if (d > q) break;
    if (d != 1 && d != q1 && d != q) throw DomainError("log has unsupported degree " + std::to_string(d));
  }
  if (!(log.coefficient(1) == Poly<Rational>::one(ctx))) throw DomainError("log must start with x");
  if (n == 1) return Poly<Rational>::one(ctx);
  if (n == q) return -log.coefficient(static_cast<int>(q));
  if ((n - 1) % (q1 - 1) != 0) return Poly<Rational>(ctx);
  const long i = (n - 1) / (q1 - 1);
  Rational scalar = Rational(i % 2 == 0 ? 1 : -1) * Rational(binom(q1 * i, i - 1)) / Rational(i);
  return pow(log.coefficient(static_cast<int>(q1)), i).scaled(scalar);
}

/// Substitutes A for x and B for y in F, truncated at `order`.
template <class C>
XSeries<C> substitute(const XYSeries<C>& F, const XSeries<C>& A, const XSeries<C>& B, int order) {
  const RingContext& ctx = F.context();
  require_same(ctx, A.context());
  require_same(ctx, B.context());
  const XSeries<C> a_pad = A.reordered(order), b_pad = B.reordered(order);
  const int va = a_pad.valuation(), vb = b_pad.valuation();

  std::vector<XSeries<C>> apow{series_one<C>(ctx, order)}, bpow{series_one<C>(ctx, order)};
  auto power_of = [](std::vector<XSeries<C>>& memo, const XSeries<C>& base, int e) -> const XSeries<C>& {
    while (static_cast<int>(memo.size()) <= e) memo.push_back(memo.back() * base);
    return memo[e];
  };

  // group by the y-exponent: F = sum_j y^j (sum_i a_ij x^i)
  std::map<int, std::vector<std::pair<int, const Poly<C>*>>> by_j;
  for (const auto& [d, c] : F.terms()) {
    const long lo = static_cast<long>(d.first) * (a_pad.is_zero() ? order : va) +
                    static_cast<long>(d.second) * (b_pad.is_zero() ? order : vb);
    if ((d.first > 0 && a_pad.is_zero()) || (d.second > 0 && b_pad.is_zero()) || lo >= order) continue;
    by_j[d.second].emplace_back(d.first, &c);
  }
  XSeries<C> result(ctx, order);
  for (const auto& [j, row] : by_j) {
    XSeries<C> inner(ctx, order);
    for (const auto& [i, c] : row) inner = inner + power_of(apow, a_pad, i).scaled(*c);
    result = result + (j == 0 ? inner : inner * power_of(bpow, b_pad, j));
  }
  return result;
}

/// Largest x-order to which F(A, B) is determined by F mod (x,y)^T.
template <class C>
int determined_order(const XYSeries<C>& F, const XSeries<C>& A, const XSeries<C>& B) {
  const long va = A.valuation(), vb = B.valuation();
  const long lo = std::min(va, vb), hi = std::max(va, vb);
  const long missing = static_cast<long>(F.order() - 1) * lo + hi;
  return static_cast<int>(std::min<long>({A.order(), B.order(), missing}));
}

/// Left-folded formal sum t_1 +_F t_2 +_F ... at the requested x-order.
template <class C>
XSeries<C> fgl_sum(const XYSeries<C>& F, std::span<const XSeries<C>> terms, int order) {
  if (terms.empty()) throw DomainError("formal sum of an empty list");
  for (const auto& t : terms) {
    if (!t.coefficient(0).is_zero()) throw DomainError("formal summands must have zero constant term");
  }
  if (terms.front().order() < order) {
    throw InsufficientPrecision("summand known only to x^" + std::to_string(terms.front().order()));
  }
  XSeries<C> acc = terms.front().truncated(order);
  for (std::size_t k = 1; k < terms.size(); ++k) {
    const int valid = determined_order(F, acc, terms[k]);
    if (valid < order) {
      throw InsufficientPrecision("formal sum determined only to x^" + std::to_string(valid) + ", requested x^" +
                                  std::to_string(order));
    }
    acc = substitute(F, acc, terms[k], order);
  }
  return acc;
}

template <class C>
XSeries<C> fgl_sum(const XYSeries<C>& F, std::initializer_list<XSeries<C>> terms, int order) {
  std::vector<XSeries<C>> v(terms);
  return fgl_sum(F, std::span<const XSeries<C>>(v), order);
}

template <class C>
std::string to_string(const XSeries<C>& f) {
  std::string s;
  for (const auto& [n, c] : f.terms()) {
    if (!s.empty()) s += " + ";
    s += "(" + to_string(c) + ")*x^" + std::to_string(n);
  }
  return (s.empty() ? "0" : s) + " + O(x^" + std::to_string(f.order()) + ")";
}

template <class C>
std::string to_string(const XYSeries<C>& f) {
  std::string s;
  for (const auto& [d, c] : f.terms()) {
    if (!s.empty()) s += " + ";
    s += "(" + to_string(c) + ")*x^" + std::to_string(d.first) + "*y^" + std::to_string(d.second);
  }
  return (s.empty() ? "0" : s) + " + O((x,y)^" + std::to_string(f.order()) + ")";
}

}  // namespace lubin_tate
