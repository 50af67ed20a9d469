#pragma once

// Elements of the Morava stabilizer group modulo p, and their action on the
// deformation parameter u through the coefficients t_0, ..., t_h of the
// isomorphism h_g : g_*F -> F. Two independent engines compute the t_k:
// a brute-force solver for h_g([p]_{g_*F}(x)) = [p]_F(h_g(x)), and the
// fixed point of the closed recursions for t_k.

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lubin_tate/errors.hpp"
#include "lubin_tate/fgl.hpp"
#include "lubin_tate/finite_field.hpp"
#include "lubin_tate/polyring.hpp"
#include "lubin_tate/series.hpp"

namespace lubin_tate {

template <class Coeff>
struct GroupCoeffTraits;

template <>
struct GroupCoeffTraits<PolyFp> {
  static PolyFp frobenius(const PolyFp& c, int k) { return lubin_tate::frobenius(c, k); }
  static bool is_unit(const PolyFp& c) { return !c.is_zero(); }
};

template <>
struct GroupCoeffTraits<FpnElem> {
  static FpnElem frobenius(const FpnElem& c, int k) { return c.frobenius(k); }
  static bool is_unit(const FpnElem& c) { return !c.is_zero(); }
};

/// g = sum_i g_i S^i truncated at S^{s_order}. Coefficients are either
/// symbolic (PolyFp) or concrete (FpnElem); the two never mix.
template <class Coeff>
class GroupElement {
 public:
  GroupElement(int p, int h, std::vector<Coeff> coeffs, int s_order)
      : p_(p), h_(h), coeffs_(std::move(coeffs)), s_order_(s_order) {
    if (coeffs_.empty() || !GroupCoeffTraits<Coeff>::is_unit(coeffs_[0])) {
      throw DomainError("leading coefficient g_0 must be invertible");
    }
    if (static_cast<int>(coeffs_.size()) > s_order_) coeffs_.erase(coeffs_.begin() + s_order_, coeffs_.end());
  }

  int p() const { return p_; }
  int h() const { return h_; }
  int s_order() const { return s_order_; }
  const std::vector<Coeff>& coeffs() const { return coeffs_; }

  /// g_i, or nullopt when absent (zero).
  std::optional<Coeff> coeff(int i) const {
    if (i < static_cast<int>(coeffs_.size())) return coeffs_[i];
    return std::nullopt;
  }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.p_ == b.p_ && a.h_ == b.h_ && a.s_order_ == b.s_order_ && a.coeffs_ == b.coeffs_;
  }

 private:
  int p_, h_;
  std::vector<Coeff> coeffs_;
  int s_order_;
};

using SymbolicElement = GroupElement<PolyFp>;
using ConcreteElement = GroupElement<FpnElem>;

/// g = g_0 + g_1 S + ... + g_h S^h with symbolic Teichmuller coefficients;
/// `normalized` replaces g_0 by 1.
inline SymbolicElement symbolic_element(const RingContext& ctx, bool normalized = true) {
  std::vector<PolyFp> c;
  c.push_back(normalized ? PolyFp::one(ctx) : PolyFp::g(ctx, 0));
  for (int i = 1; i <= ctx.h; ++i) c.push_back(PolyFp::g(ctx, i));
  return SymbolicElement(ctx.p, ctx.h, std::move(c), ctx.h + 1);
}

inline SymbolicElement identity_element(const RingContext& ctx) {
  return SymbolicElement(ctx.p, ctx.h, {PolyFp::one(ctx)}, ctx.h + 1);
}

/// Product in the quotient where S^h = p vanishes: c_k = sum a_i sigma^i(b_j).
template <class Coeff>
GroupElement<Coeff> stabilizer_mul(const GroupElement<Coeff>& a, const GroupElement<Coeff>& b) {
  if (a.p() != b.p() || a.h() != b.h()) throw ContextMismatch("group elements of different (p, h)");
  const int n = std::min({a.h(), a.s_order(), b.s_order()});
  std::vector<Coeff> out;
  for (int k = 0; k < n; ++k) {
    std::optional<Coeff> acc;
    for (int i = 0; i <= k; ++i) {
      auto ai = a.coeff(i), bj = b.coeff(k - i);
      if (!ai || !bj) continue;
      Coeff term = *ai * GroupCoeffTraits<Coeff>::frobenius(*bj, i);
      acc = acc ? *acc + term : term;
    }
    out.push_back(acc ? *acc : out.front() - out.front());
  }
  // drop trailing zero coefficients
  while (out.size() > 1 && out.back().is_zero()) out.pop_back();
  return GroupElement<Coeff>(a.p(), a.h(), std::move(out), n);
}

/// Claimed u-adic accuracy of t_0..t_h obtainable from the recursions:
/// 2p^{h-1} + p^{h-2} + ... + p^{k+1} + 1 for k <= h-2, p^{h-1} + 1 for
/// k = h-1 and 1 for the seeded t_h.
inline std::vector<int> accuracy_schedule(int p, int h) {
  std::vector<int> acc(h + 1);
  for (int k = 0; k <= h - 2; ++k) {
    long a = 2 * ipow(p, h - 1) + 1;
    for (int i = k + 1; i <= h - 2; ++i) a += ipow(p, i);
    acc[k] = static_cast<int>(a);
  }
  acc[h - 1] = static_cast<int>(ipow(p, h - 1) + 1);
  acc[h] = 1;
  return acc;
}

/// Ring F_p[g_0..g_h][u]/(u^M) with M the largest scheduled accuracy.
inline RingContext action_context(int p, int h) {
  RingContext ctx{p, h, Domain::mod_p, accuracy_schedule(p, h).front()};
  ctx.validate();
  return ctx;
}

struct ActionData {
  RingContext ctx;
  std::vector<PolyFp> t;    // t_0 .. t_h
  std::vector<int> accuracy;  // t_k is claimed correct modulo u^{accuracy[k]}
};

/// g_*(u) = u t_0^{p^{h-1} - 1}.
inline PolyFp act_on_u(const PolyFp& t0) {
  const RingContext& ctx = t0.context();
  return PolyFp::u(ctx) * pow(t0, static_cast<unsigned long>(ipow(ctx.p, ctx.h - 1) - 1));
}

inline void check_action_shape(const ActionData& d) {
  if (static_cast<int>(d.t.size()) != d.ctx.h + 1 || static_cast<int>(d.accuracy.size()) != d.ctx.h + 1) {
    throw DomainError("action data must list t_0..t_h with accuracies");
  }
}

/// t_k^{p^h} + u t_{k+1}^{p^{h-1}} - u^{p^{k+1}} t_{k+1} t_0^{p^{k+1}(p^{h-1}-1)}, for 0 <= k <= h-2.
inline PolyFp recursion_tk(const ActionData& d, int k) {
  check_action_shape(d);
  const RingContext& ctx = d.ctx;
  const int p = ctx.p, h = ctx.h;
  if (k < 0 || k > h - 2) throw DomainError("recursion index must lie in [0, h-2]");
  const PolyFp& tk = d.t[k];
  const PolyFp& tk1 = d.t[k + 1];
  const PolyFp t0_pow = pow(d.t[0], static_cast<unsigned long>(ipow(p, h - 1) - 1));
  PolyFp r = power_p(tk, h) + PolyFp::u(ctx) * power_p(tk1, h - 1) -
             PolyFp::u(ctx, ipow(p, k + 1)) * tk1 * power_p(t0_pow, k + 1);
  return truncate_u(r, d.accuracy[k]);
}

/// t_{h-1}^{p^h} + u t_h^{p^{h-1}} - sum_j (binom(p,j)/p) u^{j p^{h-2} + 1} t_1^{j p^{2h-3}} t_0^{p^{2h-2}(p-j)}
/// modulo u^{p^{h-1} + 1}.
inline PolyFp recursion_th(const ActionData& d) {
  check_action_shape(d);
  const RingContext& ctx = d.ctx;
  const int p = ctx.p, h = ctx.h;
  const long q1 = ipow(p, h - 1);
  PolyFp r = power_p(d.t[h - 1], h) + PolyFp::u(ctx) * power_p(d.t[h], h - 1);
  for (int j = 1; j <= p - 1; ++j) {
    const FpElem c{binom_p_over_p(p, j).mod(static_cast<std::uint32_t>(p))};
    PolyFp term = PolyFp::u(ctx, j * ipow(p, h - 2) + 1) * power_p(pow(d.t[1], j), 2 * h - 3) *
                  power_p(pow(d.t[0], p - j), 2 * h - 2);
    r -= term.scaled(c);
  }
  return truncate_u(r, static_cast<int>(q1 + 1));
}

inline std::vector<PolyFp> initial_t(const SymbolicElement& g, const RingContext& ctx) {
  std::vector<PolyFp> t;
  for (int i = 0; i <= ctx.h; ++i) {
    auto gi = g.coeff(i);
    t.push_back(gi ? gi->in_context(ctx) : PolyFp(ctx));
  }
  return t;
}

struct UnfoldResult {
  ActionData data;
  int iterations = 0;
};

/// Fixed point of the recursions, iterated top-down from t_i = g_i until stable.
inline UnfoldResult unfold_action(const SymbolicElement& g, const RingContext& ctx) {
  const int p = ctx.p, h = ctx.h;
  if (g.p() != p || g.h() != h) throw ContextMismatch("group element does not match the ring");
  ActionData d{ctx, initial_t(g, ctx), accuracy_schedule(p, h)};
  for (auto& a : d.accuracy) a = std::min(a, ctx.u_order);
  for (int k = 0; k <= h; ++k) d.t[k] = truncate_u(d.t[k], d.accuracy[k]);
  const int top = *std::max_element(d.accuracy.begin(), d.accuracy.end());
  int cap = 1;
  for (long reach = 1; reach < top; reach *= p) ++cap;
  for (int it = 1; it <= cap; ++it) {
    const std::vector<PolyFp> before = d.t;
    d.t[h - 1] = truncate_u(recursion_th(d), d.accuracy[h - 1]);
    for (int k = h - 2; k >= 0; --k) d.t[k] = recursion_tk(d, k);
    if (d.t == before) return {d, it};
  }
  throw ConvergenceError("recursion did not stabilize within " + std::to_string(cap) + " passes");
}

/// Applies u -> w to every coefficient of F.
inline XYSeriesFp substitute_u(const XYSeriesFp& F, const PolyFp& w) {
  const RingContext& ctx = F.context();
  std::vector<PolyFp> wp{PolyFp::one(ctx)};
  XYSeriesFp r(ctx, F.order());
  for (const auto& [deg, c] : F.terms()) {
    PolyFp v(ctx);
    for (const auto& [m, a] : c.terms()) {
      const int e = m.u_exponent();
      while (static_cast<int>(wp.size()) <= e) wp.push_back(wp.back() * w);
      v += (PolyFp::monomial(ctx, m.without_u(), a) * wp[e]);
    }
    r.add_term(deg.first, deg.second, v);
  }
  return r;
}

struct EquationSides {
  XSeriesFp lhs;  // h_g([p]_{g_*F}(x))
  XSeriesFp rhs;  // [p]_F(h_g(x))
};

/// Both sides of h_g([p]_{g_*F}(x)) = [p]_F(h_g(x)) modulo (I_{h-1}, x^N),
/// with g_* acting on u by u -> w.
inline EquationSides equation_sides(const XYSeriesFp& F, const std::vector<PolyFp>& t, const PolyFp& w, int N) {
  const RingContext& ctx = F.context();
  const int p = ctx.p, h = ctx.h;
  const int q1 = static_cast<int>(ipow(p, h - 1)), q = static_cast<int>(ipow(p, h));
  const XYSeriesFp Fw = substitute_u(F, w);
  const XSeriesFp P = fgl_sum(Fw, {XSeriesFp::monomial(ctx, N, q1, w), XSeriesFp::monomial(ctx, N, q, PolyFp::one(ctx))}, N);
  std::vector<XSeriesFp> outer;
  for (int k = 0; k <= h; ++k) outer.push_back(power_p(P, k, N).scaled(t[k]));
  XSeriesFp lhs = fgl_sum(F, std::span<const XSeriesFp>(outer), N);

  std::vector<XSeriesFp> inner;
  for (int k = 0; k <= h; ++k) inner.push_back(XSeriesFp::monomial(ctx, q + 1, static_cast<int>(ipow(p, k)), t[k]));
  const XSeriesFp hg = fgl_sum(F, std::span<const XSeriesFp>(inner), q + 1);
  XSeriesFp rhs =
      fgl_sum(F, {power_p(hg, h - 1, N).scaled(PolyFp::u(ctx)), power_p(hg, h, N)}, N);
  return {std::move(lhs), std::move(rhs)};
}

/// u-precision to which the residual at x^n is meaningful: acc_k on
/// (p^{h+k-1}, p^{h+k}], acc_0 below p^h, nothing above p^{2h-1}.
inline int tracked_order(int n, int p, int h, const std::vector<int>& acc) {
  if (n <= ipow(p, h)) return acc[0];
  for (int k = 1; k <= h - 1; ++k) {
    if (n <= ipow(p, h + k)) return acc[k];
  }
  return 0;
}

struct Violation {
  int x_degree = 0;
  int u_degree = 0;
  Monomial monomial;
  FpElem coefficient;
};

struct ResidualReport {
  XSeriesFp series;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

inline std::vector<Violation> tracked_violations(const XSeriesFp& E, const std::vector<int>& acc, std::size_t cap = 1000) {
  const RingContext& ctx = E.context();
  std::vector<Violation> out;
  for (const auto& [n, c] : E.terms()) {
    const int keep = tracked_order(n, ctx.p, ctx.h, acc);
    for (const auto& [m, a] : c.terms()) {
      if (m.u_exponent() >= keep) break;
      if (out.size() < cap) out.push_back({n, m.u_exponent(), m, a});
    }
  }
  return out;
}

inline int functional_equation_order(int p, int h) { return static_cast<int>(ipow(p, 2 * h - 1) + 1); }

/// LHS - RHS of the functional equation for the given t_k, with g_*(u) taken
/// from t_0. Coefficients are checked only to the per-stratum accuracy.
inline ResidualReport residual(const ActionData& d, const SymbolicElement& g, const XYSeriesFp& F) {
  check_action_shape(d);
  require_same(d.ctx, F.context());
  const int h = d.ctx.h;
  for (int i = 0; i <= h; ++i) {
    auto gi = g.coeff(i);
    PolyFp expect = gi ? gi->in_context(d.ctx) : PolyFp(d.ctx);
    if (!(truncate_u(d.t[i], 1) == truncate_u(expect, 1))) {
      throw DomainError("t_" + std::to_string(i) + " does not reduce to g_" + std::to_string(i) + " modulo u");
    }
  }
  const EquationSides s = equation_sides(F, d.t, act_on_u(d.t[0]), functional_equation_order(d.ctx.p, h));
  ResidualReport rep;
  rep.series = s.lhs - s.rhs;
  rep.violations = tracked_violations(rep.series, d.accuracy);
  return rep;
}

struct SolveResult {
  ActionData data;
  std::vector<PolyFp> raw_t;  // untruncated iterates, modulo u^M
  PolyFp w;                   // self-consistent g_*(u)
  int iterations = 0;
};

/// The universal deformation reduced mod p, in the ring of `ctx`.
inline XYSeriesFp deformation_mod_p(const RingContext& ctx, int xy_order = 0) {
  DeformationParams params = DeformationParams::make(ctx.p, ctx.h);
  params.u_order = ctx.u_order;
  params.xy_order = xy_order;
  return universal_F(params).F;
}

/// Brute-force oracle: solves the functional equation for w = g_*(u) and
/// t_0..t_{h-1} by matching the coefficients of x^{p^{h-1}} and x^{p^{h+k}},
/// with t_h = g_h held fixed, then checks every other tracked coefficient.
/// Requires g_0 = 1.
inline SolveResult solve_action(const SymbolicElement& g, const XYSeriesFp& F) {
  const RingContext& ctx = F.context();
  const int p = ctx.p, h = ctx.h;
  if (g.p() != p || g.h() != h) throw ContextMismatch("group element does not match the ring");
  if (!(g.coeffs()[0] == PolyFp::one(g.coeffs()[0].context()))) throw DomainError("solver requires g_0 = 1");
  const int N = functional_equation_order(p, h);
  const long q1 = ipow(p, h - 1);
  std::vector<PolyFp> t = initial_t(g, ctx);
  PolyFp w = PolyFp::u(ctx);
  const int max_iter = (ctx.u_order == kUnboundedOrder ? 64 : ctx.u_order) + 2;
  int it = 0;
  XSeriesFp E;
  for (;;) {
    if (++it > max_iter) throw ConvergenceError("functional equation solver did not converge");
    const EquationSides s = equation_sides(F, t, w, N);
    E = s.lhs - s.rhs;
    bool changed = false;
    auto update = [&](PolyFp& target, int degree, const char* what) {
      PolyFp delta = E.coefficient(degree);
      if (delta.is_zero()) return;
      if (delta.u_valuation() == 0) {
        throw ConvergenceError(std::string("coefficient of ") + what + " is not determined: residual at u^0, x^" +
                               std::to_string(degree));
      }
      target -= delta;
      changed = true;
    };
    update(w, static_cast<int>(q1), "g_*(u)");
    for (int k = 0; k < h; ++k) update(t[k], static_cast<int>(ipow(p, h + k)), "t_k");
    if (!changed) break;
  }
  std::vector<int> acc = accuracy_schedule(p, h);
  for (auto& a : acc) a = std::min(a, ctx.u_order);
  auto bad = tracked_violations(E, acc, 1);
  if (!bad.empty()) {
    throw ConvergenceError("functional equation inconsistent at x^" + std::to_string(bad[0].x_degree) + " u^" +
                           std::to_string(bad[0].u_degree));
  }
  SolveResult r;
  r.raw_t = t;
  r.w = w;
  r.iterations = it;
  r.data.ctx = ctx;
  r.data.accuracy = acc;
  for (int k = 0; k <= h; ++k) r.data.t.push_back(truncate_u(t[k], acc[k]));
  return r;
}

/// Lowest u-degree at which a and b differ; nullopt if equal.
inline std::optional<int> first_difference(const PolyFp& a, const PolyFp& b) {
  PolyFp d = a - b;
  if (d.is_zero()) return std::nullopt;
  return d.u_valuation();
}

struct BoundaryProbe {
  // first u-degree at which each identity fails at x^{p^{2h-1}}; nullopt = holds mod u^M
  std::optional<int> rhs_vs_formula;
  std::optional<int> lhs_vs_t;
  std::optional<int> t_vs_recursion;
  int u_order = 0;
};

/// Coefficient of x^{p^{2h-1}} on each side of the functional equation
/// compared with the closed expressions for it, using solved data.
inline BoundaryProbe boundary_probe(const SolveResult& s, const XYSeriesFp& F) {
  const RingContext& ctx = F.context();
  const int p = ctx.p, h = ctx.h;
  const int N = functional_equation_order(p, h);
  const EquationSides sides = equation_sides(F, s.raw_t, s.w, N);
  ActionData full{ctx, s.raw_t, std::vector<int>(h + 1, ctx.u_order)};
  // the closed expression, evaluated without its built-in truncation
  PolyFp formula = power_p(full.t[h - 1], h) + PolyFp::u(ctx) * power_p(full.t[h], h - 1);
  for (int j = 1; j <= p - 1; ++j) {
    const FpElem c{binom_p_over_p(p, j).mod(static_cast<std::uint32_t>(p))};
    formula -= (PolyFp::u(ctx, j * ipow(p, h - 2) + 1) * power_p(pow(full.t[1], j), 2 * h - 3) *
                power_p(pow(full.t[0], p - j), 2 * h - 2))
                   .scaled(c);
  }
  BoundaryProbe b;
  b.u_order = ctx.u_order;
  b.rhs_vs_formula = first_difference(sides.rhs.coefficient(N - 1), formula);
  b.lhs_vs_t = first_difference(sides.lhs.coefficient(N - 1), full.t[h - 1]);
  b.t_vs_recursion = first_difference(full.t[h - 1], formula);
  return b;
}

inline FpElem fp_of(const BigInt& v, int p) { return {v.mod(static_cast<std::uint32_t>(p))}; }

/// Explicit t_0 at height 3 for g = 1 + g_1 S + g_2 S^2 + g_3 S^3, modulo u^{2p^2+p+1}.
inline PolyFp t0_h3_closed_form(int p) {
  if (p == 2 || !is_prime(p)) throw DomainError("closed form needs an odd prime");
  const long p2 = static_cast<long>(p) * p;
  const RingContext ctx{p, 3, Domain::mod_p, static_cast<int>(2 * p2 + p + 1)};
  auto u = [&](long e) { return PolyFp::u(ctx, e); };
  auto g = [&](int i, long e) { return PolyFp::g(ctx, i, e); };
  auto c = [&](long v) { return PolyFp::constant(ctx, v); };
  auto cb = [&](const BigInt& v) { return PolyFp::constant(ctx, fp_of(v, p)); };
  auto sgn = [](long e) { return e % 2 == 0 ? 1L : -1L; };

  PolyFp t = c(1) + u(1) * g(1, p2);
  for (int i = 0; i <= p - 1; ++i) t -= (u((i + 1) * p) * g(1, i + 1)).scaled(fp::make(sgn(i), p));
  for (int i = 0; i <= p - 2; ++i) t -= (u((i + 1) * p + 1) * g(1, i) * g(2, p2)).scaled(fp::make(sgn(i), p));
  t += u(p2 + 1) * (g(2, p) - g(1, p - 1) * g(2, p2));
  for (int i = 0; i <= p; ++i) {
    PolyFp inner = c(sgn(p + i)) * g(1, p + 1) + cb(binom(p2 - 2, i)) * g(1, p + 1) + c(sgn(i + 1)) * g(2, 1) +
                   cb(binom(p2 - 2, i - 1)) * g(2, 1);
    t -= u(p2 + (i + 1) * p) * g(1, i) * inner;
  }
  t -= u(p2 + p + 1) * (g(3, p) - g(3, p2));
  for (int j = 1; j <= p - 1; ++j) {
    PolyFp Cj = c(sgn(p + j)) * g(1, p + 1) * g(2, p2) +
                g(1, 1) * (c(sgn(j)) * (g(3, p) - g(3, p2)) + cb(binom(p2 - 2, j)) * g(1, p) * g(2, p2)) +
                cb(binom(p2 - 2, j - 1)) * g(2, p2 + 1);
    PolyFp bracket = Cj;
    for (int i = 1; i <= j; ++i) bracket += (cb(binom_p_over_p(p, i)) * g(1, 1)).scaled(fp::make(sgn(j - i), p));
    t -= u(p2 + (j + 1) * p + 1) * g(1, j - 1) * bracket;
  }
  return t;
}

/// The nested, unexpanded height-3 expression for t_0, modulo u^{2p^2+p+1}.
inline PolyFp nested_t0_form(int p) {
  if (p == 2 || !is_prime(p)) throw DomainError("nested form needs an odd prime");
  const long p2 = static_cast<long>(p) * p;
  const RingContext ctx{p, 3, Domain::mod_p, static_cast<int>(2 * p2 + p + 1)};
  auto u = [&](long e) { return PolyFp::u(ctx, e); };
  auto g = [&](int i, long e) { return PolyFp::g(ctx, i, e); };
  const PolyFp one = PolyFp::one(ctx);

  const PolyFp a = one + u(1) * (g(1, p2) + u(p2) * g(2, p));
  PolyFp tail(ctx);
  for (int j = 1; j <= p - 1; ++j) tail += (u(j * p + 1) * g(1, j)).scaled(fp_of(binom_p_over_p(p, j), p));
  const PolyFp t0p2_pow = pow(one + u(p2) * g(1, p), static_cast<unsigned long>(p2 - 1));
  const PolyFp t1_part = g(1, 1) + u(1) * (g(2, p2) + u(p2) * g(3, p)) - u(p2) * (g(2, 1) + u(1) * g(3, p2) - tail) * t0p2_pow;
  const PolyFp t0p = one + u(p) * g(1, 1) - u(p2) * (g(1, p) + u(p) * g(2, 1)) * t0p2_pow;
  return a - u(p) * t1_part * pow(t0p, static_cast<unsigned long>(p2 - 1));
}

/// Action data with t_0 replaced by the explicit height-3 formula and the
/// remaining t_k from the recursions.
inline ActionData closed_form_action(int p) {
  const RingContext ctx = action_context(p, 3);
  UnfoldResult u = unfold_action(symbolic_element(ctx), ctx);
  ActionData d = u.data;
  const PolyFp t0 = t0_h3_closed_form(p);
  std::vector<PolyFp::Term> terms(t0.terms().begin(), t0.terms().end());
  d.t[0] = truncate_u(PolyFp::from_terms(ctx, std::move(terms)), d.accuracy[0]);
  return d;
}

/// Power series in u over F_{p^h}, dense, modulo u^M.
struct FpnUSeries {
  std::vector<FpnElem> c;

  static FpnUSeries zero(const std::shared_ptr<const FpnField>& f, int M) {
    return {std::vector<FpnElem>(M, FpnElem::constant(f, 0))};
  }
  int order() const { return static_cast<int>(c.size()); }

  friend FpnUSeries operator*(const FpnUSeries& a, const FpnUSeries& b) {
    FpnUSeries r = zero(a.c[0].field(), a.order());
    for (int i = 0; i < a.order(); ++i) {
      if (a.c[i].is_zero()) continue;
      for (int j = 0; i + j < a.order(); ++j) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    }
    return r;
  }
  friend FpnUSeries operator+(const FpnUSeries& a, const FpnUSeries& b) {
    FpnUSeries r = a;
    for (int i = 0; i < a.order(); ++i) r.c[i] = r.c[i] + b.c[i];
    return r;
  }
};

/// f with every g_i replaced by a concrete value, as a series in u.
inline FpnUSeries evaluate(const PolyFp& f, const std::vector<FpnElem>& g, int M) {
  const auto& field = g.front().field();
  FpnUSeries r = FpnUSeries::zero(field, M);
  for (const auto& [m, a] : f.terms()) {
    if (m.u_exponent() >= M) break;
    FpnElem v = FpnElem::constant(field, a.residue);
    for (int i = 0; i <= f.context().h; ++i) {
      if (int e = m.g_exponent(i)) {
        v = v * (i < static_cast<int>(g.size()) ? pow(g[i], e) : FpnElem::constant(field, 0));
      }
    }
    r.c[m.u_exponent()] = r.c[m.u_exponent()] + v;
  }
  return r;
}

/// f(w(u)) for w without constant term.
inline FpnUSeries compose_u(const FpnUSeries& f, const FpnUSeries& w) {
  const auto& field = f.c[0].field();
  FpnUSeries r = FpnUSeries::zero(field, f.order());
  FpnUSeries power = FpnUSeries::zero(field, f.order());
  power.c[0] = FpnElem::constant(field, 1);
  for (int e = 0; e < f.order(); ++e) {
    for (int i = 0; i < f.order(); ++i) r.c[i] = r.c[i] + f.c[e] * power.c[i];
    power = power * w;
  }
  return r;
}

struct CocycleProbe {
  int compared_to = 0;                  // u-order of the comparison
  std::optional<int> left_first_diff;   // t_0(g g') vs t_0(g) g_*(t_0(g'))
  std::optional<int> right_first_diff;  // t_0(g g') vs t_0(g') g'_*(t_0(g))
};

/// Exploratory: how t_0 of a product relates to the factors. The comparison
/// stops below the first u-degree at which t_0 involves g_h, since the
/// product is only known modulo S^h.
inline CocycleProbe cocycle_probe(const ConcreteElement& a, const ConcreteElement& b, const PolyFp& symbolic_t0) {
  const RingContext& ctx = symbolic_t0.context();
  const int h = ctx.h;
  int limit = ctx.u_order;
  for (const auto& [m, c] : symbolic_t0.terms()) {
    if (m.g_exponent(h)) {
      limit = std::min(limit, m.u_exponent());
      break;
    }
  }
  auto values = [&](const ConcreteElement& g) {
    std::vector<FpnElem> v;
    for (int i = 0; i <= h; ++i) {
      auto gi = g.coeff(i);
      v.push_back(gi ? *gi : FpnElem::constant(g.coeffs()[0].field(), 0));
    }
    return v;
  };
  const ConcreteElement ab = stabilizer_mul(a, b);
  const int q1 = static_cast<int>(ipow(ctx.p, h - 1));
  const FpnUSeries ta = evaluate(symbolic_t0, values(a), limit);
  const FpnUSeries tb = evaluate(symbolic_t0, values(b), limit);
  const FpnUSeries tab = evaluate(symbolic_t0, values(ab), limit);
  auto action = [&](const FpnUSeries& t0) {
    FpnUSeries w = FpnUSeries::zero(t0.c[0].field(), limit);
    FpnUSeries pw = w;
    pw.c[0] = FpnElem::constant(t0.c[0].field(), 1);
    for (int i = 0; i < q1 - 1; ++i) pw = pw * t0;
    for (int i = 0; i + 1 < limit; ++i) w.c[i + 1] = pw.c[i];
    return w;
  };
  auto diff = [&](const FpnUSeries& x, const FpnUSeries& y) -> std::optional<int> {
    for (int i = 0; i < limit; ++i) {
      if (!(x.c[i] == y.c[i])) return i;
    }
    return std::nullopt;
  };
  CocycleProbe r;
  r.compared_to = limit;
  r.left_first_diff = diff(tab, ta * compose_u(tb, action(ta)));
  r.right_first_diff = diff(tab, tb * compose_u(ta, action(tb)));
  return r;
}

}  // namespace lubin_tate
