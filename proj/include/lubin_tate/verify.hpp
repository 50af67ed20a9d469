#pragma once

// The verification matrix: named identity checks at a given (p, h), a cost
// estimator that gates expensive cells, and seeded randomized checks.

#include <array>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "lubin_tate/fgl.hpp"
#include "lubin_tate/stabilizer.hpp"

namespace lubin_tate::verify {

enum class Status { pass, fail, skipped };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    default: return "skipped";
  }
}

struct CaseConfig {
  int p = 3;
  int h = 3;
  std::uint64_t seed = 1;
  int trials = 50;
  bool allow_heavy = false;
};

struct CaseResult {
  std::string id;
  std::string tag;
  int p = 0, h = 0;
  Status status = Status::pass;
  std::string witness;  // first violating coefficient on failure
  std::string detail;
  double seconds = 0;
};

struct Outcome {
  Status status = Status::pass;
  std::string witness;
  std::string detail;

  static Outcome skip(std::string why) { return {Status::skipped, "", std::move(why)}; }
  static Outcome check(bool ok, std::string witness, std::string detail = "") {
    return {ok ? Status::pass : Status::fail, ok ? "" : std::move(witness), std::move(detail)};
  }
};

/// Rough operation counts; cells above kHeavyUnits need explicit opt-in.
inline constexpr double kHeavyUnits = 3e5;

inline double solver_units(int p, int h) {
  const double M = accuracy_schedule(p, h).front();
  return M * M * static_cast<double>(ipow(p, h));
}

inline double closed_form_units(int p, int h) {
  const double T = static_cast<double>(ipow(p, h) + 1);
  return 4.0 * T * T * p;
}

inline std::string describe_difference(const PolyFp& a, const PolyFp& b, const std::string& what) {
  PolyFp d = a - b;
  if (d.is_zero()) return "";
  const auto& [m, c] = d.terms().front();
  PolyFp single = PolyFp::monomial(d.context(), m, c);
  return what + ": first difference " + to_string(single);
}

inline std::string sdeg(std::optional<int> v) { return v ? "u^" + std::to_string(*v) : "none below u^M"; }

/// A random polynomial in u and the g's with `terms` monomials, u-degree >= min_u.
inline PolyFp random_poly(std::mt19937_64& rng, const RingContext& ctx, int terms, int min_u, int max_u) {
  std::uniform_int_distribution<int> ud(min_u, std::max(min_u, max_u));
  std::uniform_int_distribution<int> gi(1, ctx.h);
  std::uniform_int_distribution<long> ge(0, ipow(ctx.p, ctx.h) - 1);
  std::uniform_int_distribution<int> cd(1, ctx.p - 1);
  std::vector<PolyFp::Term> out;
  for (int k = 0; k < terms; ++k) {
    Monomial m = Monomial::u_power(ud(rng));
    const int i = gi(rng);
    if (long e = ge(rng)) m = m.with_g(i, e);
    out.emplace_back(m, FpElem{static_cast<std::uint32_t>(cd(rng))});
  }
  return PolyFp::from_terms(ctx, std::move(out));
}

/// A random series with exact x-adic valuation v and a unit leading coefficient.
inline XSeriesFp random_series(std::mt19937_64& rng, const RingContext& ctx, int order, int v, int extra_terms) {
  XSeriesFp s(ctx, order);
  std::uniform_int_distribution<int> lead(1, ctx.p - 1);
  s.add_term(v, PolyFp::constant(ctx, static_cast<long>(lead(rng))) + random_poly(rng, ctx, 1, 1, 3));
  if (order > v + 1) {
    std::uniform_int_distribution<int> deg(v + 1, order - 1);
    for (int k = 0; k < extra_terms; ++k) s.add_term(deg(rng), random_poly(rng, ctx, 2, 0, 4));
  }
  return s;
}

/// First degree where two series differ, or their common order.
inline int agreement_order(const XSeriesFp& a, const XSeriesFp& b) {
  const int n = std::min(a.order(), b.order());
  XSeriesFp d = a.truncated(n) - b.truncated(n);
  return d.is_zero() ? n : d.valuation();
}

struct PropertyTally {
  int cases = 0;
  int min_d = 0, max_d = 0;  // range of the hypothesis degree d
  std::string failure;
};

/// Distributor property: whenever (A +_G B)^{p^l} = (A + B)^{p^l} mod x^d, also
/// (A +_G B +_G C)^{p^l} = ((A + B) +_G C)^{p^l} mod x^d.
inline PropertyTally distributor_property(const XYSeriesFp& G, std::uint64_t seed, int trials) {
  const RingContext& ctx = G.context();
  std::mt19937_64 rng(seed);
  const int order = G.order();
  std::uniform_int_distribution<int> val(1, 3), lpick(0, 2);
  PropertyTally tally;
  for (int k = 0; k < trials; ++k) {
    const XSeriesFp A = random_series(rng, ctx, order, val(rng), 3);
    const XSeriesFp B = random_series(rng, ctx, order, val(rng), 3);
    const XSeriesFp C = random_series(rng, ctx, order, val(rng), 3);
    const int l = lpick(rng);
    const XSeriesFp ab = fgl_sum(G, {A, B}, order);
    const int d = agreement_order(power_p(ab, l), power_p(A + B, l));
    const XSeriesFp lhs = power_p(fgl_sum(G, {A, B, C}, order), l);
    const XSeriesFp rhs = power_p(fgl_sum(G, {A + B, C}, order), l);
    tally.min_d = tally.cases ? std::min(tally.min_d, d) : d;
    tally.max_d = std::max(tally.max_d, d);
    ++tally.cases;
    if (agreement_order(lhs, rhs) < d && tally.failure.empty()) {
      tally.failure = "trial " + std::to_string(k) + ": conclusion fails below x^" + std::to_string(d);
    }
  }
  return tally;
}

/// Slayer property: for v(A) = a <= v(B) = b <= a p^{h-1} and
/// d = (a(p^{h-1} - 1) + b) p^l, (A +_G B)^{p^l} = (A + B)^{p^l} mod x^d.
inline PropertyTally slayer_property(const XYSeriesFp& G, std::uint64_t seed, int trials) {
  const RingContext& ctx = G.context();
  const long q1 = ipow(ctx.p, ctx.h - 1);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> apick(1, 3), lpick(0, 2);
  PropertyTally tally;
  for (int k = 0; k < trials; ++k) {
    const int a = apick(rng);
    std::uniform_int_distribution<int> bpick(a, static_cast<int>(a * q1));
    const int b = bpick(rng);
    const int l = lpick(rng);
    const int base = static_cast<int>(a * (q1 - 1) + b);
    const XSeriesFp A = random_series(rng, ctx, base, a, 4);
    const XSeriesFp B = random_series(rng, ctx, base, b, 4);
    const XSeriesFp lhs = power_p(fgl_sum(G, {A, B}, base), l);
    const XSeriesFp rhs = power_p(A + B, l);
    const int d = base * static_cast<int>(ipow(ctx.p, l));
    tally.min_d = tally.cases ? std::min(tally.min_d, d) : d;
    tally.max_d = std::max(tally.max_d, d);
    ++tally.cases;
    if (agreement_order(lhs, rhs) < d && tally.failure.empty()) {
      tally.failure = "trial " + std::to_string(k) + " (a=" + std::to_string(a) + ", b=" + std::to_string(b) +
                      ", l=" + std::to_string(l) + "): differs below x^" + std::to_string(d);
    }
  }
  return tally;
}

/// binom(p^n, i) / p reduced mod p, for 0 < i < p^n.
inline std::vector<FpElem> cpn_coefficients(int p, int n) {
  const long d = ipow(p, n);
  std::vector<FpElem> c(d + 1, FpElem{0});
  for (long i = 1; i < d; ++i) {
    c[i] = FpElem{exact_div(binom(static_cast<unsigned long>(d), i), BigInt(p)).mod(static_cast<std::uint32_t>(p))};
  }
  return c;
}

/// C_{p^n}(a, b) for polynomial values, from its integral coefficients.
inline PolyFp cpn_value(const std::vector<FpElem>& coeffs, const PolyFp& a, const PolyFp& b) {
  const RingContext& ctx = a.context();
  const long d = static_cast<long>(coeffs.size()) - 1;
  PolyFp r(ctx);
  for (long i = 1; i < d; ++i) {
    if (coeffs[i].residue == 0) continue;
    r += (pow(a, i) * pow(b, d - i)).scaled(coeffs[i]);
  }
  return r;
}

/// Reduction of C_{p^n}(x, y) mod p equals C_p(x^{p^{n-1}}, y^{p^{n-1}}) as polynomials.
inline std::string cpn_identity_failure(int p, int n) {
  const std::vector<FpElem> big = cpn_coefficients(p, n), small = cpn_coefficients(p, 1);
  const long step = ipow(p, n - 1);
  for (long i = 1; i < static_cast<long>(big.size()) - 1; ++i) {
    FpElem expect{0};
    if (i % step == 0) expect = small[i / step];
    if (!(big[i] == expect)) {
      return "coefficient of x^" + std::to_string(i) + " y^" + std::to_string(ipow(p, n) - i) + " is " +
             std::to_string(big[i].residue) + ", expected " + std::to_string(expect.residue);
    }
  }
  return "";
}

/// binom(p^2 - 1, i) = (-1)^i mod p at random odd p in {3, 5, 7} and random i.
inline PropertyTally binomial_property(std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 2);
  PropertyTally tally;
  for (int k = 0; k < trials; ++k) {
    const int p = std::array{3, 5, 7}[pick(rng)];
    const long n = static_cast<long>(p) * p - 1;
    const long i = std::uniform_int_distribution<long>(0, n)(rng);
    const FpElem got{binom(static_cast<unsigned long>(n), i).mod(static_cast<std::uint32_t>(p))};
    ++tally.cases;
    if (!(got == fp::make(i % 2 ? -1 : 1, p)) && tally.failure.empty()) {
      tally.failure = "p = " + std::to_string(p) + ", i = " + std::to_string(i);
    }
  }
  return tally;
}

/// C_{p^n}(a, b) = C_p(a^{p^{n-1}}, b^{p^{n-1}}) mod p for random polynomial
/// values a, b and n <= 2h - 1, keeping p^n <= 3125.
inline PropertyTally cpn_property(std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 5);
  const std::array<std::pair<int, int>, 6> cells{{{3, 2}, {3, 3}, {5, 2}, {5, 3}, {7, 2}, {3, 4}}};
  std::map<std::pair<int, int>, std::vector<FpElem>> cache;
  auto coeffs = [&](int p, int n) -> const std::vector<FpElem>& {
    auto it = cache.find({p, n});
    if (it == cache.end()) it = cache.emplace(std::pair{p, n}, cpn_coefficients(p, n)).first;
    return it->second;
  };
  PropertyTally tally;
  for (int k = 0; k < trials; ++k) {
    const auto [p, h] = cells[pick(rng)];
    int top = 2 * h - 1;
    while (ipow(p, top) > 3125) --top;
    const int n = std::uniform_int_distribution<int>(1, top)(rng);
    const RingContext ctx{p, h, Domain::mod_p, 6};
    const PolyFp a = random_poly(rng, ctx, 3, 0, 3), b = random_poly(rng, ctx, 3, 0, 3);
    const long s = ipow(p, n - 1);
    const PolyFp lhs = cpn_value(coeffs(p, n), a, b);
    const PolyFp rhs = cpn_value(coeffs(p, 1), pow(a, s), pow(b, s));
    tally.min_d = tally.cases ? std::min(tally.min_d, n) : n;
    tally.max_d = std::max(tally.max_d, n);
    ++tally.cases;
    if (!(lhs == rhs) && tally.failure.empty()) {
      tally.failure = "p = " + std::to_string(p) + ", n = " + std::to_string(n) + ": " + to_string(lhs - rhs);
    }
  }
  return tally;
}

using CaseFn = std::function<Outcome(const CaseConfig&)>;

struct CaseSpec {
  std::string tag;
  std::string summary;
  CaseFn run;
};

inline Outcome case_exp_closed_form(const CaseConfig& c) {
  if (c.h <= 2) return Outcome::skip("closed form of exp needs height > 2");
  DeformationParams params = DeformationParams::make(c.p, c.h);
  const int order = static_cast<int>(params.q() + 1);
  params.x_order = order;
  const auto L = araki_log(params);
  const XSeriesQ log = log_series(L, params.rational_context(), order, c.p);
  const XSeriesQ exp = revert(log);
  for (int n = 1; n <= params.q(); ++n) {
    const PolyQ closed = lagrange_b_n(log, n);
    if (!(closed == exp.coefficient(n))) {
      return Outcome::check(false, "b_" + std::to_string(n) + ": Newton " + to_string(exp.coefficient(n)) +
                                       " vs closed form " + to_string(closed));
    }
  }
  // the general inversion formula as a third route, at the nonzero degrees
  for (int i = 1; i <= c.p; ++i) {
    const int n = static_cast<int>(i * (params.q1() - 1) + 1);
    if (!(lagrange_coefficient(log, n) == exp.coefficient(n))) {
      return Outcome::check(false, "general inversion disagrees at b_" + std::to_string(n));
    }
  }
  return Outcome::check(true, "", "b_1..b_" + std::to_string(params.q()) + " agree");
}

inline Outcome case_f_closed_form(const CaseConfig& c) {
  if (c.h <= 2) return Outcome::skip("closed form of F needs height > 2");
  if (!c.allow_heavy && closed_form_units(c.p, c.h) > kHeavyUnits) return Outcome::skip("heavy cell; pass --allow-heavy");
  const DeformationParams params = DeformationParams::make(c.p, c.h);
  const FGLData fgl = universal_F(params);
  const XYSeriesQ closed = f_closed_form(params);
  const XYSeriesQ diff = fgl.F_rational - closed;
  if (!diff.is_zero()) {
    const auto& [d, v] = *diff.terms().begin();
    return Outcome::check(false, "x^" + std::to_string(d.first) + " y^" + std::to_string(d.second) + ": " + to_string(v));
  }
  return Outcome::check(true, "", std::to_string(fgl.F_rational.terms().size()) + " coefficients, total degree <= " +
                                      std::to_string(params.q()));
}

inline Outcome case_fgl_axioms(const CaseConfig& c) {
  if (!c.allow_heavy && closed_form_units(c.p, c.h) > 10 * kHeavyUnits) return Outcome::skip("heavy cell; pass --allow-heavy");
  const DeformationParams params = DeformationParams::make(c.p, c.h);
  const FGLData fgl = universal_F(params);
  const int D3 = static_cast<int>(params.q1() + c.p + 1);
  const auto rep = verify_fgl_axioms(fgl.F_rational, D3);
  if (!rep.ok()) return Outcome::check(false, rep.witness);
  // log(F(x, y)) = log x + log y
  const int T = fgl.F_rational.order();
  const XYSeriesQ lhs = compose_xy(fgl.log, fgl.F_rational);
  const XYSeriesQ rhs = embed_x(fgl.log, T) + embed_y(fgl.log, T);
  if (!(lhs == rhs)) return Outcome::check(false, "log(F(x,y)) differs from log x + log y");
  // p-series: u x^{p^{h-1}} to first order, x^{p^h} modulo u
  const RingContext ctx = params.mod_p_context().with_u_order(1);
  const XSeriesFp ps = p_series(reduce_mod_p(fgl.F_rational, 1), params.effective_x_order());
  if (!(ps == XSeriesFp::monomial(ctx, ps.order(), static_cast<int>(params.q()), PolyFp::one(ctx)))) {
    return Outcome::check(false, "p-series modulo u is not x^{p^h}");
  }
  const XSeriesFp ps_full = p_series(fgl.F, static_cast<int>(params.q1() + 1));
  if (!(ps_full ==
        XSeriesFp::monomial(fgl.F.context(), ps_full.order(), static_cast<int>(params.q1()), PolyFp::u(fgl.F.context())))) {
    return Outcome::check(false, "p-series does not start with u x^{p^{h-1}}");
  }
  return Outcome::check(true, "", "unit, commutativity to total degree " + std::to_string(T - 1) +
                                      "; associativity to total degree " + std::to_string(D3 - 1));
}

inline Outcome case_integrality(const CaseConfig& c) {
  const DeformationParams params = DeformationParams::make(c.p, c.h);
  FGLData fgl;
  try {
    fgl = universal_F(params);
  } catch (const NotPIntegral& e) {
    return Outcome::check(false, e.what());
  }
  if (c.h <= 2) return Outcome::check(true, "", "F integral; closed-form blocks need height > 2");
  const auto blocks = f_closed_form_blocks(params);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (const auto& [d, v] : blocks[b].terms()) {
      auto val = min_p_valuation(v);
      if (val && *val < 0) {
        return Outcome::check(false, "block " + std::to_string(b) + " at x^" + std::to_string(d.first) + " y^" +
                                         std::to_string(d.second) + " has valuation " + std::to_string(*val));
      }
    }
  }
  return Outcome::check(true, "", std::to_string(blocks.size()) + " u-graded blocks integral");
}

inline Outcome case_action_on_u(const CaseConfig& c) {
  if (!c.allow_heavy && solver_units(c.p, c.h) > kHeavyUnits) return Outcome::skip("heavy cell; pass --allow-heavy");
  const RingContext ctx = action_context(c.p, c.h);
  const SolveResult s = solve_action(symbolic_element(ctx), deformation_mod_p(ctx));
  const PolyFp expect = act_on_u(s.raw_t[0]);
  return Outcome::check(s.w == expect, describe_difference(s.w, expect, "g_*(u)"),
                        "solver converged in " + std::to_string(s.iterations) + " passes, modulo u^" +
                            std::to_string(ctx.u_order));
}

inline Outcome case_recursion_vs_oracle(const CaseConfig& c) {
  if (!c.allow_heavy && solver_units(c.p, c.h) > kHeavyUnits) return Outcome::skip("heavy cell; pass --allow-heavy");
  const RingContext ctx = action_context(c.p, c.h);
  const UnfoldResult u = unfold_action(symbolic_element(ctx), ctx);
  const SolveResult s = solve_action(symbolic_element(ctx), deformation_mod_p(ctx));
  for (int k = 0; k < c.h; ++k) {
    if (!(u.data.t[k] == s.data.t[k])) {
      return Outcome::check(false, describe_difference(u.data.t[k], s.data.t[k], "t_" + std::to_string(k)));
    }
  }
  std::string acc;
  for (int k = 0; k < c.h; ++k) acc += (k ? ", " : "") + std::to_string(u.data.accuracy[k]);
  return Outcome::check(true, "", "t_0..t_{h-1} agree modulo u^(" + acc + ")");
}

inline Outcome case_t0_height3(const CaseConfig& c) {
  if (c.h != 3) return Outcome::skip("explicit t_0 is stated for height 3");
  if (c.p == 2) return Outcome::skip("explicit t_0 needs p > 2");
  const PolyFp closed = t0_h3_closed_form(c.p);
  const PolyFp nested = nested_t0_form(c.p);
  if (!(closed == nested)) return Outcome::check(false, describe_difference(closed, nested, "nested vs expanded"));
  const RingContext ctx = action_context(c.p, 3);
  std::vector<PolyFp::Term> terms(closed.terms().begin(), closed.terms().end());
  const PolyFp closed_here = PolyFp::from_terms(ctx, std::move(terms));
  const bool use_solver = c.allow_heavy || solver_units(c.p, c.h) <= kHeavyUnits;
  PolyFp engine_t0 = use_solver ? solve_action(symbolic_element(ctx), deformation_mod_p(ctx)).data.t[0]
                                : unfold_action(symbolic_element(ctx), ctx).data.t[0];
  return Outcome::check(closed_here == engine_t0, describe_difference(closed_here, engine_t0, "t_0"),
                        std::string("matches ") + (use_solver ? "functional-equation solver" : "recursion engine") +
                            " modulo u^" + std::to_string(ctx.u_order));
}

inline Outcome case_residual(const CaseConfig& c) {
  const RingContext ctx = action_context(c.p, c.h);
  const bool explicit_form = c.h == 3 && c.p > 2;
  ActionData d = explicit_form ? closed_form_action(c.p) : unfold_action(symbolic_element(ctx), ctx).data;
  const XYSeriesFp F = deformation_mod_p(ctx);
  const SymbolicElement g = symbolic_element(ctx);
  const ResidualReport rep = residual(d, g, F);
  if (!rep.ok()) {
    const auto& v = rep.violations.front();
    return Outcome::check(false, "x^" + std::to_string(v.x_degree) + " u^" + std::to_string(v.u_degree));
  }
  ActionData bumped = d;
  bumped.t[0] += PolyFp::u(ctx);
  const ResidualReport neg = residual(bumped, g, F);
  if (neg.ok()) return Outcome::check(false, "perturbing t_0 by u went undetected");
  return Outcome::check(true, "", std::string(explicit_form ? "explicit" : "recursive") +
                                      " t_0 leaves no residual; perturbation flagged at x^" +
                                      std::to_string(neg.violations.front().x_degree));
}

inline Outcome case_binomial(const CaseConfig& c) {
  if (c.p == 2) return Outcome::skip("statement is for odd p");
  const long n = static_cast<long>(c.p) * c.p - 1;
  for (long i = 0; i <= n; ++i) {
    const FpElem got{binom(static_cast<unsigned long>(n), i).mod(static_cast<std::uint32_t>(c.p))};
    if (!(got == fp::make(i % 2 ? -1 : 1, c.p))) return Outcome::check(false, "i = " + std::to_string(i));
  }
  return Outcome::check(true, "", "0 <= i <= " + std::to_string(n));
}

inline Outcome case_cpn(const CaseConfig& c) {
  for (int n = 1; n <= 2 * c.h - 1; ++n) {
    if (ipow(c.p, n) > 20000) return Outcome::check(true, "", "checked n <= " + std::to_string(n - 1));
    const std::string f = cpn_identity_failure(c.p, n);
    if (!f.empty()) return Outcome::check(false, "n = " + std::to_string(n) + ": " + f);
  }
  return Outcome::check(true, "", "n <= " + std::to_string(2 * c.h - 1));
}

inline RingContext property_context(int p, int h) { return RingContext{p, h, Domain::mod_p, 12}; }

inline Outcome case_distributor(const CaseConfig& c) {
  const XYSeriesFp F = deformation_mod_p(property_context(c.p, c.h));
  const auto t = distributor_property(F, c.seed, c.trials);
  return Outcome::check(t.failure.empty(), t.failure,
                        std::to_string(t.cases) + " random triples, d in [" + std::to_string(t.min_d) + ", " +
                            std::to_string(t.max_d) + "]");
}

inline Outcome case_slayer(const CaseConfig& c) {
  const RingContext ctx = property_context(c.p, c.h);
  const XYSeriesFp F = deformation_mod_p(ctx);
  std::mt19937_64 rng(c.seed ^ 0x9e3779b97f4a7c15ULL);
  const PolyFp t0 = PolyFp::one(ctx) + random_poly(rng, ctx, 3, 1, 5);
  const XYSeriesFp gF = substitute_u(F, act_on_u(t0));
  const auto a = slayer_property(F, c.seed, c.trials);
  const auto b = slayer_property(gF, c.seed + 1, c.trials);
  std::string fail = a.failure.empty() ? (b.failure.empty() ? "" : "twisted law: " + b.failure) : a.failure;
  return Outcome::check(fail.empty(), fail, std::to_string(a.cases + b.cases) + " random pairs (F and g_*F)");
}

inline Outcome case_rhs_lhs_probe(const CaseConfig& c) {
  if (c.h <= 2) return Outcome::skip("boundary identities need height > 2");
  if (!c.allow_heavy && solver_units(c.p, c.h) > kHeavyUnits) return Outcome::skip("heavy cell; pass --allow-heavy");
  const RingContext ctx = action_context(c.p, c.h);
  const XYSeriesFp F = deformation_mod_p(ctx);
  const SolveResult s = solve_action(symbolic_element(ctx), F);
  const BoundaryProbe b = boundary_probe(s, F);
  const int stated = static_cast<int>(ipow(c.p, c.h - 1) - 1);
  const bool ok = (!b.rhs_vs_formula || *b.rhs_vs_formula >= stated) && (!b.lhs_vs_t || *b.lhs_vs_t >= stated);
  return Outcome::check(ok, "boundary identity fails below u^" + std::to_string(stated),
                        "x^" + std::to_string(ipow(c.p, 2 * c.h - 1)) + ": rhs vs formula " + sdeg(b.rhs_vs_formula) +
                            ", lhs vs t_{h-1} " + sdeg(b.lhs_vs_t) + ", t_{h-1} vs recursion " +
                            sdeg(b.t_vs_recursion) + " (stated modulus u^" + std::to_string(stated) +
                            ", recursion modulus u^" + std::to_string(stated + 2) + ")");
}

inline const std::vector<CaseSpec>& case_table() {
  static const std::vector<CaseSpec> table = {
      {"exp-closed-form", "Newton reversion of log vs closed-form inverse", case_exp_closed_form},
      {"f-closed-form", "exp(log x + log y) vs closed form of F", case_f_closed_form},
      {"fgl-axioms", "unit, commutativity, associativity, log identity, p-series", case_fgl_axioms},
      {"integrality", "p-integrality of F and of each u-graded block", case_integrality},
      {"action-on-u", "solved g_*(u) equals u t_0^{p^{h-1}-1}", case_action_on_u},
      {"recursion-vs-oracle", "recursions vs functional-equation solver", case_recursion_vs_oracle},
      {"t0-height3", "explicit height-3 t_0 vs nested form and engines", case_t0_height3},
      {"residual", "functional-equation residual of valid data and a perturbation", case_residual},
      {"binomial-mod-p", "binom(p^2-1, i) = (-1)^i mod p", case_binomial},
      {"cpn-frobenius", "C_{p^n}(x,y) = C_p(x^{p^{n-1}}, y^{p^{n-1}}) mod p", case_cpn},
      {"distributor", "p^l-th powers of formal sums distribute", case_distributor},
      {"slayer", "formal sums collapse to sums below the valuation bound", case_slayer},
      {"rhs-lhs-probe", "u-precision of the x^{p^{2h-1}} boundary identities", case_rhs_lhs_probe},
  };
  return table;
}

inline const CaseSpec* find_case(const std::string& tag) {
  for (const auto& c : case_table()) {
    if (c.tag == tag) return &c;
  }
  return nullptr;
}

inline CaseResult run_case(const CaseSpec& spec, const CaseConfig& cfg) {
  CaseResult r;
  r.tag = spec.tag;
  r.id = spec.tag + "@p" + std::to_string(cfg.p) + "h" + std::to_string(cfg.h);
  r.p = cfg.p;
  r.h = cfg.h;
  const auto start = std::chrono::steady_clock::now();
  try {
    Outcome o = spec.run(cfg);
    r.status = o.status;
    r.witness = std::move(o.witness);
    r.detail = std::move(o.detail);
  } catch (const std::exception& e) {
    r.status = Status::fail;
    r.witness = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Runs the jobs on a small thread pool; results keep job order.
inline std::vector<CaseResult> run_all(const std::vector<std::pair<const CaseSpec*, CaseConfig>>& jobs, unsigned workers) {
  std::vector<CaseResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) results[i] = run_case(*jobs[i].first, jobs[i].second);
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace lubin_tate::verify
