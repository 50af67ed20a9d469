#pragma once

// JSON encoding of rings, polynomials, series and action data.

#include <string>
#include <vector>

#include <json.hpp>

#include "lubin_tate/errors.hpp"
#include "lubin_tate/polyring.hpp"
#include "lubin_tate/series.hpp"
#include "lubin_tate/stabilizer.hpp"

namespace lubin_tate::io {

using json = nlohmann::ordered_json;

inline json to_json(const RingContext& ctx) {
  json j;
  j["p"] = ctx.p;
  j["h"] = ctx.h;
  j["domain"] = ctx.domain == Domain::rational ? "rational" : "mod_p";
  j["u_order"] = ctx.u_order == kUnboundedOrder ? json(nullptr) : json(ctx.u_order);
  return j;
}

inline RingContext context_from_json(const json& j) {
  try {
    RingContext ctx;
    ctx.p = j.at("p").get<int>();
    ctx.h = j.at("h").get<int>();
    const std::string d = j.at("domain").get<std::string>();
    if (d == "rational") ctx.domain = Domain::rational;
    else if (d == "mod_p") ctx.domain = Domain::mod_p;
    else throw ParseError("unknown domain '" + d + "'");
    ctx.u_order = j.at("u_order").is_null() ? kUnboundedOrder : j.at("u_order").get<int>();
    ctx.validate();
    return ctx;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad ring context: ") + e.what());
  }
}

inline json monomial_to_json(const Monomial& m, int h) {
  json out = json::array();
  if (int e = m.u_exponent()) out.push_back(json::array({"u", e}));
  for (int i = 0; i <= h; ++i) {
    if (int e = m.g_exponent(i)) out.push_back(json::array({VarId::g(i).name(), e}));
  }
  return out;
}

inline Monomial monomial_from_json(const json& j, const RingContext& ctx) {
  Monomial m;
  for (const auto& entry : j) {
    const VarId v = VarId::parse(entry.at(0).get<std::string>());
    const long e = entry.at(1).get<long>();
    if (e < 1) throw ParseError("exponents must be positive");
    if (v.kind == VarId::Kind::u) {
      m = m.with_u(m.u_exponent() + e);
    } else {
      if (v.index > ctx.h) throw ParseError("variable " + v.name() + " exceeds the height");
      m = m.with_g(v.index, g_reduce(m.g_exponent(v.index) + e, ctx.p, ctx.h));
    }
  }
  return m;
}

template <class C>
json to_json(const Poly<C>& a) {
  json out = json::array();
  for (const auto& [m, c] : a.terms()) {
    out.push_back({{"monomial", monomial_to_json(m, a.context().h)}, {"coeff", CoeffOps<C>::str(c)}});
  }
  return out;
}

template <class C>
Poly<C> poly_from_json(const json& j, const RingContext& ctx) {
  try {
    std::vector<typename Poly<C>::Term> terms;
    for (const auto& t : j) {
      terms.emplace_back(monomial_from_json(t.at("monomial"), ctx), CoeffOps<C>::parse(t.at("coeff").get<std::string>(), ctx));
    }
    return Poly<C>::from_terms(ctx, std::move(terms));
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad polynomial: ") + e.what());
  }
}

template <class C>
json to_json(const XSeries<C>& f) {
  json terms = json::array();
  for (const auto& [n, c] : f.terms()) terms.push_back({{"deg", n}, {"coeff", to_json(c)}});
  return {{"order", f.order()}, {"terms", terms}};
}

template <class C>
json to_json(const XYSeries<C>& f) {
  json terms = json::array();
  for (const auto& [d, c] : f.terms()) terms.push_back({{"deg", {d.first, d.second}}, {"coeff", to_json(c)}});
  return {{"order", f.order()}, {"terms", terms}};
}

template <class C>
XSeries<C> xseries_from_json(const json& j, const RingContext& ctx) {
  try {
    XSeries<C> f(ctx, j.at("order").get<int>());
    for (const auto& t : j.at("terms")) f.add_term(t.at("deg").get<int>(), poly_from_json<C>(t.at("coeff"), ctx));
    return f;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad series: ") + e.what());
  }
}

template <class C>
XYSeries<C> xyseries_from_json(const json& j, const RingContext& ctx) {
  try {
    XYSeries<C> f(ctx, j.at("order").get<int>());
    for (const auto& t : j.at("terms")) {
      const auto& d = t.at("deg");
      f.add_term(d.at(0).get<int>(), d.at(1).get<int>(), poly_from_json<C>(t.at("coeff"), ctx));
    }
    return f;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad bivariate series: ") + e.what());
  }
}

inline json to_json(const ActionData& d) {
  json t = json::array();
  for (std::size_t k = 0; k < d.t.size(); ++k) {
    t.push_back({{"index", k}, {"accuracy", d.accuracy[k]}, {"series", to_json(d.t[k])}});
  }
  return {{"context", to_json(d.ctx)}, {"t", t}};
}

inline ActionData action_from_json(const json& j) {
  try {
    ActionData d;
    d.ctx = context_from_json(j.at("context"));
    if (d.ctx.domain != Domain::mod_p) throw ParseError("action data must live modulo p");
    const auto& t = j.at("t");
    d.t.assign(t.size(), PolyFp(d.ctx));
    d.accuracy.assign(t.size(), 0);
    for (const auto& entry : t) {
      const auto k = entry.at("index").get<std::size_t>();
      if (k >= t.size()) throw ParseError("t index out of range");
      d.t[k] = poly_from_json<FpElem>(entry.at("series"), d.ctx);
      d.accuracy[k] = entry.at("accuracy").get<int>();
    }
    check_action_shape(d);
    return d;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad action data: ") + e.what());
  }
}

inline json to_json(const Violation& v, int h) {
  return {{"x_degree", v.x_degree},
          {"u_degree", v.u_degree},
          {"monomial", monomial_to_json(v.monomial, h)},
          {"coefficient", std::to_string(v.coefficient.residue)}};
}

inline json to_json(const std::vector<Violation>& vs, int h) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(to_json(v, h));
  return out;
}

}  // namespace lubin_tate::io
