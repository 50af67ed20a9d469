#pragma once

// Concrete arithmetic in F_{p^h} = F_p[a]/(m(a)) for a user-supplied monic
// irreducible m. Used for spot checks with numeric group elements.

#include <cctype>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lubin_tate/errors.hpp"
#include "lubin_tate/scalars.hpp"

namespace lubin_tate {

namespace detail {

using FpPoly = std::vector<std::uint32_t>;  // low degree first

inline void trim(FpPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

/// Remainder of a modulo a monic b over F_p.
inline FpPoly poly_mod(FpPoly a, const FpPoly& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const std::uint32_t lead = a.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      a[shift + i] = fp::sub({a[shift + i]}, fp::mul({lead}, {b[i]}, p), p).residue;
    }
    trim(a);
  }
  return a;
}

}  // namespace detail

class FpnField {
 public:
  /// `modulus` lists the coefficients of a monic degree-h polynomial, low
  /// degree first (h + 1 entries, last one 1).
  FpnField(int p, std::vector<std::uint32_t> modulus, std::string generator = "a")
      : p_(p), modulus_(std::move(modulus)), generator_(std::move(generator)) {
    if (!is_prime(p)) throw DomainError("field characteristic must be prime");
    if (modulus_.size() < 2 || modulus_.back() != 1) throw DomainError("field modulus must be monic of degree >= 1");
    for (auto c : modulus_) {
      if (c >= static_cast<std::uint32_t>(p)) throw DomainError("modulus coefficient out of range");
    }
    if (!irreducible()) throw DomainError("field modulus is reducible over F_" + std::to_string(p));
  }

  /// Parses "a^3 + 2*a + 1" style text in the given generator.
  static std::vector<std::uint32_t> parse_poly(const std::string& text, int p, const std::string& gen);

  int p() const { return p_; }
  int degree() const { return static_cast<int>(modulus_.size()) - 1; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  const std::string& generator() const { return generator_; }

 private:
  bool irreducible() const {
    // trial division by every monic polynomial of degree <= n/2
    const int n = degree();
    const auto P = static_cast<std::uint32_t>(p_);
    for (int d = 1; 2 * d <= n; ++d) {
      const long count = ipow(p_, d);
      for (long idx = 0; idx < count; ++idx) {
        detail::FpPoly cand(d + 1, 0);
        long rest = idx;
        for (int i = 0; i < d; ++i) {
          cand[i] = static_cast<std::uint32_t>(rest % p_);
          rest /= p_;
        }
        cand[d] = 1;
        if (detail::poly_mod(modulus_, cand, P).empty()) return false;
      }
    }
    return true;
  }

  int p_;
  std::vector<std::uint32_t> modulus_;
  std::string generator_;
};

class FpnElem {
 public:
  FpnElem() = default;
  FpnElem(std::shared_ptr<const FpnField> field, std::vector<std::uint32_t> coeffs) : field_(std::move(field)) {
    const auto P = static_cast<std::uint32_t>(field_->p());
    for (auto& c : coeffs) c %= P;
    c_ = detail::poly_mod(std::move(coeffs), field_->modulus(), P);
    c_.resize(field_->degree(), 0);
  }

  static FpnElem constant(std::shared_ptr<const FpnField> field, long v) {
    return FpnElem(field, {fp::make(v, static_cast<std::uint32_t>(field->p())).residue});
  }
  static FpnElem parse(std::shared_ptr<const FpnField> field, const std::string& text) {
    return FpnElem(field, FpnField::parse_poly(text, field->p(), field->generator()));
  }

  const std::shared_ptr<const FpnField>& field() const { return field_; }
  const std::vector<std::uint32_t>& coeffs() const { return c_; }
  bool is_zero() const {
    for (auto c : c_) {
      if (c) return false;
    }
    return true;
  }

  friend FpnElem operator+(const FpnElem& a, const FpnElem& b) {
    check(a, b);
    std::vector<std::uint32_t> r(a.c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.c_[i] + b.c_[i];
    return FpnElem(a.field_, std::move(r));
  }
  friend FpnElem operator-(const FpnElem& a) {
    const auto P = static_cast<std::uint32_t>(a.field_->p());
    std::vector<std::uint32_t> r(a.c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = fp::neg({a.c_[i]}, P).residue;
    return FpnElem(a.field_, std::move(r));
  }
  friend FpnElem operator-(const FpnElem& a, const FpnElem& b) { return a + (-b); }
  friend FpnElem operator*(const FpnElem& a, const FpnElem& b) {
    check(a, b);
    const auto P = static_cast<std::uint32_t>(a.field_->p());
    std::vector<std::uint32_t> r(a.c_.size() + b.c_.size(), 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        r[i + j] = fp::add({r[i + j]}, fp::mul({a.c_[i]}, {b.c_[j]}, P), P).residue;
      }
    }
    return FpnElem(a.field_, std::move(r));
  }
  friend bool operator==(const FpnElem& a, const FpnElem& b) { return a.field_ == b.field_ && a.c_ == b.c_; }

  friend FpnElem pow(FpnElem base, unsigned long long e) {
    FpnElem r = constant(base.field_, 1);
    while (e) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  /// sigma^k: x -> x^{p^k}.
  FpnElem frobenius(int k) const {
    FpnElem r = *this;
    for (int i = 0; i < k; ++i) r = pow(r, static_cast<unsigned long long>(field_->p()));
    return r;
  }

  std::string str() const {
    std::string s;
    for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) {
      if (!c_[i]) continue;
      if (!s.empty()) s += " + ";
      const std::string g = field_->generator();
      if (i == 0) s += std::to_string(c_[i]);
      else s += (c_[i] == 1 ? "" : std::to_string(c_[i]) + "*") + g + (i == 1 ? "" : "^" + std::to_string(i));
    }
    return s.empty() ? "0" : s;
  }

 private:
  static void check(const FpnElem& a, const FpnElem& b) {
    if (a.field_ != b.field_) throw ContextMismatch("elements of different finite fields");
  }

  std::shared_ptr<const FpnField> field_;
  std::vector<std::uint32_t> c_;
};

inline std::vector<std::uint32_t> FpnField::parse_poly(const std::string& text, int p, const std::string& gen) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  }
  if (s.empty()) throw ParseError("empty field element");
  std::vector<long> acc;
  std::size_t pos = 0;
  auto number = [&](std::size_t& at) {
    std::size_t start = at;
    while (at < s.size() && std::isdigit(static_cast<unsigned char>(s[at]))) ++at;
    if (start == at) throw ParseError("expected a number in '" + text + "'");
    return std::stol(s.substr(start, at - start));
  };
  while (pos < s.size()) {
    long sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (pos != 0) {
      throw ParseError("expected '+' or '-' in '" + text + "'");
    }
    long coeff = 1;
    long exp = 0;
    bool have_coeff = false;
    if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      coeff = number(pos);
      have_coeff = true;
      if (pos < s.size() && s[pos] == '*') ++pos;
      else if (pos < s.size() && s.compare(pos, gen.size(), gen) != 0 && s[pos] != '+' && s[pos] != '-') {
        throw ParseError("unexpected character in '" + text + "'");
      }
    }
    if (s.compare(pos, gen.size(), gen) == 0) {
      pos += gen.size();
      exp = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        exp = number(pos);
      }
    } else if (!have_coeff) {
      throw ParseError("unexpected token in '" + text + "'");
    }
    if (static_cast<long>(acc.size()) <= exp) acc.resize(exp + 1, 0);
    acc[exp] += sign * coeff;
  }
  std::vector<std::uint32_t> out;
  for (long c : acc) out.push_back(fp::make(c, static_cast<std::uint32_t>(p)).residue);
  return out;
}

}  // namespace lubin_tate
