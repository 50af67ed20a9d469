#pragma once

// Exact integer and rational scalars, p-adic valuations and reduction to
// prime fields. BigInt and Rational are thin value wrappers over GMP.

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "lubin_tate/errors.hpp"

namespace lubin_tate {

class BigInt {
 public:
  BigInt() = default;
  BigInt(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  explicit BigInt(mpz_class v) : v_(std::move(v)) {}

  static BigInt parse(std::string_view text) {
    mpz_class v;
    if (text.empty() || v.set_str(std::string(text), 10) != 0) {
      throw ParseError("invalid integer literal '" + std::string(text) + "'");
    }
    return BigInt(std::move(v));
  }

  static BigInt pow(const BigInt& base, unsigned long exp) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.v_.get_mpz_t(), exp);
    return BigInt(std::move(r));
  }

  const mpz_class& raw() const { return v_; }
  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }
  std::string str() const { return v_.get_str(10); }

  /// Least nonnegative residue modulo m (m > 0).
  std::uint32_t mod(std::uint32_t m) const {
    return static_cast<std::uint32_t>(mpz_fdiv_ui(v_.get_mpz_t(), m));
  }

  BigInt& operator+=(const BigInt& o) { v_ += o.v_; return *this; }
  BigInt& operator-=(const BigInt& o) { v_ -= o.v_; return *this; }
  BigInt& operator*=(const BigInt& o) { v_ *= o.v_; return *this; }

  friend BigInt operator+(BigInt a, const BigInt& b) { return a += b; }
  friend BigInt operator-(BigInt a, const BigInt& b) { return a -= b; }
  friend BigInt operator*(BigInt a, const BigInt& b) { return a *= b; }
  friend BigInt operator-(const BigInt& a) { return BigInt(mpz_class(-a.v_)); }

  /// Exact quotient; throws if b does not divide a.
  friend BigInt exact_div(const BigInt& a, const BigInt& b) {
    if (b.is_zero()) throw ArithmeticError("division by zero");
    if (!mpz_divisible_p(a.v_.get_mpz_t(), b.v_.get_mpz_t())) {
      throw ArithmeticError("inexact integer division");
    }
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), a.v_.get_mpz_t(), b.v_.get_mpz_t());
    return BigInt(std::move(q));
  }

  friend bool operator==(const BigInt& a, const BigInt& b) { return a.v_ == b.v_; }
  friend bool operator<(const BigInt& a, const BigInt& b) { return a.v_ < b.v_; }
  friend std::ostream& operator<<(std::ostream& os, const BigInt& a) { return os << a.str(); }

 private:
  mpz_class v_;
};

/// Canonical rational: gcd(num, den) = 1, den > 0, zero is 0/1.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& v) : v_(v.raw()) {}  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& num, const BigInt& den) {
    if (den.is_zero()) throw ArithmeticError("division by zero");
    v_ = mpq_class(num.raw(), den.raw());
    v_.canonicalize();
  }
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Accepts "n" or "n/d".
  static Rational parse(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(BigInt::parse(text));
    return Rational(BigInt::parse(text.substr(0, slash)), BigInt::parse(text.substr(slash + 1)));
  }

  BigInt numerator() const { return BigInt(mpz_class(v_.get_num())); }
  BigInt denominator() const { return BigInt(mpz_class(v_.get_den())); }
  const mpq_class& raw() const { return v_; }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  std::string str() const { return v_.get_str(10); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw ArithmeticError("division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend Rational pow(const Rational& base, long exp) {
    if (exp < 0) {
      if (base.is_zero()) throw ArithmeticError("division by zero");
      return pow(Rational(1) / base, -exp);
    }
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.v_.get_num_mpz_t(), static_cast<unsigned long>(exp));
    mpz_pow_ui(den.get_mpz_t(), base.v_.get_den_mpz_t(), static_cast<unsigned long>(exp));
    return Rational(mpq_class(num, den));
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::ostream& operator<<(std::ostream& os, const Rational& a) { return os << a.str(); }

 private:
  mpq_class v_;
};

/// Residue class in F_p. The modulus lives in the ring context, not here.
struct FpElem {
  std::uint32_t residue = 0;
  friend bool operator==(FpElem, FpElem) = default;
};

namespace fp {

inline FpElem make(long v, std::uint32_t p) {
  long r = v % static_cast<long>(p);
  if (r < 0) r += p;
  return {static_cast<std::uint32_t>(r)};
}
inline FpElem add(FpElem a, FpElem b, std::uint32_t p) {
  std::uint32_t s = a.residue + b.residue;
  return {s >= p ? s - p : s};
}
inline FpElem sub(FpElem a, FpElem b, std::uint32_t p) {
  return {a.residue >= b.residue ? a.residue - b.residue : a.residue + p - b.residue};
}
inline FpElem neg(FpElem a, std::uint32_t p) { return {a.residue == 0 ? 0 : p - a.residue}; }
inline FpElem mul(FpElem a, FpElem b, std::uint32_t p) {
  return {static_cast<std::uint32_t>(static_cast<std::uint64_t>(a.residue) * b.residue % p)};
}
inline FpElem pow(FpElem a, std::uint64_t e, std::uint32_t p) {
  FpElem r{1 % p};
  while (e) {
    if (e & 1) r = mul(r, a, p);
    a = mul(a, a, p);
    e >>= 1;
  }
  return r;
}
inline FpElem inv(FpElem a, std::uint32_t p) {
  if (a.residue == 0) throw ArithmeticError("inverse of zero in F_p");
  return pow(a, p - 2, p);
}

}  // namespace fp

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// v_p of a nonzero integer.
inline long p_valuation(const BigInt& n, unsigned long p) {
  if (n.is_zero()) throw ArithmeticError("valuation of zero integer is infinite");
  mpz_class rest;
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.raw().get_mpz_t(), mpz_class(p).get_mpz_t()));
}

/// v_p(num) - v_p(den); std::nullopt stands for +infinity (r = 0).
inline std::optional<long> p_valuation(const Rational& r, unsigned long p) {
  if (!is_prime(static_cast<long>(p))) throw DomainError("valuation requires a prime");
  if (r.is_zero()) return std::nullopt;
  return p_valuation(r.numerator(), p) - p_valuation(r.denominator(), p);
}

inline FpElem reduce_mod_p(const Rational& r, std::uint32_t p) {
  auto v = p_valuation(r, p);
  if (v && *v < 0) throw NotPIntegral("not p-integral: " + r.str() + " at p = " + std::to_string(p));
  if (!v) return {0};
  FpElem num{r.numerator().mod(p)};
  FpElem den{r.denominator().mod(p)};
  return fp::mul(num, fp::inv(den, p), p);
}

/// Binomial coefficient with the convention binom(n, k) = 0 for k < 0 or k > n.
inline BigInt binom(unsigned long n, long k) {
  if (k < 0 || static_cast<unsigned long>(k) > n) return BigInt(0);
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, static_cast<unsigned long>(k));
  return BigInt(std::move(r));
}

/// The integer binom(p, j) / p for 1 <= j <= p - 1.
inline BigInt binom_p_over_p(unsigned long p, long j) {
  if (j < 1 || j > static_cast<long>(p) - 1) {
    throw DomainError("binom(p, j)/p requires 1 <= j <= p - 1");
  }
  return exact_div(binom(p, j), BigInt(static_cast<long>(p)));
}

inline long ipow(long base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace lubin_tate
