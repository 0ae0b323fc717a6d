#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace densitylab {

// All set coordinates live in [1, kCoordCap]. The cap leaves headroom so that
// window arithmetic (n + m_s) and cross-multiplied rational comparisons stay
// inside the signed 128-bit range.
inline constexpr std::int64_t kCoordCap = std::int64_t{1} << 62;

// Default materialization horizon for sets constructed without an explicit one.
inline constexpr std::int64_t kDefaultHorizon = 2147483647; // 2^31 - 1

class Error : public std::runtime_error {
 public:
  enum class Code {
    horizon_exceeded,
    invalid_spec,
    overflow,
    insufficient_members,
    unknown_rule,
  };

  Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

[[noreturn]] inline void throw_overflow(const std::string& what) {
  throw Error(Error::Code::overflow, what);
}

// Exact rational with int64 numerator/denominator, always normalized
// (den > 0, gcd(|num|, den) == 1). Intermediate products go through
// __int128; anything that would not normalize back into int64 throws.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n) : num(n), den(1) {}
  Rational(std::int64_t n, std::int64_t d) { *this = make(n, d); }

  static Rational make(std::int64_t n, std::int64_t d) {
    if (d == 0) throw Error(Error::Code::invalid_spec, "rational with zero denominator");
    if (d < 0) { n = -n; d = -d; }
    const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    Rational r;
    r.num = g ? n / g : 0;
    r.den = g ? d / g : 1;
    return r;
  }

  static Rational from_i128(__int128 n, __int128 d);

  bool is_integer() const { return den == 1; }
  bool is_zero() const { return num == 0; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }

  std::int64_t floor() const {
    std::int64_t q = num / den;
    if (num % den != 0 && num < 0) --q;
    return q;
  }
  std::int64_t ceil() const {
    std::int64_t q = num / den;
    if (num % den != 0 && num > 0) ++q;
    return q;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_i128(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
                     static_cast<__int128>(a.den) * b.den);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_i128(static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den,
                     static_cast<__int128>(a.den) * b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_i128(static_cast<__int128>(a.num) * b.num,
                     static_cast<__int128>(a.den) * b.den);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw Error(Error::Code::invalid_spec, "rational division by zero");
    return from_i128(static_cast<__int128>(a.num) * b.den,
                     static_cast<__int128>(a.den) * b.num);
  }
  Rational operator-() const { Rational r; r.num = -num; r.den = den; return r; }
};

inline __int128 gcd_i128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) { __int128 t = a % b; a = b; b = t; }
  return a;
}

inline Rational Rational::from_i128(__int128 n, __int128 d) {
  if (d == 0) throw Error(Error::Code::invalid_spec, "rational with zero denominator");
  if (d < 0) { n = -n; d = -d; }
  const __int128 g = gcd_i128(n, d);
  if (g) { n /= g; d /= g; }
  constexpr __int128 lo = std::numeric_limits<std::int64_t>::min();
  constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
  if (n < lo || n > hi || d > hi) throw_overflow("rational out of 64-bit range");
  Rational r;
  r.num = static_cast<std::int64_t>(n);
  r.den = static_cast<std::int64_t>(d == 0 ? 1 : d);
  return r;
}

// Parses "7", "-3/4", "1.25", "3e2". Decimal forms become exact rationals.
Rational parse_rational(const std::string& text);

// Extended nonnegative-ish rational: a finite Rational or +infinity.
// Densities never go negative, but differences in intermediate checks may.
struct ExtRational {
  Rational value;
  bool infinite = false;

  ExtRational() = default;
  ExtRational(Rational r) : value(r) {}
  ExtRational(std::int64_t n) : value(n) {}
  static ExtRational inf() { ExtRational e; e.infinite = true; return e; }

  bool is_inf() const { return infinite; }
  bool is_zero() const { return !infinite && value.is_zero(); }
  double to_double() const {
    return infinite ? std::numeric_limits<double>::infinity() : value.to_double();
  }
  std::string str() const { return infinite ? "inf" : value.str(); }

  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return a.value == b.value;
  }
  friend bool operator!=(const ExtRational& a, const ExtRational& b) { return !(a == b); }
  friend bool operator<(const ExtRational& a, const ExtRational& b) {
    if (a.infinite) return false;
    if (b.infinite) return true;
    return a.value < b.value;
  }
  friend bool operator>(const ExtRational& a, const ExtRational& b) { return b < a; }
  friend bool operator<=(const ExtRational& a, const ExtRational& b) { return !(b < a); }
  friend bool operator>=(const ExtRational& a, const ExtRational& b) { return !(a < b); }

  friend ExtRational operator+(const ExtRational& a, const ExtRational& b) {
    if (a.infinite || b.infinite) return inf();
    return ExtRational(a.value + b.value);
  }
  friend ExtRational operator*(const ExtRational& a, const ExtRational& b) {
    if (a.infinite || b.infinite) {
      if (a.is_zero() || b.is_zero()) return ExtRational(Rational(0));
      return inf();
    }
    return ExtRational(a.value * b.value);
  }
};

}  // namespace densitylab
