#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace capri {

/// Exact scalar used when bit-for-bit reproducible arithmetic is requested.
using Rational = mpq_class;

/// Numeric policy: every algorithm in this library is templated on the scalar
/// type `T`, which is either `Rational` (exact, zero tolerance) or `double`
/// (tolerance 1e-6 for contract checks, 1e-9 for pivoting).
template <class T>
struct NumericTraits;

template <>
struct NumericTraits<Rational> {
  static constexpr bool exact = true;
  static Rational tolerance() { return Rational(0); }
  static Rational pivot_eps() { return Rational(0); }
  static double to_double(const Rational& v) { return v.get_d(); }
  static Rational from_long(long v) { return Rational(v); }
  static Rational from_double(double v) { return Rational(v); }
};

template <>
struct NumericTraits<double> {
  static constexpr bool exact = false;
  static double tolerance() { return 1e-6; }
  static double pivot_eps() { return 1e-9; }
  static double to_double(double v) { return v; }
  static double from_long(long v) { return static_cast<double>(v); }
  static double from_double(double v) { return v; }
};

template <class T>
double to_double(const T& v) {
  return NumericTraits<T>::to_double(v);
}

/// Smallest integer >= v. Used by the capacity schedule; the float overload
/// nudges away values like 5.0000000000000009 that arise from (1+eps)*k.
inline long ceil_to_long(const Rational& v) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), v.get_num().get_mpz_t(), v.get_den().get_mpz_t());
  return q.get_si();
}

inline long ceil_to_long(double v) { return static_cast<long>(std::ceil(v - 1e-9)); }

/// Parses "7", "-2.5" or "25/12" into the scalar type. Fraction strings keep
/// exact mode exact; plain decimals are converted without rounding.
template <class T>
T parse_number(const std::string& s);

template <>
inline Rational parse_number<Rational>(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty number literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad fraction literal: " + s);
    q.canonicalize();
    return q;
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad integer literal: " + s);
    return q;
  }
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  bool neg = false;
  if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
    neg = digits[0] == '-';
    digits = digits.substr(1);
  }
  if (digits.empty()) throw std::invalid_argument("bad decimal literal: " + s);
  mpz_class num(digits, 10);
  mpz_class den(1);
  for (size_t i = 0; i < s.size() - dot - 1; ++i) den *= 10;
  Rational q(num, den);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

template <>
inline double parse_number<double>(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos)
    return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
  return std::stod(s);
}

inline std::string format_number(const Rational& v) { return v.get_str(); }

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// H_n = 1 + 1/2 + ... + 1/n.
template <class T>
T harmonic(long n) {
  T h(0);
  for (long i = 1; i <= n; ++i) h += T(1) / NumericTraits<T>::from_long(i);
  return h;
}

template <>
inline Rational harmonic<Rational>(long n) {
  Rational h(0);
  for (long i = 1; i <= n; ++i) h += Rational(1, i);
  return h;
}

}  // namespace capri
