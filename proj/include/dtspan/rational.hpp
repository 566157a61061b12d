#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "dtspan/error.hpp"

namespace dtspan {

/// Arbitrary precision rational. Everything in the library is exact.
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Parse "p", "-p" or "p/q" into a canonical rational. Whitespace, decimal
/// points and exponents are rejected so that every accepted string has one
/// exact meaning.
inline Rational parse_rational(const std::string& text) {
  static const std::regex pattern(R"(^-?[0-9]+(/[0-9]+)?$)");
  if (!std::regex_match(text, pattern)) {
    fail(Errc::InputParseError, "not a rational literal: '" + text + "'");
  }
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    mpz_class den(text.substr(slash + 1), 10);
    if (den == 0) fail(Errc::InputParseError, "zero denominator: '" + text + "'");
    mpz_class num(text.substr(0, slash), 10);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  return Rational(mpz_class(text, 10));
}

/// Canonical text form: "p" for integers, otherwise "p/q" with q > 0 and
/// gcd(p, q) = 1. parse_rational(to_string(x)) == x always holds.
inline std::string to_string(const Rational& value) {
  Rational q(value);
  q.canonicalize();
  return q.get_str(10);
}

inline Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational rmin(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational positive_part(const Rational& a) { return a < 0 ? Rational(0) : a; }

inline Rational max_of(const RationalVector& values) {
  ensure(!values.empty(), "max_of: empty vector");
  return *std::max_element(values.begin(), values.end());
}

inline Rational min_of(const RationalVector& values) {
  ensure(!values.empty(), "min_of: empty vector");
  return *std::min_element(values.begin(), values.end());
}

/// A rational extended by -inf/+inf, modelled as an absent value plus a side.
struct ExtendedRational {
  enum class Kind { NegInf, Finite, PosInf };
  Kind kind = Kind::Finite;
  Rational value;

  static ExtendedRational neg_inf() { return {Kind::NegInf, Rational(0)}; }
  static ExtendedRational pos_inf() { return {Kind::PosInf, Rational(0)}; }
  static ExtendedRational finite(const Rational& v) { return {Kind::Finite, v}; }

  bool is_finite() const { return kind == Kind::Finite; }

  friend bool operator<(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    return a.kind == Kind::Finite && a.value < b.value;
  }
  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
    return a.kind == b.kind && (a.kind != Kind::Finite || a.value == b.value);
  }
};

inline std::string to_string(const ExtendedRational& value) {
  switch (value.kind) {
    case ExtendedRational::Kind::NegInf: return "-inf";
    case ExtendedRational::Kind::PosInf: return "inf";
    case ExtendedRational::Kind::Finite: break;
  }
  return to_string(value.value);
}

}  // namespace dtspan
