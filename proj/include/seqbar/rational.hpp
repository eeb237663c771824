#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "seqbar/errors.hpp"

namespace seqbar {

/// Exact rational number used for every measure, threshold and filtration time.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

/// Decimal digits only; leading zeros are stripped because cpp_int reads them as octal.
inline Integer parse_integer(std::string_view s) {
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  return Integer(std::string(s));
}

}  // namespace detail

/// Parses "p/q", an integer, or a finite decimal such as "0.25". Exponent notation is
/// rejected. Throws UsageError on anything else.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  auto fail = [&]() -> Rational {
    throw UsageError("not an exact rational: '" + std::string(text) + "'");
  };
  if (s.empty()) return fail();

  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den)) return fail();
    Integer d = detail::parse_integer(den);
    if (d == 0) throw UsageError("zero denominator in '" + std::string(text) + "'");
    value = Rational(detail::parse_integer(num), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) return fail();
    if (!whole.empty() && !detail::all_digits(whole)) return fail();
    if (!frac.empty() && !detail::all_digits(frac)) return fail();
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Integer w = whole.empty() ? Integer(0) : detail::parse_integer(whole);
    Integer f = frac.empty() ? Integer(0) : detail::parse_integer(frac);
    value = Rational(w * scale + f, scale);
  } else {
    if (!detail::all_digits(s)) return fail();
    value = Rational(detail::parse_integer(s));
  }
  return negative ? Rational(-value) : value;
}

/// Canonical text form: "p/q" in lowest terms, or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  const Integer& num = boost::multiprecision::numerator(r);
  const Integer& den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace seqbar
