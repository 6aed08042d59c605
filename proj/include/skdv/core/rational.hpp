#pragma once

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace skdv {

// Expression templates off: mixing Rational with DiffPoly operators needs
// plain values.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;

inline std::string to_string(const Rational& q) {
  const Integer num = boost::multiprecision::numerator(q);
  const Integer den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline bool is_integer(const Rational& q) {
  return boost::multiprecision::denominator(q) == 1;
}

/// "3", "-1/2" or "0.25"; throws std::invalid_argument otherwise.
inline Rational parse_rational(const std::string& text) {
  std::string s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.erase(0, 1);
  }
  auto digits = [](const std::string& d) {
    return !d.empty() && std::all_of(d.begin(), d.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  };
  Rational q;
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const std::string n = s.substr(0, slash), d = s.substr(slash + 1);
    if (!digits(n) || !digits(d) || Integer(d) == 0) throw std::invalid_argument("bad rational '" + text + "'");
    q = Rational(Integer(n), Integer(d));
  } else if (const auto dot = s.find('.'); dot != std::string::npos) {
    const std::string w = s.substr(0, dot), f = s.substr(dot + 1);
    if ((!w.empty() && !digits(w)) || (!f.empty() && !digits(f)) || (w.empty() && f.empty()))
      throw std::invalid_argument("bad rational '" + text + "'");
    Integer den = 1;
    for (std::size_t i = 0; i < f.size(); ++i) den *= 10;
    q = Rational(Integer(w.empty() ? "0" : w) * den + Integer(f.empty() ? "0" : f), den);
  } else {
    if (!digits(s)) throw std::invalid_argument("bad rational '" + text + "'");
    q = Rational(Integer(s));
  }
  return neg ? Rational(-q) : q;
}

}  // namespace skdv
