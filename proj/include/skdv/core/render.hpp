#pragma once

// Canonical text rendering. The output is valid input for the expression
// parser: u_x, u_2x, Tdot(u), Dx(Tdot(u),k), Phi, D(Phi), Dk(Phi,k),
// Dinv(...), rational coefficients as p/q.

#include <sstream>
#include <string>

#include "skdv/core/diffpoly.hpp"

namespace skdv {

std::string to_string(const DiffPoly& p);

inline std::string to_string(const Atom& a) {
  auto jet_name = [](const std::string& f, int k) {
    if (k == 0) return f;
    if (k == 1) return f + "_x";
    return f + "_" + std::to_string(k) + "x";
  };
  switch (a.kind) {
    case AtomKind::Jet:
      return jet_name(a.field, a.order);
    case AtomKind::TimeJet: {
      std::string t = "Tdot(" + a.field + ")";
      return a.order == 0 ? t : "Dx(" + t + "," + std::to_string(a.order) + ")";
    }
    case AtomKind::Super:
    case AtomKind::SuperTime: {
      std::string base = a.kind == AtomKind::Super ? a.field : "Tdot(" + a.field + ")";
      if (a.order == 0) return base;
      if (a.order == 1) return "D(" + base + ")";
      return "Dk(" + base + "," + std::to_string(a.order) + ")";
    }
    case AtomKind::Nonlocal:
      return "Dinv(" + to_string(*a.arg) + ")";
  }
  return "?";
}

inline std::string to_string(const DiffPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [atoms, c] : p) {
    const bool neg = c < 0;
    const Rational mag = neg ? Rational(-c) : c;
    if (first) {
      if (neg) os << '-';
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool need_star = false;
    if (atoms.empty() || mag != 1) {
      os << to_string(mag);
      need_star = true;
    }
    for (std::size_t i = 0; i < atoms.size();) {
      std::size_t j = i + 1;
      while (j < atoms.size() && atoms[j] == atoms[i]) ++j;
      if (need_star) os << '*';
      os << to_string(atoms[i]);
      if (j - i > 1) os << '^' << (j - i);
      need_star = true;
      i = j;
    }
  }
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const DiffPoly& p) { return os << to_string(p); }
inline std::ostream& operator<<(std::ostream& os, const Atom& a) { return os << to_string(a); }

}  // namespace skdv
