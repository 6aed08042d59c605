#pragma once

#include <algorithm>

#include "skdv/core/diffpoly.hpp"

namespace skdv::variational {

namespace detail {

template <bool Left>
DiffPoly partial(const DiffPoly& p, const Atom& a) {
  if (a.kind == AtomKind::Nonlocal)
    throw UnsupportedError("cannot differentiate with respect to a nonlocal atom");
  DiffPoly out;
  for (const auto& [atoms, c] : p) {
    auto first = std::find(atoms.begin(), atoms.end(), a);
    if (first == atoms.end()) continue;
    auto last = first;
    while (last != atoms.end() && *last == a) ++last;
    const auto multiplicity = static_cast<long>(last - first);
    Rational coeff = c * multiplicity;
    if (a.is_odd()) {
      // Anticommute the atom to the requested end, collecting signs.
      Parity passed = Left ? monomial_parity(std::vector<Atom>(atoms.begin(), first))
                           : monomial_parity(std::vector<Atom>(last, atoms.end()));
      if (is_odd(passed)) coeff = -coeff;
    }
    std::vector<Atom> rest;
    rest.reserve(atoms.size() - 1);
    rest.insert(rest.end(), atoms.begin(), first);
    rest.insert(rest.end(), first + 1, atoms.end());
    out.add_canonical(std::move(rest), coeff);
  }
  return out;
}

}  // namespace detail

/// Graded left partial derivative: move `a` to the far left, then strike it.
inline DiffPoly partial_left(const DiffPoly& p, const Atom& a) { return detail::partial<true>(p, a); }

/// Graded right partial derivative: move `a` to the far right, then strike it.
inline DiffPoly partial_right(const DiffPoly& p, const Atom& a) {
  return detail::partial<false>(p, a);
}

/// Highest derivative order of `var` (any order) occurring in the local atoms of `p`; -1 if absent.
inline int max_order(const DiffPoly& p, const Atom& var) {
  int k = -1;
  for (const auto& [atoms, c] : p)
    for (const auto& a : atoms)
      if (a.same_variable(var)) k = std::max(k, a.order);
  return k;
}

}  // namespace skdv::variational
