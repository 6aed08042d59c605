#pragma once

// Reduction to the constraint surface.

#include <string>
#include <vector>

#include "skdv/core/field_table.hpp"
#include "skdv/core/render.hpp"

namespace skdv {

/// Constraint c = k * a + rest solved as a -> -rest / k.
struct SolvedConstraint {
  std::string field;
  DiffPoly value;
};

namespace detail {

inline bool mentions_field(const DiffPoly& p, const std::string& name) {
  std::vector<Atom> fs;
  collect_fields(p, fs);
  return std::any_of(fs.begin(), fs.end(), [&](const Atom& a) { return a.field == name; });
}

inline std::optional<SolvedConstraint> solve_for(const DiffPoly& c, const Atom& a) {
  DiffPoly alone = atom_poly(a);
  Rational k = 0;
  DiffPoly rest;
  for (const auto& [atoms, coeff] : c) {
    if (atoms.size() == 1 && atoms[0] == a) {
      k = coeff;
    } else {
      rest.add_canonical(atoms, coeff);
    }
  }
  if (k == 0 || mentions_field(rest, a.field)) return std::nullopt;
  return SolvedConstraint{a.field, rest * Rational(-1 / k)};
}

}  // namespace detail

/// Picks the leading atom of a constraint: a momentum if one occurs linearly
/// with a constant coefficient, otherwise an undifferentiated field that
/// occurs only there.
inline SolvedConstraint solve_constraint(const DiffPoly& c, const FieldTable& fields) {
  for (FieldKind kind : {FieldKind::Momentum, FieldKind::Dynamical}) {
    for (const auto& name : fields.names_of(kind)) {
      if (auto s = detail::solve_for(c, fields.atom(name))) return *s;
    }
  }
  throw ConstraintError("constraint '" + to_string(c) + "' has no linear leading atom");
}

/// Substitutes the solved constraints until nothing changes.
inline DiffPoly weak_reduce(const DiffPoly& p, const std::vector<SolvedConstraint>& solved) {
  SubstitutionRules rules;
  for (const auto& s : solved) rules[s.field] = s.value;
  DiffPoly cur = p;
  for (int i = 0; i < 32; ++i) {
    DiffPoly next = substitute(cur, rules);
    if (next == cur) return cur;
    cur = std::move(next);
  }
  throw ConstraintError("solved constraints do not reach a fixed point");
}

inline DiffPoly weak_reduce(const DiffPoly& p, const std::vector<DiffPoly>& constraints,
                            const FieldTable& fields) {
  std::vector<SolvedConstraint> solved;
  for (const auto& c : constraints) solved.push_back(solve_constraint(c, fields));
  return weak_reduce(p, solved);
}

}  // namespace skdv
