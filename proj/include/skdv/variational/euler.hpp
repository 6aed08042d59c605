#pragma once

// Graded Euler operator, functional derivatives and density equivalence.

#include <string>

#include "skdv/core/dinv.hpp"
#include "skdv/core/field_table.hpp"
#include "skdv/variational/antiderivative.hpp"

namespace skdv {

/// A density together with the fields it is written in. Integrated over x
/// with vanishing boundary terms.
struct LocalFunctional {
  DiffPoly density;
  FieldTable fields;
};

namespace variational {

namespace detail {

// Variational derivative of `p` along the jet variable `var`. Nonlocal atoms
// are moved off the varied factor with the adjoint rule
//   int A * Dinv(F) = - int Dinv(A) * F,
// Dinv(A) being frozen under a placeholder field while F is varied.
inline DiffPoly euler_full(const DiffPoly& p, const Atom& var, int depth) {
  DiffPoly out = euler_local(p, var);
  int counter = 0;
  for (const auto& [atoms, c] : p) {
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      const Atom& n = atoms[j];
      if (n.kind != AtomKind::Nonlocal) continue;
      std::vector<Atom> rest;
      rest.reserve(atoms.size() - 1);
      rest.insert(rest.end(), atoms.begin(), atoms.begin() + static_cast<long>(j));
      rest.insert(rest.end(), atoms.begin() + static_cast<long>(j) + 1, atoms.end());
      Rational s = c;
      if (n.is_odd() && is_odd(monomial_parity({atoms.begin() + static_cast<long>(j) + 1, atoms.end()})))
        s = -s;
      DiffPoly a;
      a.add_canonical(rest, Rational(1));

      const std::string name = "#dinv" + std::to_string(depth) + "." + std::to_string(counter++);
      const Atom hold = Atom::jet(name, 0, monomial_parity(rest));
      DiffPoly q = atom_poly(hold) * (*n.arg) * Rational(-s);
      DiffPoly e = euler_full(q, var, depth + 1);
      if (e.is_zero()) continue;
      out += substitute(e, SubstitutionRules{{name, dinv(a)}});
    }
  }
  return out;
}

}  // namespace detail

/// Graded Euler operator of `density` along the jet variable `var`
/// (an order-0 Jet atom). Time-derivative atoms are inert.
inline DiffPoly euler_operator(const DiffPoly& density, const Atom& var) {
  if (var.kind != AtomKind::Jet || var.order != 0)
    throw Error("Euler operator needs an order-0 field atom");
  return detail::euler_full(density, var, 0);
}

}  // namespace variational

/// delta F / delta f, time-derivative atoms carried as inert.
inline DiffPoly euler_lagrange(const LocalFunctional& F, std::string_view field) {
  F.fields.check(F.density);
  return variational::euler_operator(F.density, F.fields.atom(field));
}

/// Same operator as euler_lagrange; Hamiltonian densities carry no time derivatives.
inline DiffPoly variational_derivative(const LocalFunctional& H, std::string_view field) {
  if (contains_time_atoms(H.density))
    throw Error("Hamiltonian density contains time-derivative atoms");
  return euler_lagrange(H, field);
}

/// Euler-Lagrange expression over (x,t): the spatial Euler operator plus
/// -d_t of the derivatives with respect to the time-derivative atoms.
inline DiffPoly euler_lagrange_spacetime(const LocalFunctional& L, std::string_view field) {
  DiffPoly out = euler_lagrange(L, field);
  const Atom t = L.fields.time_atom(field);
  const int top = variational::max_order(L.density, t);
  for (int k = 0; k <= top; ++k) {
    DiffPoly q = variational::partial_left(L.density, t.with_order(k));
    if (q.is_zero()) continue;
    q = dx(dt(q), k);
    if (k % 2 == 0) q *= Rational(-1);
    out += q;
  }
  return out;
}

struct TotalDerivativeResult {
  bool exact = false;
  std::optional<DiffPoly> witness;
};

/// Decides whether p = d_x G for a local G; G is returned as the witness.
inline TotalDerivativeResult is_total_derivative(const DiffPoly& p) {
  if (!is_local(p)) throw UndecidableError("total-derivative test on a nonlocal density");
  if (variational::has_super_atoms(p))
    throw UndecidableError("total-derivative test on superfield atoms");
  p.require_parity("total-derivative test");
  if (p.constant_term() != 0) return {};
  for (const Atom& v : variational::jet_variables(p))
    if (!variational::euler_local(p, v).is_zero()) return {};
  auto w = variational::homotopy_antiderivative(p);
  if (!w) return {};
  return {true, std::move(w)};
}

/// F and G agree up to a total x-derivative.
inline bool equivalent(const DiffPoly& f, const DiffPoly& g) {
  return is_total_derivative(f - g).exact;
}

}  // namespace skdv
