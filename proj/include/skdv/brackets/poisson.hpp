#pragma once

// Equal-time graded Poisson brackets on the phase space of a FieldTable.
//
// Fundamental relations:
//   {u(x), Pi_u(y)} = delta,   {Pi_u(x), u(y)} = -delta      (even pairs)
//   {psi(x), Pi_psi(y)} = {Pi_psi(x), psi(y)} = -delta        (odd pairs)
// The flow of a field is X(a) = sum_b omega_ab * dH/db with the functional
// derivative placed to the right of the structure constant.

#include <map>
#include <sstream>
#include <string>

#include "skdv/core/dinv.hpp"
#include "skdv/core/render.hpp"
#include "skdv/variational/euler.hpp"

namespace skdv {

/// Structure constant omega_ab of the pair (a, conjugate(a)).
inline Rational fundamental_bracket(const FieldSpec& a) {
  if (!a.conjugate) throw ConstraintError("field '" + a.name + "' has no conjugate partner");
  if (a.parity == Parity::Odd) return Rational(-1);
  return a.kind == FieldKind::Momentum ? Rational(-1) : Rational(1);
}

/// Hamiltonian flow X(a) = {a(x), int H dy} of a single field.
inline DiffPoly field_flow(const FieldSpec& a, const LocalFunctional& H) {
  const Rational w = fundamental_bracket(a);
  return variational_derivative(H, *a.conjugate) * w;
}

namespace detail {

class BracketEvaluator {
 public:
  explicit BracketEvaluator(const LocalFunctional& H) : H_(H) {
    parity_ = H.density.require_parity("Hamiltonian");
  }

  DiffPoly apply(const DiffPoly& F) {
    DiffPoly out;
    for (const auto& [atoms, c] : F) {
      // Sign from moving the (parity |H|) bracket past the atoms to the right.
      Parity after = Parity::Even;
      std::vector<Parity> trailing(atoms.size());
      for (std::size_t i = atoms.size(); i-- > 0;) {
        trailing[i] = after;
        after = after * atoms[i].parity;
      }
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        DiffPoly r = atom_bracket(atoms[i]);
        if (r.is_zero()) continue;
        Rational s = c;
        if (is_odd(parity_) && is_odd(trailing[i])) s = -s;
        skdv::detail::splice(out, atoms, i, s, r);
      }
    }
    return out;
  }

 private:
  DiffPoly atom_bracket(const Atom& a) {
    switch (a.kind) {
      case AtomKind::Jet: {
        if (a.constant) return {};
        const FieldSpec& spec = H_.fields.at(a.field);
        if (spec.kind == FieldKind::Multiplier || spec.kind == FieldKind::Parameter) return {};
        return dx(flow(spec), a.order);
      }
      case AtomKind::Nonlocal:
        return dinv(apply(*a.arg));
      default:
        throw UnsupportedError("bracket of time-derivative or superfield atoms");
    }
  }

  const DiffPoly& flow(const FieldSpec& spec) {
    auto it = flows_.find(spec.name);
    if (it == flows_.end()) it = flows_.emplace(spec.name, field_flow(spec, H_)).first;
    return it->second;
  }

  const LocalFunctional& H_;
  Parity parity_ = Parity::Even;
  std::map<std::string, DiffPoly> flows_;
};

}  // namespace detail

/// {F(x), int H(y) dy} by the graded chain rule.
inline DiffPoly bracket_density_functional(const DiffPoly& F, const LocalFunctional& H) {
  F.require_parity("bracket");
  H.fields.check(F);
  return detail::BracketEvaluator(H).apply(F);
}

/// sum_k coeff_k(x) d_x^k delta(x - y).
struct DeltaKernel {
  std::map<int, DiffPoly> terms;

  bool is_zero() const { return terms.empty(); }
  const DiffPoly* at(int k) const {
    auto it = terms.find(k);
    return it == terms.end() ? nullptr : &it->second;
  }
  /// The kernel is a single term c * d^k with a constant coefficient c.
  bool is_constant_monomial() const {
    return terms.size() == 1 && terms.begin()->second.is_constant();
  }
  friend bool operator==(const DeltaKernel& a, const DeltaKernel& b) { return a.terms == b.terms; }
};

inline std::string to_string(const DeltaKernel& k) {
  if (k.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [order, c] : k.terms) {
    if (!first) os << " + ";
    first = false;
    os << '(' << to_string(c) << ")*";
    if (order == 0) {
      os << "delta";
    } else {
      os << "d^" << order << " delta";
    }
  }
  return os.str();
}

/// Kernel of the operator f -> {c_i(x), int c_j(y) f(y) dy}; the test field
/// f carries the parity of c_j so that c_j f is even.
inline DeltaKernel operator_kernel(const DiffPoly& c_i, const DiffPoly& c_j, const FieldTable& fields) {
  const Parity pj = c_j.require_parity("constraint");
  const std::string name = "#test";
  FieldTable t = fields;
  t.add(FieldSpec{name, pj, FieldKind::Multiplier, std::nullopt});
  const Atom f = t.atom(name);
  DiffPoly e = bracket_density_functional(c_i, LocalFunctional{c_j * atom_poly(f), t});
  DeltaKernel k;
  const int top = variational::max_order(e, f);
  for (int n = 0; n <= top; ++n) {
    DiffPoly coeff = variational::partial_right(e, f.with_order(n));
    if (!coeff.is_zero()) k.terms.emplace(n, std::move(coeff));
  }
  DiffPoly check;
  for (const auto& [n, coeff] : k.terms) check += coeff * atom_poly(f.with_order(n));
  if (check != e) throw UnsupportedError("bracket is not linear in the test field");
  return k;
}

/// {c_i(x), c_j(y)} as a delta-function kernel in x.
inline DeltaKernel bracket_constraint_constraint(const DiffPoly& c_i, const DiffPoly& c_j,
                                                 const FieldTable& fields) {
  return operator_kernel(c_i, c_j, fields);
}

}  // namespace skdv
