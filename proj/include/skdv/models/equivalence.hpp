#pragma once

// End-to-end checks between the Lagrangian, Hamiltonian and superspace
// formulations of a registered model.

#include <optional>
#include <string>
#include <vector>

#include "skdv/dba/dirac_bergmann.hpp"
#include "skdv/models/models.hpp"

namespace skdv {

struct CheckOutcome {
  bool ok = true;
  std::vector<std::string> details;

  void require(bool cond, const std::string& what) {
    details.push_back(std::string(cond ? "ok: " : "FAIL: ") + what);
    ok = ok && cond;
  }
};

/// Scales an equation E = 0 so that its first time-derivative term has
/// coefficient 1; without time derivatives, the first canonical term.
inline DiffPoly normalize_equation(const DiffPoly& e) {
  if (e.is_zero()) return e;
  for (const auto& [atoms, c] : e)
    for (const auto& a : atoms)
      if (a.kind == AtomKind::TimeJet) return e * Rational(1 / c);
  return e * Rational(1 / e.leading_coefficient());
}

/// Solved forms of the primary constraints only.
inline std::vector<SolvedConstraint> primary_rules(const DBAReport& r) {
  return detail::solved_forms(r.constraints, r.fields, true);
}
/// Solved forms of every constraint.
inline std::vector<SolvedConstraint> all_rules(const DBAReport& r) {
  return detail::solved_forms(r.constraints, r.fields, false);
}

/// The Hamilton equations written as E = 0 in the configuration fields:
/// f_t - X(f) for fields, d_t(Pi_f) - X(Pi_f) with Pi_f eliminated by its
/// primary constraint for momenta. Momenta on the right are eliminated too.
inline std::vector<std::pair<std::string, DiffPoly>> hamilton_equation_forms(const DBAReport& r,
                                                                             const LocalFunctional& H) {
  const auto primary = primary_rules(r);
  std::vector<std::pair<std::string, DiffPoly>> out;
  for (const auto& [f, rhs] : hamilton_equations(H)) {
    const FieldSpec& spec = r.fields.at(f);
    DiffPoly lhs;
    if (spec.kind == FieldKind::Dynamical) {
      lhs = r.fields.tdot(f);
    } else {
      lhs = dt(weak_reduce(r.fields.var(f), primary));
    }
    out.emplace_back(f, normalize_equation(lhs - weak_reduce(rhs, primary)));
  }
  return out;
}

/// H_L + sum lambda_i c_i with the multipliers still symbolic.
inline LocalFunctional symbolic_total_hamiltonian(const DBAReport& r) { return detail::symbolic_total(r); }

/// Lagrangian and Hamiltonian descriptions agree for the total Hamiltonian
/// H (multipliers as symbols, values taken from the report):
///  - every consistency condition {c, H} with the multiplier values inserted
///    vanishes on the primary constraint surface,
///  - each flow reduced to the full constraint surface matches the
///    registered evolution up to an x-independent residue,
///  - the registered x-differentiated equations hold on the flows.
inline CheckOutcome check_lagrangian_hamiltonian_equivalence(const ModelDef& m, const DBAReport& r,
                                                             const LocalFunctional& H) {
  CheckOutcome out;
  if (!r.closed) {
    out.require(false, "constraint report is closed");
    return out;
  }
  const SubstitutionRules values(r.multipliers.begin(), r.multipliers.end());
  const auto primary = primary_rules(r);
  const auto all = all_rules(r);
  for (const auto& c : r.constraints) {
    DiffPoly e = weak_reduce(substitute(bracket_density_functional(c.density, H), values), primary);
    out.require(e.is_zero(), "{" + c.id + ",H} = 0 with the solved multipliers" +
                                 (e.is_zero() ? std::string{} : ": " + to_string(e)));
  }
  SubstitutionRules flows;
  for (const auto& [f, rhs] : hamilton_equations(H))
    if (r.fields.at(f).kind == FieldKind::Dynamical) flows[f] = weak_reduce(substitute(rhs, values), all);
  for (const auto& [f, rhs] : m.evolution) {
    auto it = flows.find(f);
    if (it == flows.end()) continue;
    DiffPoly residue = it->second - weak_reduce(rhs, all);
    const bool x_free = dx(residue).is_zero();
    std::string what = f + "_t matches the registered evolution";
    if (!residue.is_zero() && x_free) what += " up to the x-independent term " + to_string(residue);
    if (!x_free) what += ": residue " + to_string(residue);
    out.require(x_free, what);
  }
  for (const auto& e : m.xt_equations) {
    DiffPoly v = weak_reduce(substitute_time_derivatives(e, flows), all);
    out.require(v.is_zero(), to_string(e) + " = 0 on the Hamiltonian flow" +
                                 (v.is_zero() ? std::string{} : ": " + to_string(v)));
  }
  return out;
}

inline CheckOutcome check_lagrangian_hamiltonian_equivalence(const ModelDef& m) {
  if (!m.lagrangian) throw Error("model '" + m.name + "' has no Lagrangian");
  const DBAReport r = run_dba(*m.lagrangian);
  return check_lagrangian_hamiltonian_equivalence(m, r, symbolic_total_hamiltonian(r));
}

/// Component expansion of the superspace family equation against the
/// registered x-differentiated component system, for bound or symbolic a.
inline CheckOutcome check_skdv_family_expansion(const std::optional<Rational>& a) {
  ParamMap p;
  if (a) p["a"] = *a;
  const ModelDef m = get_model("skdv_a_potential", p);
  CheckOutcome out;
  auto [t0, t1] = to_components(*m.superspace_equation);
  out.require(t0 == m.xt_equations.at(0), "theta^0 component: " + to_string(t0));
  out.require(t1 == m.xt_equations.at(1), "theta^1 component: " + to_string(t1));
  return out;
}

}  // namespace skdv
