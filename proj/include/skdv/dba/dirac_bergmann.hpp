#pragma once

// Constraint analysis of degenerate first-order Lagrangians: primary
// constraints, total Hamiltonian, consistency iteration, secondary
// constraints and multiplier solving by formal inversion of d_x^k.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skdv/brackets/poisson.hpp"
#include "skdv/brackets/weak.hpp"
#include "skdv/variational/lagrangian.hpp"

namespace skdv {

enum class ConstraintStatus { Unchecked, ProducedSecondary, MultiplierFixed, IdenticallyConserved };

inline const char* to_string(ConstraintStatus s) {
  switch (s) {
    case ConstraintStatus::Unchecked: return "unchecked";
    case ConstraintStatus::ProducedSecondary: return "produced_secondary";
    case ConstraintStatus::MultiplierFixed: return "multiplier_fixed";
    case ConstraintStatus::IdenticallyConserved: return "identically_conserved";
  }
  return "?";
}

struct ConstraintRecord {
  std::string id;
  DiffPoly density;
  int generation = 0;
  Parity parity = Parity::Even;
  ConstraintStatus status = ConstraintStatus::Unchecked;
  std::string status_ref;  // id of the secondary constraint or of the fixed multiplier
  std::string multiplier;  // multiplier paired with this constraint in H_total
  std::string klass;       // "first-class" / "second-class", filled on closure

  std::string status_text() const {
    std::string s = to_string(status);
    if (!status_ref.empty()) s += "(" + status_ref + ")";
    return s;
  }
};

struct DBAReport {
  FieldTable fields;  // phase space plus multipliers
  std::map<std::string, DiffPoly> momenta;
  std::vector<ConstraintRecord> constraints;
  std::map<std::string, DiffPoly> multipliers;
  LocalFunctional H_L, H_c, H_total;
  bool closed = false;
  int generation = 0;
  std::vector<std::string> steps;

  const ConstraintRecord& constraint(std::string_view id) const {
    for (const auto& c : constraints)
      if (c.id == id) return c;
    throw Error("no constraint '" + std::string(id) + "'");
  }

  std::vector<DiffPoly> densities() const {
    std::vector<DiffPoly> out;
    for (const auto& c : constraints) out.push_back(c.density);
    return out;
  }
  std::vector<DiffPoly> primary_densities() const {
    std::vector<DiffPoly> out;
    for (const auto& c : constraints)
      if (c.generation == 0) out.push_back(c.density);
    return out;
  }
};

struct DBAOptions {
  int max_generations = 10;
};

/// Pi_f - dL/dTDot(f) for every field whose velocity cannot be solved for.
/// A non-degenerate Lagrangian has none.
inline std::vector<ConstraintRecord> primary_constraints(const FirstOrderLagrangian& L) {
  if (!hessian(L).is_degenerate) return {};
  for (const auto& [atoms, c] : L.density)
    if (tdot_degree(atoms) > 1)
      throw UnsupportedError("degenerate Lagrangian that is not linear in the velocities");
  const auto leg = legendre(L);
  const FieldTable& ps = leg.hamiltonian.fields;
  std::vector<ConstraintRecord> out;
  int i = 0;
  for (const auto& f : L.dynamical()) {
    ConstraintRecord r;
    r.id = "c" + std::to_string(++i);
    r.density = ps.var(*ps.at(f).conjugate) - leg.momenta.at(f);
    r.parity = ps.at(f).parity;
    out.push_back(std::move(r));
  }
  return out;
}

/// H_L + sum_i lambda_i c_i, declaring the multipliers as fields.
inline LocalFunctional total_hamiltonian(const LocalFunctional& HL, const std::vector<DiffPoly>& constraints,
                                         const std::vector<std::string>& multipliers) {
  if (constraints.size() != multipliers.size()) throw Error("one multiplier per constraint");
  LocalFunctional H = HL;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const Parity p = constraints[i].require_parity("constraint");
    if (const auto* s = H.fields.find(multipliers[i])) {
      if (s->parity != p) throw ParityError("multiplier '" + multipliers[i] + "' has the wrong parity");
    } else {
      H.fields.add(FieldSpec{multipliers[i], p, FieldKind::Multiplier, std::nullopt});
    }
    H.density += H.fields.var(multipliers[i]) * constraints[i];
  }
  return H;
}

/// One equation  sum_n K_n * d^n(lambda) + rhs = 0  for a single multiplier.
struct MultiplierEquation {
  std::string constraint;
  DiffPoly expression;  // linear in the multiplier atoms
};

namespace detail {

inline bool is_multiplier_atom(const Atom& a, const FieldTable& t) {
  if (a.kind != AtomKind::Jet) return false;
  const auto* s = t.find(a.field);
  return s && s->kind == FieldKind::Multiplier;
}

inline std::vector<std::string> multipliers_in(const DiffPoly& p, const FieldTable& t) {
  std::vector<std::string> out;
  for (const auto& [atoms, c] : p) {
    int count = 0;
    for (const auto& a : atoms) {
      if (a.kind == AtomKind::Nonlocal) {
        auto inner = multipliers_in(*a.arg, t);
        if (!inner.empty()) throw UnsupportedError("multiplier under an inverse derivative");
        continue;
      }
      if (!is_multiplier_atom(a, t)) continue;
      ++count;
      if (std::find(out.begin(), out.end(), a.field) == out.end()) out.push_back(a.field);
    }
    if (count > 1) throw UnsupportedError("consistency condition is nonlinear in the multipliers");
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Splits e = sum_n K_n lambda_n + rest.
inline std::pair<DeltaKernel, DiffPoly> split_linear(const DiffPoly& e, const Atom& lambda) {
  DeltaKernel k;
  DiffPoly rest = e;
  const int top = variational::max_order(e, lambda);
  for (int n = 0; n <= top; ++n) {
    DiffPoly c = variational::partial_right(e, lambda.with_order(n));
    if (c.is_zero()) continue;
    rest -= c * atom_poly(lambda.with_order(n));
    k.terms.emplace(n, std::move(c));
  }
  return {std::move(k), std::move(rest)};
}

/// Divides out the largest d_x^k with an exact local antiderivative and makes
/// the first canonical term monic. Integration constants are zero.
inline DiffPoly strip_derivatives(const DiffPoly& e, int& stripped, Rational& factor) {
  DiffPoly cur = e;
  stripped = 0;
  while (is_local(cur) && !variational::has_super_atoms(cur) && cur.constant_term() == 0) {
    auto w = variational::homotopy_antiderivative(cur);
    if (!w || w->is_zero() || w->constant_term() != 0) break;
    cur = std::move(*w);
    ++stripped;
  }
  factor = cur.leading_coefficient();
  return cur * Rational(1 / factor);
}

inline std::vector<SolvedConstraint> solved_forms(const std::vector<ConstraintRecord>& cs,
                                                  const FieldTable& t, bool primary_only) {
  std::vector<SolvedConstraint> out;
  for (const auto& c : cs)
    if (!primary_only || c.generation == 0) out.push_back(solve_constraint(c.density, t));
  return out;
}

inline LocalFunctional symbolic_total(const DBAReport& r) {
  std::vector<DiffPoly> cs;
  std::vector<std::string> names;
  for (const auto& c : r.constraints) {
    cs.push_back(c.density);
    names.push_back(c.multiplier);
  }
  return total_hamiltonian(r.H_L, cs, names);
}

}  // namespace detail

/// Solves the multiplier equations triangularly: an equation with a single
/// unknown whose kernel is c * d^k gives lambda = -(1/c) dinv^k(rest).
inline std::map<std::string, DiffPoly> solve_multipliers(const std::vector<MultiplierEquation>& eqs,
                                                         const FieldTable& t,
                                                         std::vector<std::string>* log = nullptr,
                                                         std::map<std::string, std::string>* fixed_by = nullptr) {
  std::map<std::string, DiffPoly> solved;
  std::vector<MultiplierEquation> open = eqs;
  while (true) {
    bool progressed = false;
    std::string blocked;
    for (auto it = open.begin(); it != open.end(); ++it) {
      DiffPoly e = substitute(it->expression, SubstitutionRules(solved.begin(), solved.end()));
      auto unknown = detail::multipliers_in(e, t);
      if (unknown.empty()) {
        it->expression = e;
        continue;
      }
      if (unknown.size() > 1) continue;
      auto [kernel, rest] = detail::split_linear(e, t.atom(unknown[0]));
      if (!kernel.is_constant_monomial()) {
        blocked = "kernel " + to_string(kernel) + " acting on " + unknown[0];
        continue;
      }
      const auto& [k, c] = *kernel.terms.begin();
      DiffPoly value = dinv(rest, k) * Rational(-1 / c.constant_term());
      if (log)
        log->push_back("solve " + unknown[0] + " from " + it->constraint + ": " + to_string(kernel) +
                       " => " + unknown[0] + " = " + to_string(value));
      if (fixed_by) (*fixed_by)[it->constraint] = unknown[0];
      solved.emplace(unknown[0], std::move(value));
      open.erase(it);
      progressed = true;
      break;
    }
    bool pending = false;
    for (const auto& e : open)
      if (!detail::multipliers_in(substitute(e.expression, SubstitutionRules(solved.begin(), solved.end())), t)
               .empty())
        pending = true;
    if (!pending) break;
    if (!progressed)
      throw ConstraintError("cannot invert; manual intervention required" +
                            (blocked.empty() ? std::string{} : ": " + blocked));
  }
  return solved;
}

/// One generation: consistency conditions of every constraint under the
/// current symbolic total Hamiltonian. New secondary constraints are
/// appended; otherwise the multipliers are solved and closure is checked.
inline DBAReport consistency_step(DBAReport report) {
  if (report.closed) throw Error("consistency step on a closed report");
  const LocalFunctional HT = detail::symbolic_total(report);
  report.fields = HT.fields;
  const auto primary = detail::solved_forms(report.constraints, HT.fields, true);
  const auto all = detail::solved_forms(report.constraints, HT.fields, false);

  std::vector<MultiplierEquation> eqs;
  std::vector<ConstraintRecord> fresh;
  int next_secondary = 0;
  for (const auto& c : report.constraints)
    if (c.generation > 0) ++next_secondary;

  for (auto& c : report.constraints) {
    DiffPoly e = weak_reduce(bracket_density_functional(c.density, HT), primary);
    if (weak_reduce(e, all).is_zero()) {
      c.status = ConstraintStatus::IdenticallyConserved;
      c.status_ref.clear();
      report.steps.push_back("generation " + std::to_string(report.generation) + ": {" + c.id +
                             ",H} vanishes weakly");
      continue;
    }
    if (!detail::multipliers_in(e, HT.fields).empty()) {
      eqs.push_back({c.id, e});
      report.steps.push_back("generation " + std::to_string(report.generation) + ": {" + c.id +
                             ",H} = " + to_string(e));
      continue;
    }
    int stripped = 0;
    Rational factor;
    DiffPoly s = detail::strip_derivatives(e, stripped, factor);
    ConstraintRecord r;
    r.id = "ct" + std::to_string(++next_secondary);
    r.density = s;
    r.generation = report.generation + 1;
    r.parity = s.require_parity("secondary constraint");
    r.multiplier = "lambdat" + std::to_string(next_secondary);
    c.status = ConstraintStatus::ProducedSecondary;
    c.status_ref = r.id;
    report.steps.push_back("generation " + std::to_string(report.generation) + ": {" + c.id +
                           ",H} = " + to_string(e) + " => secondary " + r.id + " = " + to_string(s) +
                           " (factor " + to_string(factor) + "*d^" + std::to_string(stripped) +
                           " removed, integration constant 0)");
    fresh.push_back(std::move(r));
  }

  if (!fresh.empty()) {
    for (auto& r : fresh) report.constraints.push_back(std::move(r));
    ++report.generation;
    return report;
  }

  std::map<std::string, std::string> fixed_by;
  report.multipliers = solve_multipliers(eqs, HT.fields, &report.steps, &fixed_by);
  for (auto& c : report.constraints) {
    auto it = fixed_by.find(c.id);
    if (it != fixed_by.end()) {
      c.status = ConstraintStatus::MultiplierFixed;
      c.status_ref = it->second;
    } else if (c.status == ConstraintStatus::Unchecked) {
      c.status = ConstraintStatus::IdenticallyConserved;
    }
  }

  std::vector<DiffPoly> terms;
  DiffPoly hc;
  for (const auto& c : report.constraints) hc += HT.fields.var(c.multiplier) * c.density;
  report.H_c = LocalFunctional{hc, HT.fields};
  const SubstitutionRules rules(report.multipliers.begin(), report.multipliers.end());
  report.H_total = LocalFunctional{substitute(HT.density, rules), HT.fields};

  bool closed = true;
  for (const auto& c : report.constraints) {
    DiffPoly e = weak_reduce(bracket_density_functional(c.density, report.H_total), all);
    if (!e.is_zero()) {
      closed = false;
      report.steps.push_back("closure check failed for " + c.id + ": " + to_string(e));
    }
  }
  report.closed = closed;

  // Classification from the weak matrix of constraint brackets.
  for (auto& ci : report.constraints) {
    bool first_class = true;
    for (const auto& cj : report.constraints) {
      DeltaKernel k = bracket_constraint_constraint(ci.density, cj.density, HT.fields);
      for (const auto& [n, coeff] : k.terms)
        if (!weak_reduce(coeff, all).is_zero()) first_class = false;
    }
    ci.klass = first_class ? "first-class" : "second-class";
  }
  report.steps.push_back(closed ? "closed" : "not closed");
  return report;
}

/// Full constraint algorithm.
inline DBAReport run_dba(const FirstOrderLagrangian& L, const DBAOptions& opt = {}) {
  L.validate();
  DBAReport report;
  if (!hessian(L).is_degenerate) {
    auto leg = regular_legendre(L);
    report.momenta = leg.momenta;
    report.fields = leg.hamiltonian.fields;
    report.H_L = leg.hamiltonian;
    report.H_c = LocalFunctional{DiffPoly{}, report.fields};
    report.H_total = report.H_L;
    report.closed = true;
    report.steps.push_back("Lagrangian is regular: no constraints");
    return report;
  }
  auto leg = legendre(L);
  report.momenta = leg.momenta;
  report.H_L = leg.hamiltonian;
  report.fields = leg.hamiltonian.fields;
  report.constraints = primary_constraints(L);
  for (std::size_t i = 0; i < report.constraints.size(); ++i) {
    report.constraints[i].multiplier = "lambda" + std::to_string(i + 1);
    report.steps.push_back("primary " + report.constraints[i].id + " = " +
                           to_string(report.constraints[i].density));
  }
  while (!report.closed) {
    if (report.generation >= opt.max_generations)
      throw ConstraintError("constraint algorithm exceeded " + std::to_string(opt.max_generations) +
                            " generations");
    const auto before = report.constraints.size();
    report = consistency_step(std::move(report));
    if (!report.closed && report.constraints.size() == before)
      throw ConstraintError("consistency conditions not satisfied after solving the multipliers");
  }
  return report;
}

/// True iff every consistency condition vanishes weakly with the given multipliers.
inline bool verify_multipliers(const DBAReport& report, const std::map<std::string, DiffPoly>& candidates) {
  const LocalFunctional HT = detail::symbolic_total(report);
  const SubstitutionRules rules(candidates.begin(), candidates.end());
  const LocalFunctional H{substitute(HT.density, rules), HT.fields};
  if (!detail::multipliers_in(H.density, HT.fields).empty()) return false;
  const auto all = detail::solved_forms(report.constraints, HT.fields, false);
  for (const auto& c : report.constraints)
    if (!weak_reduce(bracket_density_functional(c.density, H), all).is_zero()) return false;
  return true;
}

/// phi_t = {phi, H} for every phase-space field (multipliers excluded).
inline std::vector<std::pair<std::string, DiffPoly>> hamilton_equations(const LocalFunctional& H) {
  std::vector<std::pair<std::string, DiffPoly>> out;
  for (const auto& s : H.fields.specs()) {
    if (s.kind != FieldKind::Dynamical && s.kind != FieldKind::Momentum) continue;
    if (!s.conjugate) {
      out.emplace_back(s.name, DiffPoly{});
      continue;
    }
    out.emplace_back(s.name, field_flow(s, H));
  }
  return out;
}

inline std::vector<std::pair<std::string, DiffPoly>> hamilton_equations(const DBAReport& report) {
  if (!report.closed) throw Error("Hamilton equations need a closed constraint report");
  return hamilton_equations(report.H_total);
}

}  // namespace skdv
