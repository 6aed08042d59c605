#pragma once

// Golden suite behind `skdv verify-paper`: the published sKdV-2 results
// transcribed as DSL strings and compared against the pipeline.

#include <functional>
#include <string>
#include <vector>

#include "skdv/skdv.hpp"

namespace skdv::golden {

struct Result {
  explicit Result(std::string n) : name(std::move(n)) {}
  std::string name;
  bool pass = false;
  std::vector<std::string> diff;
};

namespace detail {

struct Context {
  ModelDef model;
  DBAReport report;
  FieldTable table;  // phase space plus multipliers

  DiffPoly parse(const std::string& s) const { return dsl::parse(s, table); }
};

inline void expect_equal(Result& r, const std::string& what, const DiffPoly& got, const DiffPoly& want) {
  if (got == want) return;
  r.diff.push_back(what + ": got " + to_string(got) + ", expected " + to_string(want));
}

inline void expect(Result& r, bool cond, const std::string& what) {
  if (!cond) r.diff.push_back(what);
}

inline Result momenta(const Context& c) {
  Result r{"momenta"};
  const auto p = skdv::momenta(*c.model.lagrangian);
  expect_equal(r, "Pi_u", p.at("u"), c.parse("-1/2*u_x"));
  expect_equal(r, "Pi_psi", p.at("psi"), c.parse("-1/2*psi"));
  expect_equal(r, "Pi_xi", p.at("xi"), DiffPoly{});
  return r;
}

inline Result canonical_hamiltonian(const Context& c) {
  Result r{"canonical-hamiltonian"};
  const DiffPoly want = c.parse("u_x^3 + 2*u*psi*psi_2x - 1/2*u_2x^2 + xi_2x*psi_2x - 1/2*xi_2x*xi_3x");
  const DiffPoly got = c.report.H_L.density;
  expect(r, equivalent(got, want), "H_L - expected is not a total derivative: " + to_string(got - want));
  return r;
}

inline Result constraint_chain(const Context& c) {
  Result r{"constraint-chain"};
  const std::vector<std::string> want{"Pi_u + 1/2*u_x", "Pi_psi + 1/2*psi", "Pi_xi", "psi - xi_x"};
  const auto got = c.report.densities();
  expect(r, got.size() == want.size(),
         "expected " + std::to_string(want.size()) + " constraints, got " + std::to_string(got.size()));
  for (std::size_t i = 0; i < std::min(got.size(), want.size()); ++i)
    expect_equal(r, c.report.constraints[i].id, got[i], c.parse(want[i]));
  // {c3, H} is the fourth derivative of the secondary constraint.
  const DiffPoly c3h = bracket_density_functional(c.parse("Pi_xi"), c.report.H_total);
  expect_equal(r, "{c3,H}", normalize_equation(c3h), normalize_equation(c.parse("Dx(psi - xi_x, 4)")));
  expect(r, c.report.closed, "constraint algorithm did not close");
  return r;
}

inline Result multipliers(const Context& c) {
  Result r{"multipliers"};
  const std::vector<std::pair<std::string, std::string>> want{
      {"lambda1", "2*psi*psi_x - 3*u_x^2 - u_3x"},
      {"lambda2", "-4*u_x*psi_x - 2*psi*u_2x - psi_3x"},
      {"lambda3", "-2*Dinv(u_x*psi_x) - 2*psi*u_x - psi_2x"},
      {"lambdat1", "psi_3x - xi_4x"},
  };
  for (const auto& [name, text] : want) {
    auto it = c.report.multipliers.find(name);
    if (it == c.report.multipliers.end()) {
      r.diff.push_back(name + " was not solved");
      continue;
    }
    expect_equal(r, name, it->second, c.parse(text));
  }
  return r;
}

inline Result total_hamiltonian(const Context& c) {
  Result r{"total-hamiltonian"};
  const DiffPoly want = c.parse(
      "1/2*xi_2x*xi_3x + psi*psi_x*u_x - 1/2*u_x^3 + 1/2*psi_x*psi_2x + psi_2x*xi_2x"
      " + Pi_u*(2*psi*psi_x - 3*u_x^2 - u_3x) + Pi_psi*(4*u_x*psi_x + 2*psi*u_2x + psi_3x)"
      " + Pi_xi*(2*Dinv(u_x*psi_x) + 2*psi*u_x + psi_2x)");
  const DiffPoly got = c.report.H_total.density;
  // The displayed density omits a term that vanishes on the constraint surface.
  const DiffPoly d = weak_reduce(got - want, all_rules(c.report));
  expect(r, is_local(d) && is_total_derivative(d).exact,
         "H - expected is not weakly a total derivative: " + to_string(d));
  return r;
}

inline Result hamilton_equations(const Context& c) {
  Result r{"hamilton-equations"};
  const std::vector<std::pair<std::string, std::string>> want{
      {"u", "Tdot(u) - 2*psi*psi_x + 3*u_x^2 + u_3x"},
      {"psi", "Tdot(psi) + 4*u_x*psi_x + 2*psi*u_2x + psi_3x"},
      {"xi", "Tdot(xi) + 2*Dinv(u_x*psi_x) + 2*psi*u_x + psi_2x"},
      {"Pi_psi", "Tdot(psi) + 4*u_x*psi_x + 2*psi*u_2x + 3*psi_3x - 2*xi_4x"},
      {"Pi_u", "Dx(Tdot(u)) - 2*psi*psi_2x + 6*u_x*u_2x + u_4x"},
      {"Pi_xi", "Dx(psi - xi_x, 4)"},
  };
  const auto forms = hamilton_equation_forms(c.report, c.report.H_total);
  for (const auto& [f, text] : want) {
    bool found = false;
    for (const auto& [g, e] : forms)
      if (g == f) {
        expect_equal(r, f + " equation", e, normalize_equation(c.parse(text)));
        found = true;
      }
    expect(r, found, "no Hamilton equation for " + f);
  }
  const CheckOutcome eq =
      check_lagrangian_hamiltonian_equivalence(c.model, c.report, symbolic_total_hamiltonian(c.report));
  for (const auto& d : eq.details)
    if (!eq.ok && d.rfind("FAIL", 0) == 0) r.diff.push_back(d);
  return r;
}

inline Result superspace_match(const Context& c) {
  Result r{"superspace-match"};
  const auto rules = all_rules(c.report);
  const SuperMatch m = check_super_component_match(
      *c.model.superspace_hamiltonian, c.report.H_total.density,
      [&](const DiffPoly& p) { return weak_reduce(p, rules); });
  expect(r, m.match, m.diagnostic);
  // Bosonic limit: the potential-form KdV Hamiltonian.
  const DiffPoly bosonic = substitute(berezin(*c.model.superspace_hamiltonian), {{"xi", DiffPoly{}}});
  const ModelDef kdv = get_model("kdv");
  const DiffPoly kdv_h = substitute(*kdv.hamiltonian, {{"u", c.parse("u_x")}});
  expect(r, equivalent(bosonic, kdv_h),
         "xi -> 0 limit " + to_string(bosonic) + " differs from " + to_string(kdv_h));
  return r;
}

inline Result family_expansion(const Context&) {
  Result r{"family-expansion"};
  const CheckOutcome o = check_skdv_family_expansion(std::nullopt);
  for (const auto& d : o.details)
    if (d.rfind("FAIL", 0) == 0) r.diff.push_back(d);
  return r;
}

}  // namespace detail

inline std::vector<Result> run_suite() {
  detail::Context c{get_model("skdv2_lagrangian"), {}, {}};
  c.report = run_dba(*c.model.lagrangian);
  c.table = c.report.fields;
  std::vector<Result> out;
  for (auto* check : {detail::momenta, detail::canonical_hamiltonian, detail::constraint_chain,
                      detail::multipliers, detail::total_hamiltonian, detail::hamilton_equations,
                      detail::superspace_match, detail::family_expansion}) {
    Result r = check(c);
    r.pass = r.diff.empty();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace skdv::golden
