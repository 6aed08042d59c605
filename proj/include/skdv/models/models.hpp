#pragma once

// Registry of the concrete systems: KdV, its potential form, the sKdV-a
// family (plain and potential), the sKdV-2 Lagrangian and an sNLSE stub.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skdv/superspace/superspace.hpp"
#include "skdv/variational/lagrangian.hpp"

namespace skdv {

using ParamMap = std::map<std::string, Rational>;

struct ModelDef {
  std::string name;
  FieldTable fields;
  ParamMap params;  // bound parameters; unbound ones stay symbolic
  std::optional<FirstOrderLagrangian> lagrangian;
  std::vector<std::pair<std::string, DiffPoly>> evolution;  // f_t = rhs
  std::vector<DiffPoly> xt_equations;                        // x-differentiated forms, E = 0
  std::optional<DiffPoly> hamiltonian;                       // conserved density of the evolution
  std::optional<SuperExpr> superspace_equation;              // E = 0
  std::optional<SuperExpr> superspace_hamiltonian;           // integrand of int dx dtheta

  const DiffPoly& rhs(std::string_view field) const {
    for (const auto& [f, r] : evolution)
      if (f == field) return r;
    throw UnknownFieldError(std::string(field));
  }

  /// Every right-hand side has the parity of its field.
  void validate() const {
    for (const auto& [f, r] : evolution) {
      fields.check(r);
      if (!r.compatible_with(fields.at(f).parity))
        throw ParityError("evolution of '" + f + "' has the wrong parity");
    }
    for (const auto& e : xt_equations) e.require_parity("equation");
  }
};

inline const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names{"kdv", "kdv_potential", "skdv_a", "skdv_a_potential",
                                              "skdv2_lagrangian", "snlse_stub"};
  return names;
}

namespace models {

/// The value of parameter `name`: its binding if present, else a symbolic constant.
inline DiffPoly parameter(const ModelDef& m, const std::string& name) {
  auto it = m.params.find(name);
  if (it != m.params.end()) return DiffPoly(it->second);
  return m.fields.var(name);
}

inline void declare_parameter(ModelDef& m, const std::string& name) {
  if (!m.params.count(name)) m.fields.add({name, Parity::Even, FieldKind::Parameter, std::nullopt});
}

inline FieldTable u_table() { return FieldTable{{"u", Parity::Even}}; }
inline FieldTable u_xi_table() { return FieldTable{{"u", Parity::Even}, {"xi", Parity::Odd}}; }

inline ModelDef kdv() {
  ModelDef m{"kdv", u_table(), {}, {}, {}, {}, {}, {}, {}};
  const auto u = [&](int k) { return m.fields.var("u", k); };
  m.evolution = {{"u", -Rational(6) * u(0) * u(1) - u(3)}};
  m.hamiltonian = -pow(u(0), 3) + Rational(1, 2) * u(1) * u(1);
  return m;
}

inline ModelDef kdv_potential() {
  ModelDef m{"kdv_potential", u_table(), {}, {}, {}, {}, {}, {}, {}};
  const auto u = [&](int k) { return m.fields.var("u", k); };
  const Rational h(1, 2);
  m.lagrangian = FirstOrderLagrangian{
      -h * u(1) * m.fields.tdot("u") - pow(u(1), 3) + h * u(2) * u(2), m.fields};
  m.evolution = {{"u", -Rational(3) * u(1) * u(1) - u(3)}};
  m.xt_equations = {m.fields.tdot("u", 1) + Rational(6) * u(1) * u(2) + u(4)};
  m.hamiltonian = pow(u(1), 3) - h * u(2) * u(2);
  return m;
}

inline ModelDef skdv_a(const ParamMap& params) {
  ModelDef m{"skdv_a", u_xi_table(), params, {}, {}, {}, {}, {}, {}};
  declare_parameter(m, "a");
  const DiffPoly a = parameter(m, "a");
  const auto u = [&](int k) { return m.fields.var("u", k); };
  const auto xi = [&](int k) { return m.fields.var("xi", k); };
  m.evolution = {
      {"u", -Rational(6) * u(0) * u(1) + a * xi(0) * xi(2) - u(3)},
      {"xi", -(DiffPoly(6) - a) * u(0) * xi(1) - a * xi(0) * u(1) - xi(3)},
  };
  auto it = params.find("a");
  if (it != params.end() && it->second == 2) {
    const Rational h(1, 2);
    m.hamiltonian = -pow(u(0), 3) + h * u(1) * u(1) + Rational(2) * u(0) * xi(0) * xi(1) -
                    h * xi(1) * xi(2);
  }
  return m;
}

/// (D^2 Phi)_t + a D^2(D^2 Phi D^3 Phi) + (6 - 2a) D^3 Phi D^4 Phi + D^8 Phi.
inline SuperExpr family_super_equation(const DiffPoly& a, const Superfield& sf = {}) {
  SuperExpr out{sf.sd(2, true)};
  SuperExpr prod{sf.sd(2) * sf.sd(3)};
  SuperExpr d2 = super_d(prod, 2);
  out += SuperExpr{a * d2.body, a * d2.theta};
  out += SuperExpr{(DiffPoly(6) - DiffPoly(2) * a) * sf.sd(3) * sf.sd(4)};
  out += SuperExpr{sf.sd(8)};
  return out;
}

inline ModelDef skdv_a_potential(const ParamMap& params) {
  ModelDef m{"skdv_a_potential", u_xi_table(), params, {}, {}, {}, {}, {}, {}};
  declare_parameter(m, "a");
  const DiffPoly a = parameter(m, "a");
  const auto u = [&](int k) { return m.fields.var("u", k); };
  const auto xi = [&](int k) { return m.fields.var("xi", k); };
  const DiffPoly xi_x = -(DiffPoly(6) - a) * u(1) * xi(2) - a * xi(1) * u(2) - xi(4);
  const DiffPoly u_x = -Rational(6) * u(1) * u(2) + a * xi(1) * xi(3) - u(4);
  m.xt_equations = {m.fields.tdot("xi", 1) - xi_x, m.fields.tdot("u", 1) - u_x};
  m.evolution = {{"u", dinv(u_x)}, {"xi", dinv(xi_x)}};
  m.superspace_equation = family_super_equation(a);
  return m;
}

/// Integrand of the superspace Hamiltonian: 1/2 [-2 D^2Phi (D^3Phi)^2 + D^4Phi D^5Phi].
inline SuperExpr skdv2_super_hamiltonian(const Superfield& sf = {}) {
  return SuperExpr{-sf.sd(2) * sf.sd(3) * sf.sd(3) + Rational(1, 2) * sf.sd(4) * sf.sd(5)};
}

inline ModelDef skdv2_lagrangian(const ParamMap& params) {
  auto it = params.find("a");
  if (it != params.end() && it->second != 2)
    throw Error("a Lagrangian is registered only for a = 2 (got a = " + to_string(it->second) + ")");
  FieldTable t{{"u", Parity::Even}, {"psi", Parity::Odd}, {"xi", Parity::Odd}};
  ModelDef m{"skdv2_lagrangian", t, ParamMap{{"a", Rational(2)}}, {}, {}, {}, {}, {}, {}};
  const auto u = [&](int k) { return t.var("u", k); };
  const auto psi = [&](int k) { return t.var("psi", k); };
  const auto xi = [&](int k) { return t.var("xi", k); };
  const Rational h(1, 2);
  m.lagrangian = FirstOrderLagrangian{-h * u(1) * t.tdot("u") + h * psi(0) * t.tdot("psi") - pow(u(1), 3) -
                                          Rational(2) * u(0) * psi(0) * psi(2) + h * u(2) * u(2) -
                                          xi(2) * psi(2) + h * xi(2) * xi(3),
                                      t};
  m.evolution = {
      {"u", Rational(2) * psi(0) * psi(1) - Rational(3) * u(1) * u(1) - u(3)},
      {"psi", -Rational(4) * u(1) * psi(1) - Rational(2) * psi(0) * u(2) - psi(3)},
      {"xi", -Rational(2) * dinv(u(1) * psi(1)) - Rational(2) * psi(0) * u(1) - psi(2)},
  };
  const ModelDef pot = skdv_a_potential(ParamMap{{"a", Rational(2)}});
  m.xt_equations = pot.xt_equations;
  m.superspace_equation = pot.superspace_equation;
  m.superspace_hamiltonian = skdv2_super_hamiltonian();
  return m;
}

/// Evolution equations only; i and k are symbolic constants (i^2 = -1 is not
/// encoded). Starred fields are independent fields qc, phic.
inline ModelDef snlse_stub() {
  FieldTable t{{"phi", Parity::Odd}, {"phic", Parity::Odd}, {"q", Parity::Even}, {"qc", Parity::Even}};
  ModelDef m{"snlse_stub", t, {}, {}, {}, {}, {}, {}, {}};
  declare_parameter(m, "i");
  declare_parameter(m, "k");
  const DiffPoly i = m.fields.var("i");
  const DiffPoly k = m.fields.var("k");
  const auto f = [&](const char* n, int o) { return m.fields.var(n, o); };
  const DiffPoly ik2 = Rational(2) * i * k;
  m.evolution = {
      {"q", i * f("q", 2) - ik2 * f("qc", 0) * f("q", 0) * f("q", 0) -
                ik2 * f("qc", 0) * f("phi", 1) * f("phi", 0) + ik2 * f("q", 0) * f("phi", 0) * f("phic", 1)},
      {"phi", i * f("phi", 2) - ik2 * f("qc", 0) * f("q", 0) * f("phi", 0)},
  };
  return m;
}

}  // namespace models

inline ModelDef get_model(std::string_view name, const ParamMap& params = {}) {
  for (const auto& [k, v] : params)
    if (k != "a") throw Error("unknown model parameter '" + k + "'");
  ModelDef m;
  if (name == "kdv") {
    m = models::kdv();
  } else if (name == "kdv_potential") {
    m = models::kdv_potential();
  } else if (name == "skdv_a") {
    m = models::skdv_a(params);
  } else if (name == "skdv_a_potential") {
    m = models::skdv_a_potential(params);
  } else if (name == "skdv2_lagrangian") {
    m = models::skdv2_lagrangian(params);
  } else if (name == "snlse_stub") {
    m = models::snlse_stub();
  } else {
    throw Error("unknown model '" + std::string(name) + "'");
  }
  m.validate();
  return m;
}

}  // namespace skdv
