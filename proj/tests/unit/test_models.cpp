#include <gtest/gtest.h>

#include "skdv/models/equivalence.hpp"

using namespace skdv;

namespace {

DiffPoly conservation_defect(const ModelDef& m, const DiffPoly& density) {
  SubstitutionRules flows(m.evolution.begin(), m.evolution.end());
  return substitute_time_derivatives(dt(density), flows);
}

TEST(Models, Registry) {
  for (const auto& n : model_names()) EXPECT_NO_THROW(get_model(n)) << n;
  EXPECT_THROW(get_model("burgers"), Error);
  EXPECT_THROW(get_model("skdv_a", {{"b", Rational(1)}}), Error);
  EXPECT_THROW(get_model("skdv2_lagrangian", {{"a", Rational(3)}}), Error);
  EXPECT_NO_THROW(get_model("skdv2_lagrangian", {{"a", Rational(2)}}));
}

TEST(Models, KdvIsHamiltonianWithDx) {
  const ModelDef m = get_model("kdv");
  const auto& u = m.rhs("u");
  EXPECT_EQ(u, dx(variational_derivative({*m.hamiltonian, m.fields}, "u")));
  EXPECT_TRUE(is_total_derivative(conservation_defect(m, *m.hamiltonian)).exact);
  EXPECT_THROW(m.rhs("v"), UnknownFieldError);
}

TEST(Models, PotentialKdvSatisfiesItsXtForm) {
  const ModelDef m = get_model("kdv_potential");
  SubstitutionRules flows(m.evolution.begin(), m.evolution.end());
  EXPECT_TRUE(substitute_time_derivatives(m.xt_equations[0], flows).is_zero());
  EXPECT_TRUE(is_total_derivative(conservation_defect(m, *m.hamiltonian)).exact);
}

TEST(Models, FamilyAtZeroDecouples) {
  const ModelDef m = get_model("skdv_a", {{"a", Rational(0)}});
  const FieldTable& t = m.fields;
  EXPECT_EQ(m.rhs("u"), -Rational(6) * t.var("u") * t.var("u", 1) - t.var("u", 3));
  EXPECT_EQ(m.rhs("xi"), -Rational(6) * t.var("u") * t.var("xi", 1) - t.var("xi", 3));
  EXPECT_FALSE(m.hamiltonian);
}

TEST(Models, FamilyKeepsSymbolicParameter) {
  const ModelDef m = get_model("skdv_a");
  EXPECT_EQ(m.fields.at("a").kind, FieldKind::Parameter);
  EXPECT_EQ(substitute(m.rhs("u"), {{"a", DiffPoly(Rational(0))}}),
            get_model("skdv_a", {{"a", Rational(0)}}).rhs("u"));
  EXPECT_NE(m.rhs("u"), get_model("skdv_a", {{"a", Rational(0)}}).rhs("u"));
}

TEST(Models, FamilyAtTwoConservesItsHamiltonian) {
  const ModelDef m = get_model("skdv_a", {{"a", Rational(2)}});
  ASSERT_TRUE(m.hamiltonian);
  EXPECT_TRUE(is_total_derivative(conservation_defect(m, *m.hamiltonian)).exact);
  // The same density is conserved along the whole family.
  const ModelDef any = get_model("skdv_a");
  EXPECT_TRUE(is_total_derivative(conservation_defect(any, *m.hamiltonian)).exact);
  const FieldTable& t = m.fields;
  const DiffPoly wrong = *m.hamiltonian - t.var("u") * t.var("xi") * t.var("xi", 1);
  EXPECT_FALSE(is_total_derivative(conservation_defect(m, wrong)).exact);
}

TEST(Models, PotentialFamilyAtTwoMatchesTheLagrangianModel) {
  const ModelDef pot = get_model("skdv_a_potential", {{"a", Rational(2)}});
  const ModelDef lag = get_model("skdv2_lagrangian");
  ASSERT_EQ(pot.xt_equations.size(), 2u);
  EXPECT_EQ(pot.xt_equations, lag.xt_equations);
  const FieldTable& t = pot.fields;
  EXPECT_EQ(pot.xt_equations[1], t.tdot("u", 1) + Rational(6) * t.var("u", 1) * t.var("u", 2) -
                                     Rational(2) * t.var("xi", 1) * t.var("xi", 3) + t.var("u", 4));
}

TEST(Models, EvolutionSolvesTheXtSystemOnTheSecondaryConstraint) {
  const ModelDef m = get_model("skdv2_lagrangian");
  const FieldTable& t = m.fields;
  const SubstitutionRules on_surface{{"psi", t.var("xi", 1)}};
  SubstitutionRules flows;
  for (const auto& [f, r] : m.evolution) flows[f] = substitute(r, on_surface);
  for (const auto& e : m.xt_equations)
    EXPECT_TRUE(substitute_time_derivatives(e, flows).is_zero()) << to_string(e);
  // psi_t agrees with d_x of xi_t.
  EXPECT_EQ(flows.at("psi"), dx(flows.at("xi")));
}

TEST(Models, BosonicLimitOfTheLagrangian) {
  const ModelDef m = get_model("skdv2_lagrangian");
  const DiffPoly bos = substitute(m.lagrangian->density, {{"psi", DiffPoly{}}, {"xi", DiffPoly{}}});
  const ModelDef kdv = get_model("kdv_potential");
  EXPECT_EQ(to_string(bos), to_string(kdv.lagrangian->density));
}

TEST(Models, LagrangianAndHamiltonianAgree) {
  for (const char* name : {"skdv2_lagrangian", "kdv_potential"}) {
    const CheckOutcome c = check_lagrangian_hamiltonian_equivalence(get_model(name));
    EXPECT_TRUE(c.ok) << name << ": " << ::testing::PrintToString(c.details);
  }
  EXPECT_THROW(check_lagrangian_hamiltonian_equivalence(get_model("kdv")), Error);
}

TEST(Models, DroppingTheSecondaryTermBreaksEquivalence) {
  const ModelDef m = get_model("skdv2_lagrangian");
  const DBAReport r = run_dba(*m.lagrangian);
  const LocalFunctional full = symbolic_total_hamiltonian(r);
  const auto& ct = r.constraint("ct1");
  const LocalFunctional H{full.density - full.fields.var(ct.multiplier) * ct.density, full.fields};
  EXPECT_FALSE(check_lagrangian_hamiltonian_equivalence(m, r, H).ok);
  EXPECT_TRUE(check_lagrangian_hamiltonian_equivalence(m, r, full).ok);
}

TEST(Models, HamiltonEquationForms) {
  const ModelDef m = get_model("skdv2_lagrangian");
  const DBAReport r = run_dba(*m.lagrangian);
  std::map<std::string, DiffPoly> eq;
  for (const auto& [f, e] : hamilton_equation_forms(r, r.H_total)) eq[f] = e;
  ASSERT_EQ(eq.size(), 6u);
  const FieldTable& t = r.fields;
  // The psi and Pi_psi equations differ by a multiple of the secondary constraint.
  EXPECT_EQ(eq["Pi_psi"] - eq["psi"], Rational(2) * dx(t.var("psi") - t.var("xi", 1), 3));
  EXPECT_EQ(eq["Pi_xi"], dx(t.var("psi") - t.var("xi", 1), 4));
  // The Pi_u equation is d_x of the u equation.
  EXPECT_EQ(eq["Pi_u"], dx(eq["u"]));
}

TEST(Models, NormalizeEquation) {
  const FieldTable t{{"u", Parity::Even}};
  EXPECT_EQ(normalize_equation(Rational(2) * t.tdot("u") + t.var("u", 3)),
            t.tdot("u") + Rational(1, 2) * t.var("u", 3));
  EXPECT_EQ(normalize_equation(Rational(-3) * t.var("u", 3)), t.var("u", 3));
  EXPECT_TRUE(normalize_equation(DiffPoly{}).is_zero());
}

TEST(Models, SuperspaceFamilyExpansion) {
  using A = std::optional<Rational>;
  for (const A& a : {A{}, A{Rational(2)}, A{Rational(-7, 3)}}) {
    const CheckOutcome c = check_skdv_family_expansion(a);
    EXPECT_TRUE(c.ok) << ::testing::PrintToString(c.details);
  }
}

TEST(Models, SnlseStub) {
  const ModelDef m = get_model("snlse_stub");
  EXPECT_EQ(m.evolution.size(), 2u);
  EXPECT_EQ(m.fields.at("phi").parity, Parity::Odd);
  EXPECT_EQ(m.fields.at("i").kind, FieldKind::Parameter);
  EXPECT_FALSE(m.lagrangian);
  EXPECT_EQ(*m.rhs("phi").parity(), Parity::Odd);
}

TEST(Models, ValidateCatchesParityMismatch) {
  ModelDef m = get_model("kdv");
  m.evolution = {{"u", m.fields.var("u") * DiffPoly(Rational(1))}};
  EXPECT_NO_THROW(m.validate());
  ModelDef bad = get_model("skdv_a");
  bad.evolution = {{"xi", bad.fields.var("u")}};
  EXPECT_THROW(bad.validate(), ParityError);
}

}  // namespace
