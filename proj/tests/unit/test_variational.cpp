#include <gtest/gtest.h>

#include "skdv/core/render.hpp"
#include "skdv/variational/lagrangian.hpp"
#include "support/lattice_oracle.hpp"
#include "support/random_poly.hpp"

using namespace skdv;
using variational::partial_left;
using variational::partial_right;

namespace {

struct VarTest : ::testing::Test {
  FieldTable t{{"u", Parity::Even}, {"psi", Parity::Odd}, {"xi", Parity::Odd}};
  DiffPoly u(int k = 0) const { return t.var("u", k); }
  DiffPoly psi(int k = 0) const { return t.var("psi", k); }
  DiffPoly xi(int k = 0) const { return t.var("xi", k); }
  DiffPoly ut() const { return t.tdot("u"); }
  DiffPoly psit() const { return t.tdot("psi"); }

  FirstOrderLagrangian skdv2() const {
    const Rational h(1, 2);
    return {-h * u(1) * ut() + h * psi() * psit() - pow(u(1), 3) - Rational(2) * u() * psi() * psi(2) +
                h * u(2) * u(2) - xi(2) * psi(2) + h * xi(2) * xi(3),
            t};
  }
};

TEST_F(VarTest, PartialLeft) {
  EXPECT_EQ(partial_left(Rational(1, 2) * psi() * psit(), t.time_atom("psi")), Rational(-1, 2) * psi());
  EXPECT_EQ(partial_left(Rational(-1, 2) * u(1) * ut(), t.time_atom("u")), Rational(-1, 2) * u(1));
  EXPECT_EQ(partial_left(pow(u(1), 3), t.atom("u", 1)), Rational(3) * u(1) * u(1));
  EXPECT_TRUE(partial_left(u(2), t.atom("u", 1)).is_zero());
}

TEST_F(VarTest, PartialRightDiffersByGradedSign) {
  const DiffPoly p = psi() * xi(1) * u();
  EXPECT_EQ(partial_left(p, t.atom("psi")), xi(1) * u());
  EXPECT_EQ(partial_right(p, t.atom("psi")), -(xi(1) * u()));
  EXPECT_EQ(partial_left(p, t.atom("u")), partial_right(p, t.atom("u")));
}

TEST_F(VarTest, PartialRejectsNonlocalVariable) {
  const DiffPoly n = make_nonlocal(u(1) * psi(1));
  const Atom& a = n.begin()->first.front();
  EXPECT_THROW(partial_left(n, a), Error);
}

TEST_F(VarTest, EulerLagrangeExamples) {
  EXPECT_EQ(euler_lagrange({Rational(1, 2) * u(2) * u(2), t}, "u"), u(4));
  EXPECT_EQ(variational_derivative({pow(u(1), 3), t}, "u"), Rational(-6) * u(1) * u(2));
  EXPECT_EQ(variational_derivative({Rational(1, 2) * psi() * psi(1), t}, "psi"), psi(1));
  EXPECT_TRUE(euler_lagrange({dx(u() * psi() * xi(2)), t}, "psi").is_zero());
  EXPECT_THROW(euler_lagrange({u(), t}, "v"), UnknownFieldError);
  EXPECT_THROW(variational_derivative({u() * ut(), t}, "u"), Error);
}

TEST_F(VarTest, NonlocalVariation) {
  FieldTable ps = phase_space(t);
  const DiffPoly g = Rational(2) * dinv(u(1) * psi(1)) + Rational(2) * psi() * u(1) + psi(2);
  const LocalFunctional H{ps.var("Pi_xi") * g, ps};
  EXPECT_EQ(variational_derivative(H, "Pi_xi"), g);
  // int Pi * Dinv(F) = -int Dinv(Pi) * F.
  const DiffPoly du = variational_derivative(H, "u");
  EXPECT_EQ(du, Rational(2) * dx(dinv(ps.var("Pi_xi")) * psi(1)) - Rational(2) * dx(ps.var("Pi_xi") * psi()));
}

TEST_F(VarTest, TotalDerivativeWitness) {
  auto r = is_total_derivative(u(1) * u(2));
  ASSERT_TRUE(r.exact);
  EXPECT_EQ(*r.witness, Rational(1, 2) * u(1) * u(1));
  EXPECT_FALSE(is_total_derivative(pow(u(1), 3)).exact);
  auto z = is_total_derivative(psi() * psi(2) - dx(psi() * psi(1)));
  ASSERT_TRUE(z.exact);
  EXPECT_TRUE(z.witness->is_zero());
  EXPECT_THROW(is_total_derivative(make_nonlocal(u(1) * psi(1)) * psi()), UndecidableError);
}

TEST_F(VarTest, EquivalenceModuloTotalDerivatives) {
  EXPECT_TRUE(equivalent(u() * u(2), -(u(1) * u(1))));
  EXPECT_FALSE(equivalent(u() * u(2), u(1) * u(1)));
}

TEST_F(VarTest, IntegrateByPartsLowersTopOrder) {
  const DiffPoly p = u() * u(4) + psi() * xi(3);
  auto [prim, rest] = variational::integrate_by_parts(p);
  EXPECT_EQ(dx(prim) + rest, p);
  EXPECT_LE(variational::max_order(rest, t.atom("u")), 2);
}

TEST_F(VarTest, LegendreOfTheSkdv2Lagrangian) {
  const auto L = skdv2();
  const auto m = momenta(L);
  EXPECT_EQ(m.at("u"), Rational(-1, 2) * u(1));
  EXPECT_EQ(m.at("psi"), Rational(-1, 2) * psi());
  EXPECT_TRUE(m.at("xi").is_zero());
  const auto r = legendre(L);
  EXPECT_FALSE(contains_time_atoms(r.hamiltonian.density));
  const DiffPoly want = pow(u(1), 3) + Rational(2) * u() * psi() * psi(2) - Rational(1, 2) * u(2) * u(2) +
                        xi(2) * psi(2) - Rational(1, 2) * xi(2) * xi(3);
  EXPECT_TRUE(equivalent(r.hamiltonian.density, want)) << to_string(r.hamiltonian.density);
}

TEST_F(VarTest, LegendreOfPureKineticTermVanishes) {
  const auto r = legendre({Rational(1, 2) * psi() * psit(), t});
  EXPECT_TRUE(r.hamiltonian.density.is_zero());
}

TEST_F(VarTest, LegendreRejectsNonlinearVelocities) {
  EXPECT_THROW(legendre({ut() * ut(), t}), Error);
}

TEST_F(VarTest, Hessian) {
  const Hessian h = hessian(skdv2());
  EXPECT_TRUE(h.is_degenerate);
  for (const auto& row : h.entries)
    for (const auto& e : row) EXPECT_TRUE(e.is_zero());

  FieldTable one{{"u", Parity::Even}};
  const Hessian k = hessian({Rational(1, 2) * one.tdot("u") * one.tdot("u"), one});
  EXPECT_FALSE(k.is_degenerate);
  EXPECT_EQ(k.entries[0][0], DiffPoly(1));

  EXPECT_TRUE(hessian({one.tdot("u") * one.var("u"), one}).is_degenerate);
}

TEST_F(VarTest, RegularLegendre) {
  FieldTable one{{"u", Parity::Even}};
  const DiffPoly ut1 = one.tdot("u");
  const auto r = regular_legendre({Rational(1, 2) * ut1 * ut1 - Rational(1, 2) * one.var("u") * one.var("u"), one});
  const FieldTable ps = phase_space(one);
  EXPECT_EQ(r.hamiltonian.density,
            Rational(1, 2) * ps.var("Pi_u") * ps.var("Pi_u") + Rational(1, 2) * ps.var("u") * ps.var("u"));
}

TEST_F(VarTest, SpacetimeEulerLagrangeGivesTheFieldEquations) {
  const auto L = skdv2();
  const LocalFunctional F{L.density, t};
  // delta/delta u: u_xt - 2 psi psi_xx + 6 u_x u_xx + u_4x.
  EXPECT_EQ(euler_lagrange_spacetime(F, "u"),
            dx(ut()) - Rational(2) * psi() * psi(2) + Rational(6) * u(1) * u(2) + u(4));
  // delta/delta xi: -(psi - xi_x)_4x.
  EXPECT_EQ(euler_lagrange_spacetime(F, "xi"), -dx(psi() - xi(1), 4));
}

// The lattice oracle computes the gradient of the discretized functional
// from nilpotent perturbations; it must agree with the Euler operator.
TEST_F(VarTest, EulerAgreesWithLatticeGradient) {
  gen::RandomPoly g(t, 11);
  for (int trial = 0; trial < 60; ++trial) {
    const DiffPoly p = g.homogeneous(Parity::Even, {3, 3, 3, 4});
    const oracle::State s = oracle::random_state(t, g.rng());
    oracle::Evaluator ev(s);
    for (const auto& spec : t.specs()) {
      const oracle::Field lattice = oracle::gradient(p, spec, s, true);
      const oracle::Field symbolic = ev.eval(euler_lagrange({p, t}, spec.name));
      double scale = 1;
      for (const auto& v : symbolic) scale = std::max(scale, oracle::norm(v));
      EXPECT_LT(oracle::distance(lattice, symbolic), 1e-9 * scale) << to_string(p) << " along " << spec.name;
    }
  }
}

TEST_F(VarTest, LatticeGradientSeesTheGradedSide) {
  std::mt19937_64 rng(5);
  const DiffPoly p = psi() * xi(1) * u();
  const oracle::State s = oracle::random_state(t, rng);
  oracle::Evaluator ev(s);
  const oracle::Field symbolic = ev.eval(euler_lagrange({p, t}, "psi"));
  EXPECT_LT(oracle::distance(oracle::gradient(p, t.at("psi"), s, true), symbolic), 1e-10);
  EXPECT_GT(oracle::distance(oracle::gradient(p, t.at("psi"), s, false), symbolic), 1e-3);
}

}  // namespace
