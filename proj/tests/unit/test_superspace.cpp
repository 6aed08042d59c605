#include <gtest/gtest.h>

#include "skdv/models/models.hpp"
#include "skdv/superspace/superspace.hpp"
#include "support/random_poly.hpp"

using namespace skdv;

namespace {

struct SuperTest : ::testing::Test {
  FieldTable t{{"u", Parity::Even}, {"xi", Parity::Odd}};
  Superfield sf;
  DiffPoly u(int k = 0) const { return t.var("u", k); }
  DiffPoly xi(int k = 0) const { return t.var("xi", k); }
  SuperExpr D(int k) const { return SuperExpr{sf.sd(k)}; }
};

TEST_F(SuperTest, ComponentsOfDerivativesOfPhi) {
  EXPECT_EQ(to_components(D(0)), std::make_pair(xi(), u()));
  EXPECT_EQ(to_components(D(1)), std::make_pair(u(), xi(1)));
  EXPECT_EQ(to_components(D(2)), std::make_pair(xi(1), u(1)));
  EXPECT_EQ(to_components(D(3)), std::make_pair(u(1), xi(2)));
  EXPECT_EQ(to_components(D(8)), std::make_pair(xi(4), u(4)));
}

TEST_F(SuperTest, CovariantDerivativeSquaresToDx) {
  EXPECT_EQ(super_d(D(0)), D(1));
  EXPECT_EQ(super_d(D(0), 2), D(2));
  EXPECT_EQ(super_d(D(1), 3), D(4));
  const SuperExpr e{sf.sd(1) * sf.sd(2) + u(1) * sf.sd(0)};
  EXPECT_EQ(to_components(super_d(e, 2)), to_components(dx(e)));
}

TEST_F(SuperTest, ThetaAndComponentAtoms) {
  EXPECT_EQ(super_d(theta_symbol()), SuperExpr{DiffPoly(1)});
  EXPECT_EQ(super_d(SuperExpr{xi()}), SuperExpr(DiffPoly{}, xi(1)));
  EXPECT_EQ(super_d(SuperExpr{u(), xi()}), SuperExpr(xi(), u(1)));
}

TEST_F(SuperTest, GradedLeibniz) {
  // D(Phi DPhi) = (DPhi)^2 - Phi D^2Phi.
  const SuperExpr lhs = super_d(SuperExpr{sf.sd(0) * sf.sd(1)});
  EXPECT_EQ(lhs, SuperExpr{sf.sd(1) * sf.sd(1) - sf.sd(0) * sf.sd(2)});
  EXPECT_TRUE((D(0) * D(0)).is_zero());
  EXPECT_FALSE((D(1) * D(1)).is_zero());
}

TEST_F(SuperTest, DerivativeInComponents) {
  // D(b + theta t) = t + theta b_x.
  gen::RandomPoly g(t, 41);
  for (int i = 0; i < 50; ++i) {
    const SuperExpr e = gen::random_super(g, 3, 4, sf);
    const auto [b, th] = to_components(e);
    const auto [db, dth] = to_components(super_d(e));
    EXPECT_EQ(db, th) << to_string(e);
    EXPECT_EQ(dth, dx(b)) << to_string(e);
  }
}

TEST_F(SuperTest, BerezinIntegral) {
  EXPECT_EQ(berezin(D(0)), u());
  EXPECT_EQ(berezin(SuperExpr{sf.sd(0) * sf.sd(1)}), u() * u() - xi() * xi(1));
  EXPECT_EQ(berezin(theta_symbol()), DiffPoly(1));
  EXPECT_TRUE(berezin(SuperExpr{u()}).is_zero());
}

TEST_F(SuperTest, SuperHamiltonianIntegrand) {
  const DiffPoly h = berezin(models::skdv2_super_hamiltonian());
  EXPECT_EQ(h, -pow(u(1), 3) + Rational(2) * u(1) * xi(1) * xi(2) + Rational(1, 2) * u(2) * u(2) -
                   Rational(1, 2) * xi(2) * xi(3));
}

TEST_F(SuperTest, SuperComponentMatch) {
  const SuperExpr Hbar = models::skdv2_super_hamiltonian();
  const DiffPoly component = -berezin(Hbar) + dx(u() * u(3));
  auto identity = [](const DiffPoly& p) { return p; };
  const SuperMatch ok = check_super_component_match(Hbar, component, identity);
  EXPECT_TRUE(ok.match) << ok.diagnostic;
  ASSERT_TRUE(ok.witness);
  const SuperMatch flipped = check_super_component_match(-Hbar, component, identity);
  EXPECT_FALSE(flipped.match);
  EXPECT_FALSE(flipped.diagnostic.empty());
}

TEST_F(SuperTest, ShiftSuperfield) {
  EXPECT_EQ(shift_superfield(D(0)), D(2));
  EXPECT_EQ(shift_superfield(SuperExpr{sf.sd(1) * sf.sd(3)}), SuperExpr{sf.sd(3) * sf.sd(5)});
  const SuperExpr odd = shift_superfield(D(0), 1);
  EXPECT_EQ(odd, D(1));
  EXPECT_EQ(*odd.body.parity(), Parity::Even);
}

TEST_F(SuperTest, Rendering) {
  EXPECT_EQ(to_string(D(0)), "Phi");
  EXPECT_EQ(to_string(SuperExpr{u(), xi()}), "u + theta*(xi)");
}

TEST_F(SuperTest, NonlocalIsRejected) {
  EXPECT_THROW(to_components(SuperExpr{make_nonlocal(u(1) * xi(1)) * sf.sd(0)}), UnsupportedError);
}

}  // namespace
