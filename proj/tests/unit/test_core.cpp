#include <gtest/gtest.h>

#include "skdv/core/dinv.hpp"
#include "skdv/core/field_table.hpp"
#include "skdv/core/render.hpp"

using namespace skdv;

namespace {

struct CoreTest : ::testing::Test {
  FieldTable t{{"u", Parity::Even}, {"psi", Parity::Odd}, {"xi", Parity::Odd}};
  DiffPoly u(int k = 0) const { return t.var("u", k); }
  DiffPoly psi(int k = 0) const { return t.var("psi", k); }
  DiffPoly xi(int k = 0) const { return t.var("xi", k); }
  Atom a(const char* f, int k = 0) const { return t.atom(f, k); }
};

TEST(Rational, ParsesIntegersFractionsAndDecimals) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-1/2"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("+.5"), Rational(1, 2));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
  EXPECT_EQ(to_string(Rational(-3, 6)), "-1/2");
}

TEST(FieldTableTest, MomentaAreLinkedBothWays) {
  FieldTable t{{"u", Parity::Even}, {"psi", Parity::Odd}};
  t.add_momentum("u").add_momentum("psi");
  EXPECT_EQ(*t.at("u").conjugate, "Pi_u");
  EXPECT_EQ(*t.at("Pi_psi").conjugate, "psi");
  EXPECT_EQ(t.at("Pi_psi").parity, Parity::Odd);
  EXPECT_NO_THROW(t.validate());
  EXPECT_THROW(t.add(FieldSpec{"u", Parity::Even}), Error);
  EXPECT_THROW(t.at("v"), UnknownFieldError);
  EXPECT_THROW(t.add_momentum("Pi_u"), Error);
}

TEST(FieldTableTest, CheckRejectsUndeclaredFields) {
  FieldTable t{{"u", Parity::Even}};
  FieldTable other{{"v", Parity::Even}};
  EXPECT_THROW(t.check(other.var("v")), UnknownFieldError);
  EXPECT_NO_THROW(t.check(t.var("u", 3)));
}

TEST_F(CoreTest, NormalizeSortsWithGradedSign) {
  auto m = normalize(Monomial{Rational(1), {a("psi", 1), a("psi")}});
  ASSERT_TRUE(m);
  EXPECT_EQ(m->coeff, Rational(-1));
  EXPECT_EQ(m->atoms[0], a("psi"));
  EXPECT_EQ(m->atoms[1], a("psi", 1));

  EXPECT_FALSE(normalize(Monomial{Rational(3), {a("psi", 1), a("psi", 1)}}));

  auto e = normalize(Monomial{Rational(2), {a("u", 1), a("u", 1)}});
  ASSERT_TRUE(e);
  EXPECT_EQ(e->coeff, Rational(2));
  EXPECT_EQ(e->atoms.size(), 2u);
}

TEST_F(CoreTest, NormalizeIsIdempotent) {
  auto m = normalize(Monomial{Rational(5), {a("xi", 2), a("u"), a("psi", 1), a("u", 3)}});
  ASSERT_TRUE(m);
  auto again = normalize(*m);
  ASSERT_TRUE(again);
  EXPECT_EQ(again->coeff, m->coeff);
  EXPECT_EQ(again->atoms, m->atoms);
}

TEST_F(CoreTest, AdditionCancels) {
  EXPECT_TRUE((u(1) + (-u(1))).is_zero());
  EXPECT_TRUE((psi() * psi(1) + psi(1) * psi()).is_zero());
  EXPECT_EQ(pow(u(1), 3) + pow(u(1), 3), Rational(2) * pow(u(1), 3));
}

TEST_F(CoreTest, MultiplicationIsGraded) {
  EXPECT_EQ(psi(1) * psi(), -(psi() * psi(1)));
  EXPECT_TRUE((psi() * psi()).is_zero());
  EXPECT_EQ((u() + psi()) * psi(), u() * psi());
  EXPECT_EQ(u(1) * psi(), psi() * u(1));
}

TEST_F(CoreTest, Parity) {
  EXPECT_EQ(*(psi() * xi()).parity(), Parity::Even);
  EXPECT_EQ(*(u() * xi()).parity(), Parity::Odd);
  EXPECT_FALSE((u() + psi()).parity());
  EXPECT_THROW((u() + psi()).require_parity("test"), ParityError);
  EXPECT_EQ(*DiffPoly().parity(), Parity::Even);
}

TEST_F(CoreTest, DxIsLeibniz) {
  EXPECT_EQ(dx(u(1)), u(2));
  EXPECT_EQ(dx(psi() * psi(1)), psi() * psi(2));
  EXPECT_EQ(dx(u() * u(1)), u(1) * u(1) + u() * u(2));
  EXPECT_EQ(dx(u(), 3), u(3));
  EXPECT_TRUE(dx(DiffPoly(7)).is_zero());
}

TEST_F(CoreTest, DxInvertsNonlocal) {
  const DiffPoly n = make_nonlocal(u(1) * psi(1));
  EXPECT_FALSE(is_local(n));
  EXPECT_EQ(dx(n), u(1) * psi(1));
  EXPECT_EQ(dx(Rational(3) * n), Rational(3) * u(1) * psi(1));
}

TEST_F(CoreTest, NonlocalAtomsStoreMonicArguments) {
  EXPECT_EQ(make_nonlocal(Rational(2) * u(1) * psi(1)), Rational(2) * make_nonlocal(u(1) * psi(1)));
  EXPECT_THROW(make_nonlocal(u() + psi()), ParityError);
}

TEST_F(CoreTest, DinvFindsLocalPrimitives) {
  EXPECT_EQ(dinv(u(2)), u(1));
  EXPECT_EQ(dinv(psi() * psi(2)), psi() * psi(1));
  EXPECT_EQ(dinv(u(1) * u(2)), Rational(1, 2) * u(1) * u(1));
  EXPECT_EQ(dinv(u(1) * psi(1)), make_nonlocal(u(1) * psi(1)));
  EXPECT_EQ(dinv(u(2), 2), u());
  EXPECT_TRUE(dinv(DiffPoly{}).is_zero());
}

TEST_F(CoreTest, DinvSplitsExactAndNonlocalParts) {
  const DiffPoly p = u(1) * psi(1) + psi(3);
  const DiffPoly r = dinv(p);
  EXPECT_EQ(dx(r), p);
  EXPECT_EQ(r, psi(2) + make_nonlocal(u(1) * psi(1)));
}

TEST_F(CoreTest, DinvRejectsMixedParity) { EXPECT_THROW(dinv(u() + psi()), ParityError); }

TEST_F(CoreTest, DeepNestingWarns) {
  std::vector<std::string> seen;
  auto saved = warning_handler();
  warning_handler() = [&](std::string_view m) { seen.emplace_back(m); };
  DiffPoly p = u(1) * psi(1);
  for (int i = 0; i < 3; ++i) p = make_nonlocal(p * u(1));
  warning_handler() = saved;
  EXPECT_FALSE(seen.empty());
}

TEST_F(CoreTest, Substitute) {
  EXPECT_EQ(substitute(psi(1), {{"psi", xi(1)}}), xi(2));
  FieldTable ps = t;
  ps.add_momentum("u").add_momentum("xi");
  const DiffPoly pi_u = ps.var("Pi_u");
  EXPECT_EQ(substitute(pi_u * u(1), {{"Pi_u", Rational(-1, 2) * u(1)}}), Rational(-1, 2) * u(1) * u(1));
  EXPECT_TRUE(substitute(ps.var("Pi_xi") * psi(), {{"Pi_xi", DiffPoly{}}}).is_zero());
  EXPECT_THROW(substitute(psi(), {{"psi", u()}}), ParityError);
}

TEST_F(CoreTest, SubstituteReachesInsideNonlocal) {
  const DiffPoly n = make_nonlocal(u(1) * psi(1));
  EXPECT_EQ(substitute(n, {{"psi", xi(1)}}), make_nonlocal(u(1) * xi(2)));
}

TEST_F(CoreTest, TimeDerivatives) {
  EXPECT_EQ(dt(u(1)), dx(t.tdot("u")));
  EXPECT_EQ(dt(psi() * psi(1)), t.tdot("psi") * psi(1) + psi() * dx(t.tdot("psi")));
  EXPECT_EQ(substitute_time_derivatives(dx(t.tdot("u"), 2), {{"u", u(3)}}), u(5));
}

TEST_F(CoreTest, Rendering) {
  EXPECT_EQ(to_string(u(1)), "u_x");
  EXPECT_EQ(to_string(u(2)), "u_2x");
  EXPECT_EQ(to_string(Rational(-1, 2) * u(1) * u(1)), "-1/2*u_x^2");
  EXPECT_EQ(to_string(make_nonlocal(u(1) * psi(1))), "Dinv(psi_x*u_x)");
  EXPECT_EQ(to_string(dx(t.tdot("u"))), "Dx(Tdot(u),1)");
  EXPECT_EQ(to_string(DiffPoly{}), "0");
  EXPECT_EQ(to_string(u() - psi() * xi()), "-psi*xi + u");
}

TEST_F(CoreTest, GradeInvolution) {
  EXPECT_EQ(grade_involution(u() + psi()), u() - psi());
  EXPECT_EQ(grade_involution(psi() * xi()), psi() * xi());
}

TEST_F(CoreTest, DropTermsWith) {
  FieldTable ps = t;
  ps.add_momentum("u");
  EXPECT_EQ(drop_terms_with(u() + ps.var("Pi_u") * u(1), [](const Atom& x) { return x.field == "Pi_u"; }), u());
}

}  // namespace
