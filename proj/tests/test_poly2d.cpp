#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "c1fem/poly2d.hpp"

using namespace c1fem;

namespace {

Poly2D random_q(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Poly2D p(k, k);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j)
      p.coeff(i, j) = u(rng);
  return p;
}

} // namespace

TEST(Poly2DEval, MonomialValue) {
  const Poly2D p = Poly2D::monomial(2, 1);
  EXPECT_DOUBLE_EQ(p.eval(1.0, 1.0), 1.0);
}

TEST(Poly2DEval, FirstDerivative) {
  const Poly2D p = Poly2D::monomial(2, 1);
  EXPECT_DOUBLE_EQ(p.eval(2.0, 3.0, 1, 0), 12.0);
}

TEST(Poly2DEval, MixedDerivative) {
  const Poly2D p = Poly2D::monomial(2, 2);
  EXPECT_DOUBLE_EQ(p.eval(0.5, 0.5, 1, 1), 1.0);
}

TEST(Poly2DEval, RejectsDerivativeOrderAboveFour) {
  const Poly2D p = Poly2D::monomial(6, 6);
  EXPECT_THROW(p.eval(0.5, 0.5, 5, 0), InvalidArgument);
  EXPECT_THROW(p.eval(0.5, 0.5, 0, -1), InvalidArgument);
}

TEST(Poly2DEval, DerivativeBeyondDegreeIsZero) {
  const Poly2D p = Poly2D::monomial(2, 1);
  EXPECT_EQ(p.eval(0.3, 0.7, 3, 0), 0.0);
}

TEST(Poly2DEval, ExpansionPointDoesNotChangeValues) {
  std::mt19937_64 rng(11);
  const Poly2D p = random_q(6, rng);
  const Poly2D q = p.about(0.5, 0.5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < 20; ++s) {
    const double x = u(rng), y = u(rng);
    for (int dx = 0; dx <= 2; ++dx)
      for (int dy = 0; dy <= 2; ++dy)
        EXPECT_NEAR(q.eval(x, y, dx, dy), p.eval(x, y, dx, dy), 1e-11 * (1.0 + std::abs(p.eval(x, y, dx, dy))));
  }
}

TEST(Poly2DConstruction, DegreeCapEnforced) {
  EXPECT_NO_THROW(Poly2D(12, 12));
  EXPECT_THROW(Poly2D(13, 0), InvalidArgument);
  EXPECT_THROW(Poly2D(0, -1), InvalidArgument);
}

TEST(Poly2DSpaces, MembershipPredicates) {
  Poly2D p(4, 4);
  p.coeff(4, 4) = 1.0;
  EXPECT_TRUE(p.in_q(4));
  EXPECT_FALSE(p.in_p(4));
  EXPECT_TRUE(p.in_p(8));
  Poly2D r(5, 0);
  r.coeff(5, 0) = 1.0;
  EXPECT_FALSE(r.in_q(4));
  EXPECT_TRUE(r.in_p(5));
}

TEST(MonomialBasis, Q1Ordering) {
  const BasisList b = monomial_basis(SpaceLabel::Qk, 1);
  ASSERT_EQ(b.size(), 4u);
  const double x = 0.3, y = 0.7;
  EXPECT_DOUBLE_EQ(b[0].eval(x, y), 1.0);
  EXPECT_DOUBLE_EQ(b[1].eval(x, y), y);
  EXPECT_DOUBLE_EQ(b[2].eval(x, y), x);
  EXPECT_DOUBLE_EQ(b[3].eval(x, y), x * y);
}

TEST(MonomialBasis, P4AndQ4Lengths) {
  EXPECT_EQ(monomial_basis(SpaceLabel::Pk, 4).size(), 15u);
  EXPECT_EQ(monomial_basis(SpaceLabel::Qk, 4).size(), 25u);
}

TEST(MonomialBasis, LengthsMatchDimensionFormulas) {
  for (int k = 0; k <= 12; ++k) {
    EXPECT_EQ(monomial_basis(SpaceLabel::Pk, k).size(), static_cast<std::size_t>((k + 1) * (k + 2) / 2)) << k;
    EXPECT_EQ(monomial_basis(SpaceLabel::Qk, k).size(), static_cast<std::size_t>((k + 1) * (k + 1))) << k;
  }
}

TEST(MonomialBasis, PkMembersAreInPk) {
  for (int k = 0; k <= 8; ++k)
    for (const auto& p : monomial_basis(SpaceLabel::Pk, k).functions)
      EXPECT_TRUE(p.in_p(k));
}

TEST(LinearCombination, UnitCoefficientGivesConstant) {
  const BasisList b = monomial_basis(SpaceLabel::Qk, 1);
  const std::vector<double> c{1.0, 0.0, 0.0, 0.0};
  const Poly2D p = linear_combination(c, b);
  EXPECT_DOUBLE_EQ(p.eval(0.2, 0.9), 1.0);
  EXPECT_DOUBLE_EQ(p.eval(0.2, 0.9, 1, 0), 0.0);
}

TEST(LinearCombination, ZeroCoefficientsGiveZero) {
  const BasisList b = monomial_basis(SpaceLabel::Pk, 3);
  const std::vector<double> c(b.size(), 0.0);
  const Poly2D p = linear_combination(c, b);
  for (double v : p.coefficients())
    EXPECT_EQ(v, 0.0);
}

TEST(LinearCombination, XPlusY) {
  BasisList b;
  b.functions = {Poly2D::monomial(1, 0), Poly2D::monomial(0, 1)};
  const std::vector<double> c{1.0, 1.0};
  EXPECT_DOUBLE_EQ(linear_combination(c, b).eval(1.0, 2.0), 3.0);
}

TEST(LinearCombination, LengthMismatchRejected) {
  const BasisList b = monomial_basis(SpaceLabel::Qk, 1);
  const std::vector<double> c{1.0, 2.0};
  EXPECT_THROW(linear_combination(c, b), InvalidArgument);
}

TEST(Poly2DProperty, DerivativeMatchesCenteredDifference) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const double step = 1e-5;
  for (int k = 1; k <= 8; ++k)
    for (int trial = 0; trial < 10; ++trial) {
      const Poly2D p = random_q(k, rng);
      const double x = u(rng), y = u(rng);
      const double fd = (p.eval(x + step, y) - p.eval(x - step, y)) / (2 * step);
      const double exact = p.eval(x, y, 1, 0);
      EXPECT_NEAR(fd, exact, 1e-6 * std::max(1.0, std::abs(exact))) << "k=" << k;
    }
}

TEST(Poly2DProperty, LinearCombinationIsLinear) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 1; k <= 6; ++k) {
    const BasisList b = monomial_basis(SpaceLabel::Qk, k);
    std::vector<double> c1(b.size()), c2(b.size()), mix(b.size());
    for (auto& v : c1)
      v = u(rng);
    for (auto& v : c2)
      v = u(rng);
    const double a = u(rng), s = u(rng);
    for (std::size_t i = 0; i < b.size(); ++i)
      mix[i] = a * c1[i] + s * c2[i];
    const Poly2D p1 = linear_combination(c1, b), p2 = linear_combination(c2, b), pm = linear_combination(mix, b);
    for (int t = 0; t < 20; ++t) {
      const double x = 0.5 + 0.5 * u(rng), y = 0.5 + 0.5 * u(rng);
      EXPECT_NEAR(pm.eval(x, y), a * p1.eval(x, y) + s * p2.eval(x, y), 1e-12);
    }
  }
}

TEST(ShiftedLegendre, ConversionToMonomialsMatchesDirectValues) {
  // P_2(2t-1) = 6t^2 - 6t + 1
  const int k = 2;
  std::vector<double> leg(static_cast<std::size_t>((k + 1) * (k + 1)), 0.0);
  leg[2 * (k + 1) + 0] = 1.0;
  const Poly2D p = detail::legendre_to_monomial(std::span<const double>(leg), k);
  for (double t : {0.0, 0.25, 0.6, 1.0})
    EXPECT_NEAR(p.eval(t, 0.37), 6 * t * t - 6 * t + 1, 1e-14);
}

TEST(ShiftedLegendre, DerivativeTableMatchesClosedForm) {
  // P_3(2t-1) = 20t^3 - 30t^2 + 12t - 1
  for (double t : {0.0, 0.3, 0.75, 1.0}) {
    const auto d0 = detail::shifted_legendre_derivative(3, t, 0);
    const auto d1 = detail::shifted_legendre_derivative(3, t, 1);
    const auto d2 = detail::shifted_legendre_derivative(3, t, 2);
    EXPECT_NEAR(static_cast<double>(d0[3]), 20 * t * t * t - 30 * t * t + 12 * t - 1, 1e-14);
    EXPECT_NEAR(static_cast<double>(d1[3]), 60 * t * t - 60 * t + 12, 1e-13);
    EXPECT_NEAR(static_cast<double>(d2[3]), 120 * t - 60, 1e-12);
  }
}
