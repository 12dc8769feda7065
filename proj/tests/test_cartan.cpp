#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "berg/cartan.hpp"
#include "berg/errors.hpp"

using namespace berg;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1.0); }

}  // namespace

TEST(CartanCatalog, TableRows) {
  auto d = CartanDomain::type_I(2, 3);
  EXPECT_EQ(d.a, 2);
  EXPECT_EQ(d.b, 1);
  EXPECT_EQ(d.r, 2);
  EXPECT_EQ(d.d, 6);
  EXPECT_EQ(d.p, 5);
  auto e = CartanDomain::type_II(6);
  EXPECT_EQ(e.d, 15);
  EXPECT_EQ(e.p, 10);
  EXPECT_EQ(e.r, 3);
  auto o = CartanDomain::type_II(5);
  EXPECT_EQ(o.b, 2);
  EXPECT_EQ(o.d, 10);
  EXPECT_EQ(o.p, 8);
  auto iv = CartanDomain::type_IV(7);
  EXPECT_EQ(iv.a, 5);
  EXPECT_EQ(iv.p, 7);
}

TEST(CartanCatalog, RecomputedFromMultiplicities) {
  const auto cat = catalog_up_to(16);
  EXPECT_GT(cat.size(), 30u);
  for (const auto& dom : cat) {
    EXPECT_EQ(dom.p, (dom.r - 1) * dom.a + dom.b + 2) << dom.name();
    EXPECT_EQ(dom.d, dom.r * (dom.r - 1) * dom.a / 2 + dom.b * dom.r + dom.r) << dom.name();
    EXPECT_LE(dom.d, 16);
  }
}

TEST(CartanCatalog, RejectsOutOfRange) {
  EXPECT_THROW(CartanDomain::type_I(3, 2), UnsupportedDomain);
  EXPECT_THROW(CartanDomain::type_II(4), UnsupportedDomain);
  EXPECT_THROW(CartanDomain::type_III(1), UnsupportedDomain);
  EXPECT_THROW(CartanDomain::type_IV(4), UnsupportedDomain);
}

TEST(CartanCatalog, ExceptionalAreUnsupported) {
  auto e = CartanDomain::exceptional_16();
  EXPECT_FALSE(e.supported());
  std::vector<cplx> z(16, 0.0);
  EXPECT_THROW(generic_norm(e, z), UnsupportedDomain);
  EXPECT_THROW(base_potential(CartanDomain::exceptional_27(), 1.0), UnsupportedDomain);
}

TEST(GenericNorm, OneAtOrigin) {
  for (const auto& dom : catalog_up_to(10)) {
    std::vector<cplx> z(static_cast<std::size_t>(dom.d), 0.0);
    EXPECT_NEAR(std::abs(generic_norm(dom, z) - 1.0), 0.0, 1e-15) << dom.name();
  }
}

TEST(GenericNorm, Ball) {
  std::vector<cplx> z{0.3, {0.0, 0.4}};
  EXPECT_NEAR(generic_norm(CartanDomain::ball(2), z).real(), 0.75, 1e-15);
}

TEST(GenericNorm, TypeIV) {
  std::vector<cplx> z{0.3, 0, 0, 0, 0};
  EXPECT_NEAR(generic_norm(CartanDomain::type_IV(5), z).real(), 0.8281, 1e-15);
}

TEST(GenericNorm, TypeIIIsSquareRootOfDeterminant) {
  // Z = [[0, s], [-s, 0]] block in a 5x5 skew matrix: det(I - Z Z^*) = (1-|s|^2)^4 padded
  auto dom = CartanDomain::type_II(5);
  std::vector<cplx> z(10, 0.0);
  z[0] = 0.5;
  EXPECT_NEAR(generic_norm(dom, z).real(), 0.75, 1e-14);
}

TEST(GenericNorm, ShapeMismatch) {
  std::vector<cplx> z(3, 0.0);
  EXPECT_THROW(generic_norm(CartanDomain::ball(2), z), ShapeMismatch);
}

TEST(BasePotential, HessianAtOrigin) {
  struct Case {
    CartanDomain dom;
    double mu;
  };
  for (const auto& c : {Case{CartanDomain::ball(1), 1.0}, Case{CartanDomain::ball(2), 1.0},
                        Case{CartanDomain::type_III(2), 2.0}, Case{CartanDomain::type_IV(5), 0.5},
                        Case{CartanDomain::type_II(5), 1.5}, Case{CartanDomain::type_I(2, 2), 1.0}}) {
    std::vector<cplx> z(static_cast<std::size_t>(c.dom.d), 0.0);
    auto m = metric_tensor(base_potential(c.dom, c.mu), z, 2);
    const CMatrix expect = c.mu * CMatrix::Identity(c.dom.d, c.dom.d);
    EXPECT_LT((m.T - expect).cwiseAbs().maxCoeff(), 1e-13) << c.dom.name();
    EXPECT_NEAR(std::abs(base_potential(c.dom, c.mu).value(z)), 0.0, 1e-15);
  }
}

TEST(BasePotential, OutsideDomainThrows) {
  std::vector<cplx> z{1.2};
  EXPECT_THROW(base_potential(CartanDomain::ball(1), 1.0).value(z), OutsideDomain);
}

TEST(RandomPoint, InsideDomain) {
  std::mt19937_64 rng(7);
  for (const auto& dom : {CartanDomain::ball(3), CartanDomain::type_I(2, 2), CartanDomain::type_III(2),
                          CartanDomain::type_IV(5), CartanDomain::type_II(5)}) {
    for (int i = 0; i < 20; ++i) {
      auto u = random_point(dom, 0.6, rng);
      EXPECT_TRUE(in_domain(dom, u)) << dom.name();
      EXPECT_GT(generic_norm(dom, raw_coordinates(dom, u)).real(), 0.0);
    }
  }
}

TEST(CartanCoefficients, SpotValues) {
  EXPECT_DOUBLE_EQ(cartan_a1(CartanDomain::ball(2), 1.0), -3.0);
  EXPECT_DOUBLE_EQ(cartan_a2(CartanDomain::ball(2), 1.0), 2.0);
  for (double mu : {0.5, 1.0, 3.0}) {
    EXPECT_DOUBLE_EQ(cartan_a1(CartanDomain::ball(1), mu), -1.0 / mu);
    EXPECT_NEAR(cartan_a2(CartanDomain::ball(1), mu), 0.0, 1e-15);
  }
  EXPECT_DOUBLE_EQ(cartan_a1(CartanDomain::type_III(2), 1.0), -4.5);
  EXPECT_DOUBLE_EQ(cartan_a2(CartanDomain::type_III(2), 1.0), 6.5);
}

TEST(CartanCoefficients, BallMatchesKnownFormula) {
  // a2 of the ball at mu = 1 is (d-1)d(d+1)(3d+2)/24
  for (int d = 1; d <= 8; ++d) {
    const double expect = (d - 1.0) * d * (d + 1.0) * (3.0 * d + 2.0) / 24.0;
    EXPECT_NEAR(cartan_a2(CartanDomain::ball(d), 1.0), expect, 1e-12 * std::max(1.0, expect));
  }
}

TEST(Pochhammer, Values) {
  EXPECT_EQ(pochhammer(3.0, 2), 12.0);
  EXPECT_EQ(pochhammer(-7.25, 0), 1.0);
  EXPECT_EQ(pochhammer(-1.0, 3), 0.0);
  EXPECT_THROW(pochhammer(1.0, -1), DomainViolation);
}

TEST(BergmanFunction, Values) {
  EXPECT_DOUBLE_EQ(bergman_function(CartanDomain::ball(2), 1.0, 3.0), 2.0);
  EXPECT_DOUBLE_EQ(bergman_function(CartanDomain::ball(1), 1.0, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(bergman_function(CartanDomain::type_III(2), 1.0, 4.0), 15.0);
  EXPECT_THROW(bergman_function(CartanDomain::ball(2), 1.0, 2.0), AlphaTooSmall);
}

TEST(BergmanPoly, Ball2) {
  auto poly = bergman_poly(CartanDomain::ball(2), 1.0);
  ASSERT_TRUE(poly.exact);
  EXPECT_EQ(poly.degree(), 2);
  EXPECT_EQ(poly.coefficients(), (std::vector<double>{2, -3, 1}));
  auto a = extract_coeffs(poly);
  EXPECT_EQ(a[1], -3.0);
  EXPECT_EQ(a[2], 2.0);
}

TEST(BergmanPoly, TypeIII2) {
  auto poly = bergman_poly(CartanDomain::type_III(2), 1.0);
  EXPECT_EQ(poly.coefficients(), (std::vector<double>{-3, 6.5, -4.5, 1}));
  EXPECT_EQ(poly.coefficient_string(1), "-9/2");
  EXPECT_EQ(poly.coefficient_string(2), "13/2");
}

TEST(BergmanPoly, MatchesClosedFormExactly) {
  for (const auto& dom : catalog_up_to(16)) {
    for (double mu : {0.5, 1.0, 2.0, 7.0 / 3.0}) {
      auto poly = bergman_poly(dom, mu);
      ASSERT_TRUE(poly.exact);
      const auto q = *rational_mu(mu);
      const auto n = poly.rational.size();
      EXPECT_EQ(poly.rational[n - 2], cartan_a1_exact(dom, q)) << dom.name() << " mu=" << mu;
      const Rational a2 = n >= 3 ? poly.rational[n - 3] : Rational(0);
      EXPECT_EQ(a2, cartan_a2_exact(dom, q)) << dom.name() << " mu=" << mu;
    }
  }
}

TEST(BergmanPoly, ExtendedPrecisionForIrrationalMu) {
  const double mu = std::sqrt(2.0);
  for (const auto& dom : {CartanDomain::type_II(6), CartanDomain::type_IV(12), CartanDomain::type_I(3, 5)}) {
    auto poly = bergman_poly(dom, mu);
    EXPECT_FALSE(poly.exact);
    auto a = extract_coeffs(poly);
    EXPECT_LT(rel(a[1], cartan_a1(dom, mu)), 1e-14);
    EXPECT_LT(rel(a[2], cartan_a2(dom, mu)), 1e-13);
  }
}

TEST(BergmanPoly, EvaluationMatchesProduct) {
  std::mt19937_64 rng(11);
  for (const auto& dom : {CartanDomain::ball(3), CartanDomain::type_III(3), CartanDomain::type_IV(6),
                          CartanDomain::type_II(5)}) {
    for (double mu : {0.5, 1.0, std::sqrt(3.0)}) {
      auto poly = bergman_poly(dom, mu);
      std::uniform_real_distribution<double> ua((dom.p - 1) / mu + 0.1, (dom.p - 1) / mu + 10.0);
      for (int i = 0; i < 10; ++i) {
        const double alpha = ua(rng);
        const double f = bergman_function(dom, mu, alpha);
        EXPECT_LT(std::abs(poly.evaluate(alpha) - f) / std::abs(f), 1e-12) << dom.name();
      }
    }
  }
}

TEST(RationalMu, Recognition) {
  EXPECT_EQ(*rational_mu(0.5), Rational(1, 2));
  EXPECT_EQ(*rational_mu(7.0 / 3.0), Rational(7, 3));
  EXPECT_FALSE(rational_mu(std::sqrt(2.0)).has_value());
  EXPECT_FALSE(rational_mu(-1.0).has_value());
}

// Curvature of -mu ln N computed by the oracle against both closed forms.
TEST(OracleTriangle, SmallDomains) {
  std::mt19937_64 rng(42);
  for (const auto& dom : {CartanDomain::ball(1), CartanDomain::ball(2), CartanDomain::type_III(2)}) {
    for (double mu : {0.5, 1.0, 2.0}) {
      auto pot = base_potential(dom, mu);
      for (int i = 0; i < 2; ++i) {
        auto z = random_point(dom, 0.7, rng);
        auto inv = curvature_invariants(pot, z);
        EXPECT_LT(rel(inv.a1, cartan_a1(dom, mu)), 1e-7) << dom.name() << " mu=" << mu;
        EXPECT_LT(rel(inv.a2, cartan_a2(dom, mu)), 1e-7) << dom.name() << " mu=" << mu;
        auto base = cartan_base_invariants(dom, mu);
        EXPECT_LT(rel(inv.riem_norm2, base.riem2), 1e-7);
        EXPECT_LT(std::abs(inv.lap_k), 1e-7);
      }
    }
  }
}
