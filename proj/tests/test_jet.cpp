#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "berg/errors.hpp"
#include "berg/jet.hpp"
#include "berg/jet_matrix.hpp"

using namespace berg;

namespace {

// Random jet with given constant term; higher coefficients uniform in [-1,1].
Jet random_jet(int nv, int order, cplx c0, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Jet j(nv, order);
  auto c = j.coefficients();
  c[0] = c0;
  for (std::size_t i = 1; i < c.size(); ++i) c[i] = {u(rng), u(rng)};
  return j;
}

}  // namespace

TEST(JetSpace, RankMatchesEnumeration) {
  for (int nv : {1, 2, 3, 5}) {
    for (int order : {0, 1, 4, 6}) {
      auto sp = JetSpace::get(nv, order);
      for (std::size_t r = 0; r < sp->size(); ++r) EXPECT_EQ(sp->rank(sp->index(r)), r);
    }
  }
}

TEST(JetSpace, SizeIsBinomial) {
  // C(n + m, m) monomials of degree <= m in n variables
  EXPECT_EQ(JetSpace::get(6, 6)->size(), 924u);
  EXPECT_EQ(JetSpace::get(8, 6)->size(), 3003u);
  EXPECT_EQ(JetSpace::get(1, 3)->size(), 4u);
}

TEST(JetSpace, RankIsOrderIndependent) {
  auto lo = JetSpace::get(3, 2);
  auto hi = JetSpace::get(3, 5);
  for (std::size_t r = 0; r < lo->size(); ++r) EXPECT_EQ(hi->rank(lo->index(r)), r);
}

TEST(JetSeed, IdentitySeed) {
  std::vector<cplx> p{0.0};
  auto s = jet_seed(p, 2);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0][0], cplx(0.0));
  EXPECT_EQ(s[0][1], cplx(1.0));
  EXPECT_EQ(s[0][2], cplx(0.0));
}

TEST(JetSeed, ProductOfConstants) {
  std::vector<cplx> p{{3, 0}, {1, -2}};
  auto s = jet_seed(p, 1);
  EXPECT_EQ(s[0].constant_term(), cplx(3, 0));
  EXPECT_EQ(s[1].constant_term(), cplx(1, -2));
  EXPECT_EQ((s[0] * s[1]).constant_term(), cplx(3, -6));
}

TEST(JetArith, MercatorSeries) {
  Jet x = Jet::variable(1, 3, 0, 1.0);
  Jet l = log(x);
  EXPECT_NEAR(std::abs(l[0]), 0.0, 1e-15);
  EXPECT_NEAR(l[1].real(), 1.0, 1e-15);
  EXPECT_NEAR(l[2].real(), -0.5, 1e-15);
  EXPECT_NEAR(l[3].real(), 1.0 / 3.0, 1e-15);
}

TEST(JetArith, ExpLogRecoversLinear) {
  Jet x = Jet::variable(1, 6, 0, 2.0);
  Jet y = exp(log(x));
  for (std::size_t i = 0; i < y.coefficients().size(); ++i) EXPECT_NEAR(std::abs(y[i] - x[i]), 0.0, 1e-14);
}

TEST(JetArith, ProductOfTwoVariables) {
  auto s = jet_seed(std::vector<cplx>{0.0, 0.0}, 2);
  Jet p = s[0] * s[1];
  for (std::size_t r = 0; r < p.coefficients().size(); ++r) {
    const bool is_11 = p.space().index(r) == MultiIndex{1, 1};
    EXPECT_EQ(p[r], cplx(is_11 ? 1.0 : 0.0));
  }
}

TEST(JetArith, Errors) {
  Jet zero(2, 3);
  EXPECT_THROW(reciprocal(zero), DivisionBySingularJet);
  EXPECT_THROW(log(zero), LogOfZero);
  EXPECT_THROW(Jet(2, 3) + Jet(2, 4), ShapeMismatch);
  EXPECT_THROW(zero.coefficient(MultiIndex{3, 1}), OrderExceeded);
  EXPECT_THROW(zero.coefficient(MultiIndex{1, 1, 0}), ShapeMismatch);
}

TEST(MixedPartial, PolynomialAtOrigin) {
  auto s = jet_seed(std::vector<cplx>{0.0, 0.0}, 4);
  Jet zw = s[0] * s[1];
  Jet f = zw + zw * zw;
  EXPECT_NEAR(std::abs(f.mixed_partial(MultiIndex{1, 1}) - 1.0), 0.0, 1e-15);
}

TEST(MixedPartial, PolynomialAtOne) {
  // d^2/dz dw of zw + (zw)^2 is 1 + 4zw
  auto s = jet_seed(std::vector<cplx>{1.0, 1.0}, 4);
  Jet zw = s[0] * s[1];
  Jet f = zw + zw * zw;
  EXPECT_NEAR(std::abs(f.mixed_partial(MultiIndex{1, 1}) - 5.0), 0.0, 1e-14);
}

TEST(MixedPartial, FactorialScaling) {
  auto s = jet_seed(std::vector<cplx>{0.0, 0.0}, 6);
  Jet zw = s[0] * s[1];
  Jet f = zw * zw * zw;
  EXPECT_NEAR(std::abs(f.mixed_partial(MultiIndex{3, 3}) - 36.0), 0.0, 1e-12);
}

TEST(MixedPartial, MatchesHandDerivativesOfPolynomial) {
  // f = z^2 w^3 + 2 z w at (0.7, -0.4)
  const cplx z0 = 0.7, w0 = -0.4;
  auto s = jet_seed(std::vector<cplx>{z0, w0}, 6);
  Jet f = s[0] * s[0] * s[1] * s[1] * s[1] + 2.0 * s[0] * s[1];
  auto rel = [](cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  EXPECT_LT(rel(f.mixed_partial(MultiIndex{1, 0}), 2.0 * z0 * w0 * w0 * w0 + 2.0 * w0), 1e-12);
  EXPECT_LT(rel(f.mixed_partial(MultiIndex{1, 1}), 6.0 * z0 * w0 * w0 + 2.0), 1e-12);
  EXPECT_LT(rel(f.mixed_partial(MultiIndex{2, 3}), 12.0), 1e-12);
  EXPECT_LT(rel(f.mixed_partial(MultiIndex{2, 2}), 12.0 * w0), 1e-12);
  EXPECT_LT(rel(f.mixed_partial(MultiIndex{0, 4}), 0.0), 1e-12);
}

TEST(JetProperties, ProductRule) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Jet a = random_jet(3, 4, {1.3, -0.2}, rng);
    Jet b = random_jet(3, 4, {-0.5, 0.8}, rng);
    Jet ab = a * b;
    for (int v = 0; v < 3; ++v) {
      auto e = MultiIndex::unit(3, v);
      const cplx lhs = ab.mixed_partial(e);
      const cplx rhs = a.mixed_partial(e) * b.constant_term() + a.constant_term() * b.mixed_partial(e);
      EXPECT_LT(std::abs(lhs - rhs), 1e-13);
    }
  }
}

TEST(JetProperties, LogExpRoundTrip) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> c0(0.1, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    Jet a = random_jet(2, 6, c0(rng), rng);
    Jet b = log(exp(a));
    Jet c = exp(log(a));
    for (std::size_t i = 0; i < a.coefficients().size(); ++i) {
      const double scale = std::max(1.0, std::abs(a[i]));
      EXPECT_LT(std::abs(b[i] - a[i]) / scale, 1e-10);
      EXPECT_LT(std::abs(c[i] - a[i]) / scale, 1e-10);
    }
  }
}

TEST(JetFunctions, SqrtSquares) {
  std::mt19937 rng(3);
  Jet a = random_jet(2, 5, {2.0, 0.5}, rng);
  Jet r = sqrt(a);
  Jet back = r * r;
  for (std::size_t i = 0; i < a.coefficients().size(); ++i) EXPECT_LT(std::abs(back[i] - a[i]), 1e-12);
}

TEST(JetFunctions, SinCosIdentity) {
  std::mt19937 rng(5);
  Jet a = random_jet(2, 5, {0.3, 0.1}, rng);
  Jet one = sin(a) * sin(a) + cos(a) * cos(a);
  EXPECT_LT(std::abs(one[0] - 1.0), 1e-14);
  for (std::size_t i = 1; i < one.coefficients().size(); ++i) EXPECT_LT(std::abs(one[i]), 1e-12);
}

TEST(JetFunctions, IntegerPowers) {
  Jet x = Jet::variable(1, 4, 0, 2.0);
  Jet p = pow(x, -2);
  // d/dx x^-2 = -2 x^-3
  EXPECT_NEAR(p.mixed_partial(MultiIndex{1}).real(), -0.25, 1e-15);
  EXPECT_NEAR(pow(x, 3).mixed_partial(MultiIndex{3}).real(), 6.0, 1e-14);
  EXPECT_NEAR(pow(x, 0).constant_term().real(), 1.0, 0.0);
}

TEST(JetDerivative, ReducesOrder) {
  auto s = jet_seed(std::vector<cplx>{0.5, 0.25}, 4);
  Jet f = s[0] * s[0] * s[1];
  Jet fz = f.derivative(0);
  EXPECT_EQ(fz.order(), 3);
  EXPECT_LT(std::abs(fz.constant_term() - 2.0 * 0.5 * 0.25), 1e-15);
  EXPECT_LT(std::abs(fz.mixed_partial(MultiIndex{1, 1}) - 2.0), 1e-14);
  EXPECT_THROW(Jet(1, 0).derivative(0), OrderExceeded);
}

TEST(JetMatrix, DeterminantAndInverse) {
  auto sp = JetSpace::get(2, 3);
  auto s = jet_seed(std::vector<cplx>{0.2, -0.1}, 3);
  JetMatrix m(3, sp);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = Jet::constant(2, 3, (i == j ? 2.0 : 0.3 * (i - j))) + (0.1 * (i + 1)) * s[0] * s[1] + double(j) * s[0];
  m(0, 0) = Jet::constant(2, 3, 1e-3) + s[1];  // forces a pivot
  auto inv = jet_inverse(m);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Jet acc(sp);
      for (int k = 0; k < 3; ++k) acc += m(i, k) * inv(k, j);
      for (std::size_t r = 0; r < acc.coefficients().size(); ++r) {
        const cplx want = (r == 0 && i == j) ? 1.0 : 0.0;
        EXPECT_LT(std::abs(acc[r] - want), 1e-9);  // inverse coefficients reach ~1e3
      }
    }
  // det(A) * det(A^-1) = 1 as jets
  Jet one = jet_det(m) * jet_det(inv);
  EXPECT_LT(std::abs(one[0] - 1.0), 1e-12);
  for (std::size_t r = 1; r < one.coefficients().size(); ++r) EXPECT_LT(std::abs(one[r]), 1e-10);
}

TEST(JetMatrix, SingularThrows) {
  auto sp = JetSpace::get(1, 2);
  JetMatrix m(2, sp);
  m(0, 0) = Jet::constant(1, 2, 1.0);
  m(0, 1) = Jet::constant(1, 2, 2.0);
  m(1, 0) = Jet::constant(1, 2, 2.0);
  m(1, 1) = Jet::constant(1, 2, 4.0);
  EXPECT_THROW(jet_lu(m), SingularMatrix);
}
