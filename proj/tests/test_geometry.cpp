#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "berg/errors.hpp"
#include "berg/geometry.hpp"

using namespace berg;

namespace {

// |z|^2 in polarized form
PolarizedPotential flat(int n) {
  return {n, [n](std::span<const Jet> a) {
            Jet s(a[0].space_ptr());
            for (int i = 0; i < n; ++i) s += a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(n + i)];
            return s;
          }};
}

// -mu ln(1 - |z|^2)
PolarizedPotential ball(int n, double mu = 1.0) {
  return {n, [n, mu](std::span<const Jet> a) {
            Jet s = Jet::constant(a[0].num_vars(), a[0].order(), 1.0);
            for (int i = 0; i < n; ++i) s -= a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(n + i)];
            return -mu * log(s);
          }};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1.0); }

}  // namespace

TEST(MetricTensor, FlatIsIdentity) {
  std::vector<cplx> p{{0.3, 0.1}, {-0.2, 0.5}};
  auto m = metric_tensor(flat(2), p);
  EXPECT_LT((m.T - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(std::abs(m.det_T - 1.0), 1e-15);
}

TEST(MetricTensor, BallAtOrigin) {
  std::vector<cplx> p{0.0};
  auto m = metric_tensor(ball(1), p);
  EXPECT_LT(std::abs(m.T(0, 0) - 1.0), 1e-15);
}

TEST(MetricTensor, BallOffOriginMatchesHand) {
  // T = (1 - |z|^2)^-2
  std::vector<cplx> p{{0.3, 0.4}};
  auto m = metric_tensor(ball(1), p);
  EXPECT_LT(std::abs(m.T(0, 0) - 1.0 / std::pow(0.75, 2)), 1e-13);
}

TEST(MetricTensor, RejectsDegenerate) {
  PolarizedPotential zero{1, [](std::span<const Jet> a) { return Jet(a[0].space_ptr()); }};
  std::vector<cplx> p{0.1};
  EXPECT_THROW(metric_tensor(zero, p), NotPositiveDefinite);
}

TEST(RicciTensor, FlatAndBalls) {
  std::vector<cplx> p1{0.0}, p2{0.0, 0.0};
  EXPECT_LT(ricci_tensor(flat(2), p2).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(std::abs(ricci_tensor(ball(1), p1)(0, 0) + 2.0), 1e-14);
  EXPECT_LT((ricci_tensor(ball(2), p2) + 3.0 * CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(CurvatureInvariants, FlatIsZero) {
  std::vector<cplx> p{{0.3, 0.1}, {-0.2, 0.5}};
  auto inv = curvature_invariants(flat(2), p);
  EXPECT_NEAR(inv.k, 0.0, 1e-14);
  EXPECT_NEAR(inv.ric_norm2, 0.0, 1e-14);
  EXPECT_NEAR(inv.riem_norm2, 0.0, 1e-14);
  EXPECT_NEAR(inv.lap_k, 0.0, 1e-14);
  EXPECT_NEAR(inv.a2, 0.0, 1e-14);
}

TEST(CurvatureInvariants, UnitDisc) {
  for (cplx z : {cplx(0.0), cplx(0.5, -0.2), cplx(0.0, 0.85)}) {
    std::vector<cplx> p{z};
    auto inv = curvature_invariants(ball(1), p);
    EXPECT_LT(rel(inv.k, -2.0), 1e-10);
    EXPECT_LT(rel(inv.ric_norm2, 4.0), 1e-10);
    EXPECT_LT(rel(inv.riem_norm2, 4.0), 1e-10);
    EXPECT_LT(std::abs(inv.lap_k), 1e-9);
    EXPECT_LT(std::abs(inv.a2), 1e-9);
  }
}

TEST(CurvatureInvariants, TwoBall) {
  std::vector<cplx> p{{0.2, 0.1}, {-0.3, 0.25}};
  auto res = evaluate_oracle(ball(2), p);
  EXPECT_LT(rel(res.invariants.k, -6.0), 1e-10);
  EXPECT_LT(rel(res.invariants.a1, -3.0), 1e-10);
  EXPECT_LT(rel(res.invariants.a2, 2.0), 1e-9);
  EXPECT_LT(std::abs(res.invariants.lap_k), 1e-8);
}

TEST(RiemannNorm, DiagonalShortcutAgrees) {
  std::vector<cplx> p{0.0, 0.0};
  auto r = riemann_norm2(ball(2), p);
  ASSERT_TRUE(r.diagonal.has_value());
  EXPECT_TRUE(r.agree);
  EXPECT_LT(rel(*r.diagonal, r.full), 1e-12);
  // non-diagonal point: shortcut not applicable
  std::vector<cplx> q{{0.2, 0.1}, {-0.3, 0.25}};
  EXPECT_FALSE(riemann_norm2(ball(2), q).diagonal.has_value());
}

TEST(OracleProperties, UnitaryChangeOfCoordinates) {
  // potential of a non-homogeneous metric, precomposed with a unitary map
  auto pot = [](const CMatrix& U) {
    return PolarizedPotential{2, [U](std::span<const Jet> a) {
                                std::vector<Jet> z, w;
                                for (int i = 0; i < 2; ++i) {
                                  Jet zi(a[0].space_ptr()), wi(a[0].space_ptr());
                                  for (int j = 0; j < 2; ++j) {
                                    zi += U(i, j) * a[static_cast<std::size_t>(j)];
                                    wi += std::conj(U(i, j)) * a[static_cast<std::size_t>(2 + j)];
                                  }
                                  z.push_back(zi);
                                  w.push_back(wi);
                                }
                                Jet q = z[0] * w[0] + z[1] * w[1];
                                return q + 0.3 * q * q + 0.1 * z[0] * z[0] * w[0] * w[0] + exp(0.2 * z[1] * w[1]);
                              }};
  };
  std::mt19937 rng(1);
  std::normal_distribution<double> g;
  CMatrix X(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) X(i, j) = {g(rng), g(rng)};
  const CMatrix U = Eigen::HouseholderQR<CMatrix>(X).householderQ();
  std::vector<cplx> p{{0.2, -0.1}, {0.4, 0.3}};
  std::vector<cplx> q(2);
  // U applied to the rotated point gives p back in the original frame
  CVector pv(2);
  pv << p[0], p[1];
  CVector qv = U.adjoint() * pv;
  q[0] = qv(0);
  q[1] = qv(1);
  auto a = curvature_invariants(pot(CMatrix::Identity(2, 2)), p);
  auto b = curvature_invariants(pot(U), q);
  EXPECT_LT(rel(b.k, a.k), 1e-8);
  EXPECT_LT(rel(b.riem_norm2, a.riem_norm2), 1e-8);
  EXPECT_LT(rel(b.lap_k, a.lap_k), 1e-8);
  EXPECT_LT(rel(b.a2, a.a2), 1e-8);
}

TEST(CheckedReal, RejectsImaginaryResidue) {
  EXPECT_DOUBLE_EQ(checked_real({2.0, 1e-12}, "x"), 2.0);
  EXPECT_THROW(checked_real({2.0, 1e-3}, "x"), RealityViolation);
}
