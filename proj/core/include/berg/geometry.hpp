#pragma once

// Curvature oracle: metric, Ricci and Riemann tensors, scalar curvature and
// its Laplacian, computed from a polarized Kähler potential by jet arithmetic.

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "berg/jet.hpp"
#include "berg/jet_matrix.hpp"

namespace berg {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr int kDefaultOrder = 6;

// Potential with holomorphic arguments Z (first n) and independent
// antiholomorphic copies W (last n).
struct PolarizedPotential {
  int num_holo = 0;
  std::function<Jet(std::span<const Jet>)> evaluate;

  // Plain value at (z, conj(z)).
  cplx value(std::span<const cplx> z) const;
};

struct MetricAtPoint {
  int n = 0;
  CMatrix T;
  CMatrix T_inv;
  cplx det_T;
  // d^2 Phi / dZ_i dW_j with two orders removed from the seed order.
  JetMatrix T_jets;
};

struct CurvatureInvariants {
  double k = 0, ric_norm2 = 0, riem_norm2 = 0, lap_k = 0, a1 = 0, a2 = 0;
};

// a1 = k/2 and the a2 combination of the four invariants.
CurvatureInvariants assemble_coefficients(double k, double ric_norm2, double riem_norm2, double lap_k);

// Full contraction and, at diagonal metrics, the diagonal shortcut.
struct RiemannNorm {
  double full = 0;
  std::optional<double> diagonal;
  bool agree = true;  // false only when the two values differ beyond 1e-8
};

// Everything computed along the way, for callers that want more than the
// bundle.
struct OracleResult {
  MetricAtPoint metric;
  CMatrix ricci;
  CurvatureInvariants invariants;
  RiemannNorm riemann;
};

// Seeds Z at point and W at conj(point), evaluates the potential.
Jet polarized_jet(const PolarizedPotential& pot, std::span<const cplx> point, int order = kDefaultOrder);

MetricAtPoint metric_tensor(const PolarizedPotential& pot, std::span<const cplx> point,
                            int order = kDefaultOrder);
CMatrix ricci_tensor(const PolarizedPotential& pot, std::span<const cplx> point);
double scalar_curvature(const PolarizedPotential& pot, std::span<const cplx> point);
double ricci_norm2(const PolarizedPotential& pot, std::span<const cplx> point);
RiemannNorm riemann_norm2(const PolarizedPotential& pot, std::span<const cplx> point);
double laplacian_scalar(const PolarizedPotential& pot, std::span<const cplx> point);
CurvatureInvariants curvature_invariants(const PolarizedPotential& pot, std::span<const cplx> point);
OracleResult evaluate_oracle(const PolarizedPotential& pot, std::span<const cplx> point);

// R_{i jbar k lbar} stored at [((i*n + j)*n + k)*n + l]; symmetries are
// checked before returning.
std::vector<cplx> riemann_tensor(const MetricAtPoint& m);
RiemannNorm riemann_contraction(const MetricAtPoint& m, const std::vector<cplx>& R);

// Relative tolerances of the built-in checks.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kRealityTol = 1e-9;
inline constexpr double kSymmetryTol = 1e-8;
inline constexpr double kMinEigenvalue = 1e-6;

// Returns the real part after checking |imag| <= kRealityTol * max(|value|, 1).
double checked_real(cplx v, const char* what);

}  // namespace berg
