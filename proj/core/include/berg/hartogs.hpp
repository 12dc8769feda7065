#pragma once

// Hartogs metrics Phi_F(z, w) = phi(z) + F(phi(z) + ln|w|^2): F families,
// momentum profiles, and the closed formulas for the curvature invariants and
// the expansion coefficients.

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "berg/geometry.hpp"
#include "berg/rational_function.hpp"

namespace berg {

// F(t) = -(1/A) ln(1 - c e^t)
struct LogType {
  double A = 1.0, c = 1.0;
};
// F(t) = c e^t
struct ExpType {
  double c = 1.0;
};
// F(t) = -(1/A) ln|cos(mu A t + c)| + lambda t
struct CosType {
  double A = 1.0, mu = 1.0, c = 0.0, lambda = 0.0;
};
// F(t) = lambda t^2 + c t
struct QuadraticType {
  double lambda = 1.0, c = 0.0;
};
// Arbitrary F given by its derivatives: deriv(t, k) = F^(k)(t).
struct Custom {
  std::function<double(double, int)> deriv;
  std::string name = "custom";
};

struct FSpec {
  std::variant<LogType, ExpType, CosType, QuadraticType, Custom> family;
  int d0 = 1;  // fiber dimension

  // F(t), F'(t), ..., F^(kmax)(t). Throws DomainViolation outside the
  // family's t-range.
  std::vector<double> derivatives(double t, int kmax) const;
  std::string describe() const;
};

// Parameter constraints of the named families; throws DomainViolation.
void check_parameters(const FSpec& f);
// Positivity of the fiber metric at t; throws PositivityViolation.
void check_positivity(const FSpec& f, double t);

struct MomentumProfile {
  RationalFunction phi;
  double x_lo = 0.0;
  double x_hi = std::numeric_limits<double>::infinity();

  double operator()(double x) const { return phi(x); }
  // Taylor coefficients phi^(k)(x)/k!, k = 0..order.
  std::vector<double> taylor(double x, int order) const;
};

struct BaseInvariants {
  double k = 0, ric2 = 0, riem2 = 0, lapk = 0, a1 = 0, a2 = 0;

  static BaseInvariants from(const CurvatureInvariants& c);
  // Einstein-type base with the given scalar data; a1, a2 filled in.
  static BaseInvariants make(double k, double ric2, double riem2, double lapk);
};

// Polarized Phi_F over d + f.d0 variables, z first then w.
PolarizedPotential hartogs_potential(const PolarizedPotential& base, const FSpec& f);

// Value, gradient d phi/dz_i and Hessian of the base potential at z.
struct BaseData {
  double phi = 0;
  CVector dphi;
  CMatrix H;
};
BaseData base_data(const PolarizedPotential& base, std::span<const cplx> z);

struct MetricBlocks {
  double t = 0, Fp = 0, Fpp = 0, r2 = 0;
  CMatrix T1, T2, T3, T4;
  CMatrix Tinv1, Tinv2, Tinv3, Tinv4;
  CMatrix T, T_inv;  // assembled
  double det_T = 0;
};
// Block form of the Hartogs metric at (z, w); w must be nonzero.
MetricBlocks metric_blocks(const PolarizedPotential& base, const FSpec& f, std::span<const cplx> z,
                           std::span<const cplx> w);

// Throws UnsupportedFamily for Custom.
MomentumProfile profile_from_F(const FSpec& f);

double sigma(const MomentumProfile& p, int d, int d0, double x);
double chi(const MomentumProfile& p, int d, int d0, double x);

// x-side closed forms for k, |Ric|^2, Lap k and |R|^2, with a1, a2 assembled
// from them.
CurvatureInvariants invariants_closed(const MomentumProfile& p, int d, int d0, double x, const BaseInvariants& base);

struct Coefficients {
  double a1 = 0;
  double a2 = 0;
};
// Expansion coefficients directly from the base a1, a2.
Coefficients coefficients_closed(const MomentumProfile& p, int d, int d0, double x, double a1_base, double a2_base);

// t-side closed forms; only k, ric_norm2 and lap_k are filled.
struct TSideTerms {
  double G1 = 0, G2 = 0, psi1 = 0, psi2 = 0;
};
CurvatureInvariants invariants_t_side(const FSpec& f, int d, double t, const BaseInvariants& base,
                                      TSideTerms* terms = nullptr);

enum class TheoremKind { xx1, quad_d1, general_d01 };
TheoremKind parse_theorem_kind(const std::string& s);  // throws InvalidKind

// xx1: phi = x(1+x); quad_d1: phi = A x^2 + x with d = 1;
// general_d01: phi = A(1+x)^2 - B(1+x) + C1 (1+x)^(1-d) + C2 (1+x)^(-d) with d0 = 1.
struct TheoremParams {
  double A = 1.0, B = 0.0, C1 = 0.0, C2 = 0.0;
};
struct TheoremCoefficients {
  double a1 = 0;
  std::optional<double> a2;  // only where the specialized a2 formula applies
};
TheoremCoefficients theorem_profile_coeffs(TheoremKind kind, const TheoremParams& params, double a1_base,
                                           double a2_base, int d, int d0, double x);
// The profile each kind refers to.
MomentumProfile theorem_profile(TheoremKind kind, const TheoremParams& params, int d);

// phi = x(1+x)
MomentumProfile profile_xx1();
// A(1+x)^2 - B(1+x) + C1/(1+x)^(d-1) + C2/(1+x)^d
MomentumProfile profile_general_d01(int d, double A, double B, double C1, double C2);
// ((d0 - a1)/(d0 + 1) + d0 C/2) x^2 + (C + 1) x - C + C/(1 + x)
MomentumProfile profile_d1_fiber(int d0, double a1, double C);

struct FTable {
  std::vector<double> t, x, F;
};
// Integrates dx/dt = phi(x), dF/dt = x over t_grid (increasing, negative),
// normalized so that F -> 0 as t -> -inf and x -> x_hi as t -> 0. x0 overrides
// the starting value x(t_grid[0]).
FTable F_from_profile(const MomentumProfile& p, std::span<const double> t_grid, std::optional<double> x0 = {});

}  // namespace berg
