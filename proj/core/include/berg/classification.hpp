#pragma once

// Constant-coefficient classification: verdicts, constancy sweeps, and the
// automorphism pullback test on ball bases.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "berg/cartan.hpp"
#include "berg/hartogs.hpp"

namespace berg {

inline constexpr double kConstancyTol = 1e-7;       // relative stddev
inline constexpr double kNegativeControlTol = 1e-3;  // stddev a non-constant run must exceed
inline constexpr double kClassifyTol = 1e-9;

struct ClassificationVerdict {
  bool constant = false;
  std::optional<FSpec> f;
  std::optional<double> expected_a1, expected_a2;
  std::string reason;
  // Overall scale nu of the theorem's family; coefficients scale as 1/nu, 1/nu^2.
  double nu = 1.0;
};

ClassificationVerdict classify(int d, int d0, double a1_base, double a2_base);
ClassificationVerdict cartan_hartogs_verdict(const CartanDomain& dom, double mu, int d0);

struct ConstancyReport {
  int samples = 0;
  double mean_a1 = 0, mean_a2 = 0;
  double stddev_a1 = 0, stddev_a2 = 0;  // population standard deviation
  double max_oracle_closed_gap = 0;     // oracle mode with a closed path only
  bool constant = false;                // both relative stddevs below kConstancyTol
  bool pass = false;                    // constant == expectation (and gaps small)
  bool incomplete = false;              // LogType with c < 1
  std::vector<double> a1, a2;
  std::vector<std::string> notes;
};

struct AnalyticConfig {
  MomentumProfile profile;
  int d = 1, d0 = 1;
  double a1_base = 0, a2_base = 0;
  std::optional<double> x_lo, x_hi;  // default interval when absent
  int samples = 20;
  bool expect_constant = true;
  std::optional<FSpec> f;  // only used for notes
};

// Default sampling interval in x for the given fiber dimension and profile.
std::pair<double, double> default_x_interval(const MomentumProfile& p, int d0);

ConstancyReport verify_constancy_analytic(const AnalyticConfig& cfg);

struct OracleGridConfig {
  PolarizedPotential base;
  int d = 1;
  FSpec f;
  std::vector<std::vector<cplx>> points;  // (z, w) concatenated
  std::optional<BaseInvariants> base_invariants;  // enables the closed path
  bool expect_constant = true;
};

ConstancyReport verify_constancy_oracle(const OracleGridConfig& cfg);

// Points (z, w) with ||w||^2 in [0.05, 0.9] e^{-phi(z)} over the given z.
std::vector<std::vector<cplx>> hartogs_points(const PolarizedPotential& base, std::span<const std::vector<cplx>> zs,
                                              int d0, std::mt19937_64& rng);

// Upsilon(z, w) = (V phi_a(z), psi(z) w U) on a ball-based Cartan-Hartogs domain.
struct BallAutomorphism {
  CVector a;  // preimage of 0
  CMatrix V;  // d x d unitary
  CMatrix U;  // d0 x d0 unitary
  double mu = 1.0;

  std::vector<cplx> apply(std::span<const cplx> zw) const;
  static BallAutomorphism identity(int d, int d0, double mu);
  static BallAutomorphism random(int d, int d0, double mu, double radius, std::mt19937_64& rng);
};

// Max relative deviation of the oracle invariants between p and Upsilon(p).
double pullback_invariance_check(const CartanDomain& dom, double mu, const FSpec& f,
                                 std::span<const BallAutomorphism> maps, std::span<const std::vector<cplx>> points);

}  // namespace berg
