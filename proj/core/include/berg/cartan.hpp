#pragma once

// Classical Cartan domains: numeric invariants, generic norms, invariant
// potentials, closed a1/a2 and the exact Bergman function polynomial.

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "berg/geometry.hpp"
#include "berg/hartogs.hpp"

namespace berg {

using Rational = boost::multiprecision::cpp_rational;
using Extended = boost::multiprecision::cpp_dec_float_50;

enum class CartanKind { TypeI, TypeII, TypeIII, TypeIV, ExceptionalV, ExceptionalVI };

struct CartanDomain {
  CartanKind kind = CartanKind::TypeI;
  int m = 1, n = 1;  // TypeI uses both; TypeII/III/IV use n
  int a = 2, b = 0, r = 1;
  int d = 1, p = 2;

  static CartanDomain type_I(int m, int n);
  static CartanDomain type_II(int size);
  static CartanDomain type_III(int n);
  static CartanDomain type_IV(int n);
  static CartanDomain ball(int d) { return type_I(1, d); }
  static CartanDomain exceptional_16();
  static CartanDomain exceptional_27();

  bool is_ball() const { return kind == CartanKind::TypeI && m == 1; }
  bool supported() const { return kind != CartanKind::ExceptionalV && kind != CartanKind::ExceptionalVI; }
  std::string name() const;
};

// Every classical parameterization with dimension <= dmax.
std::vector<CartanDomain> catalog_up_to(int dmax);

// N(z, zbar) in raw matrix coordinates: TypeI row-major m x n entries,
// TypeII strict upper triangle, TypeIII upper triangle with diagonal, TypeIV
// the vector itself. zbar is the independent conjugate copy.
Jet generic_norm(const CartanDomain& dom, std::span<const Jet> z, std::span<const Jet> zbar);
cplx generic_norm(const CartanDomain& dom, std::span<const cplx> z);

// Raw coordinates of the point with normalized coordinates u (Hessian of the
// potential at 0 is mu I in u).
std::vector<cplx> raw_coordinates(const CartanDomain& dom, std::span<const cplx> u);
// True when u (normalized coordinates) lies in the domain.
bool in_domain(const CartanDomain& dom, std::span<const cplx> u);
// Random point in normalized coordinates with operator norm of the raw matrix
// at most `radius` < 1.
std::vector<cplx> random_point(const CartanDomain& dom, double radius, std::mt19937_64& rng);

// phi = -mu ln N in normalized coordinates.
PolarizedPotential base_potential(const CartanDomain& dom, double mu);

double cartan_a1(const CartanDomain& dom, double mu);
double cartan_a2(const CartanDomain& dom, double mu);
// Exact forms; empty when mu has no small-denominator rational form.
std::optional<Rational> rational_mu(double mu);
Rational cartan_a1_exact(const CartanDomain& dom, const Rational& mu);
Rational cartan_a2_exact(const CartanDomain& dom, const Rational& mu);

// Kähler-Einstein invariants of (dom, -mu ln N).
BaseInvariants cartan_base_invariants(const CartanDomain& dom, double mu);

// Rising factorial x (x+1) ... (x+k-1).
double pochhammer(double x, int k);

// Throws AlphaTooSmall for alpha <= (p-1)/mu.
double bergman_function(const CartanDomain& dom, double mu, double alpha);

struct BergmanPolynomial {
  bool exact = false;
  std::vector<Rational> rational;  // ascending, when exact
  std::vector<Extended> extended;  // ascending, otherwise

  int degree() const;
  std::vector<double> coefficients() const;  // ascending, rounded
  double evaluate(double alpha) const;
  // Coefficient of alpha^(degree - j) as a string (exact fraction or 30 digits).
  std::string coefficient_string(int j) const;
};

BergmanPolynomial bergman_poly(const CartanDomain& dom, double mu);

// a_j = coefficient of alpha^(d-j), j = 0..max(d, 2).
std::vector<double> extract_coeffs(const BergmanPolynomial& poly);

}  // namespace berg
